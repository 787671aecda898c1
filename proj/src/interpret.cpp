#include <limits>
#include <set>

#include "fm/sim.hpp"

namespace fm {

namespace {

using namespace fm::ast;

class Interpreter {
public:
    Interpreter(const InputScript& script, const Limits& limits) : script_(script), limits_(limits) {}

    Trace run(const Program& p) {
        if (exec(p.statements)) trace_.os_return = status_;
        for (const auto& [name, v] : env_) trace_.memory_final[name] = v;
        return std::move(trace_);
    }

private:
    void tick() {
        if (++trace_.steps > limits_.max_steps) {
            throw SimError(SimErrorKind::StepLimitExceeded,
                           "step limit of " + std::to_string(limits_.max_steps) + " exceeded");
        }
    }

    std::int64_t read(const std::string& name) {
        auto it = env_.find(name);
        if (it != env_.end()) return it->second;
        trace_.warnings.push_back("read of uninitialized '" + name + "'");
        return 0;
    }

    std::int64_t eval(const Expr& e) {
        if (const auto* v = std::get_if<Var>(&e.node)) return read(v->name);
        if (const auto* l = std::get_if<IntLit>(&e.node)) return l->value;
        const auto& b = std::get<Binary>(e.node);
        std::int64_t x = eval(*b.lhs);
        std::int64_t y = eval(*b.rhs);
        // Wrap like two's-complement hardware instead of invoking UB.
        auto ux = static_cast<std::uint64_t>(x);
        auto uy = static_cast<std::uint64_t>(y);
        switch (b.op) {
        case BinOp::Add: return static_cast<std::int64_t>(ux + uy);
        case BinOp::Sub: return static_cast<std::int64_t>(ux - uy);
        case BinOp::Mul: return static_cast<std::int64_t>(ux * uy);
        case BinOp::Div:
            if (y == 0) throw SimError(SimErrorKind::DivisionByZero, "division by zero");
            if (y == -1) return static_cast<std::int64_t>(0 - ux);
            return x / y;
        }
        return 0;
    }

    bool test(const Condition& c) {
        std::int64_t x = eval(c.lhs);
        std::int64_t y = eval(c.rhs);
        switch (c.op) {
        case RelOp::Eq: return x == y;
        case RelOp::Ne: return x != y;
        case RelOp::Lt: return x < y;
        case RelOp::Le: return x <= y;
        case RelOp::Gt: return x > y;
        case RelOp::Ge: return x >= y;
        }
        return false;
    }

    // True once a return has executed.
    bool exec(const std::vector<Stmt>& stmts) {
        for (const auto& s : stmts) {
            tick();
            if (const auto* d = std::get_if<Decl>(&s.node)) {
                if (d->init) env_[d->name] = *d->init;
            } else if (const auto* in = std::get_if<Input>(&s.node)) {
                for (const auto& t : in->targets) {
                    if (cursor_ >= script_.values.size()) {
                        throw SimError(SimErrorKind::InputExhausted, "input script exhausted after " +
                                                                         std::to_string(script_.values.size()) +
                                                                         " values");
                    }
                    env_[t] = script_.values[cursor_++];
                }
            } else if (const auto* out = std::get_if<Output>(&s.node)) {
                for (const auto& item : out->items) {
                    if (const auto* e = std::get_if<Expr>(&item)) {
                        trace_.screen.push_back(std::to_string(eval(*e)));
                    } else if (const auto* str = std::get_if<StringLit>(&item)) {
                        trace_.screen.push_back(str->text);
                    } else {
                        trace_.screen.emplace_back("\n");
                    }
                }
            } else if (const auto* a = std::get_if<Assign>(&s.node)) {
                env_[a->target] = eval(a->value);
            } else if (const auto* f = std::get_if<If>(&s.node)) {
                if (test(f->cond) && exec(f->body)) return true;
            } else if (const auto* w = std::get_if<While>(&s.node)) {
                while (test(w->cond)) {
                    if (exec(w->body)) return true;
                    tick();
                }
            } else {
                status_ = std::get<Return>(s.node).value;
                return true;
            }
        }
        return false;
    }

    const InputScript& script_;
    Limits limits_;
    Trace trace_;
    std::map<std::string, std::int64_t> env_;
    std::size_t cursor_ = 0;
    std::int64_t status_ = 0;
};

}  // namespace

Trace interpret(const ast::Program& program, const InputScript& script, const Limits& limits) {
    return Interpreter(script, limits).run(program);
}

}  // namespace fm
