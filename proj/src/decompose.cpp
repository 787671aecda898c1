#include "fm/compile.hpp"

namespace fm {

namespace {

using namespace fm::ast;

class Decomposer {
public:
    Program run(const Program& p) {
        Program out;
        std::vector<Stmt> body = block(p.statements);
        for (const auto& name : temps_) out.statements.push_back(Stmt{Decl{name, std::nullopt}, 0});
        for (auto& s : body) out.statements.push_back(std::move(s));
        return out;
    }

private:
    std::string fresh() {
        std::string name = std::string(kTempPrefix) + std::to_string(temps_.size() + 1);
        temps_.push_back(name);
        return name;
    }

    // Returns an operand (Var or IntLit) for `e`, emitting temporaries for every binary node.
    Expr atom(const Expr& e, int line, std::vector<Stmt>& out) {
        const auto* b = std::get_if<Binary>(&e.node);
        if (b == nullptr) return e;
        Expr flat = flatten(e, line, out);
        std::string t = fresh();
        out.push_back(Stmt{Assign{t, std::move(flat)}, line});
        return var(t);
    }

    // Keeps the top node, hoisting anything below it.
    Expr flatten(const Expr& e, int line, std::vector<Stmt>& out) {
        const auto* b = std::get_if<Binary>(&e.node);
        if (b == nullptr) return e;
        Expr lhs = atom(*b->lhs, line, out);
        Expr rhs = atom(*b->rhs, line, out);
        return binary(b->op, std::move(lhs), std::move(rhs));
    }

    std::vector<Stmt> block(const std::vector<Stmt>& in) {
        std::vector<Stmt> out;
        for (const auto& s : in) {
            if (const auto* a = std::get_if<Assign>(&s.node)) {
                Expr value = binary_count(a->value) > 1 ? flatten(a->value, s.line, out) : a->value;
                out.push_back(Stmt{Assign{a->target, std::move(value)}, s.line});
            } else if (const auto* o = std::get_if<Output>(&s.node)) {
                Output copy;
                for (const auto& item : o->items) {
                    if (const auto* e = std::get_if<Expr>(&item)) {
                        copy.items.emplace_back(atom(*e, s.line, out));
                    } else {
                        copy.items.push_back(item);
                    }
                }
                out.push_back(Stmt{std::move(copy), s.line});
            } else if (const auto* f = std::get_if<If>(&s.node)) {
                out.push_back(Stmt{If{f->cond, block(f->body)}, s.line});
            } else if (const auto* w = std::get_if<While>(&s.node)) {
                out.push_back(Stmt{While{w->cond, block(w->body)}, s.line});
            } else {
                out.push_back(s);
            }
        }
        return out;
    }

    std::vector<std::string> temps_;
};

}  // namespace

ast::Program decompose_exprs(const ast::Program& program) { return Decomposer{}.run(program); }

}  // namespace fm
