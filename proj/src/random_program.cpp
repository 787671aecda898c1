#include <random>

#include "fm/random_program.hpp"

namespace fm {

namespace {

using namespace fm::ast;

constexpr std::int64_t kMaxIterations = 50;

class Generator {
public:
    Generator(std::uint64_t seed, int max_statements) : rng_(seed), budget_(max_statements) {}

    Program run() {
        Program p;
        int vars = pick(1, 4);
        for (int i = 1; i <= vars; ++i) vars_.push_back("v" + std::to_string(i));
        int loops = pick(0, 2);
        for (int i = 1; i <= loops; ++i) counters_.push_back("c" + std::to_string(i));

        for (const auto& v : vars_) {
            std::optional<std::int64_t> init;
            if (chance(60)) init = pick(-20, 20);
            p.statements.push_back(stmt(Decl{v, init}));
        }
        for (const auto& c : counters_) p.statements.push_back(stmt(Decl{c, std::nullopt}));
        budget_ -= static_cast<int>(p.statements.size()) + 1;  // the final return

        std::vector<Stmt> body = block(false, budget_);
        for (auto& s : body) p.statements.push_back(std::move(s));
        p.statements.push_back(stmt(Return{pick(0, 3)}));
        return p;
    }

private:
    std::int64_t pick(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool chance(int percent) { return pick(1, 100) <= percent; }

    template <typename T>
    Stmt stmt(T node) {
        return Stmt{std::move(node), 0};
    }

    const std::string& any_var() { return vars_[static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(vars_.size()) - 1))]; }

    Expr operand() {
        if (chance(60)) {
            // Loop counters are readable but never written outside their loop.
            if (!live_counters_.empty() && chance(20)) return var(live_counters_.back());
            return var(any_var());
        }
        return lit(pick(-9, 9));
    }

    Expr expr(int depth) {
        if (depth == 0 || chance(35)) return operand();
        int op = static_cast<int>(pick(0, 3));
        if (op == 3) {
            std::int64_t d = pick(1, 5) * (chance(50) ? 1 : -1);
            return binary(BinOp::Div, expr(depth - 1), lit(d));
        }
        static constexpr BinOp kOps[] = {BinOp::Add, BinOp::Sub, BinOp::Mul};
        return binary(kOps[op], expr(depth - 1), expr(depth - 1));
    }

    Condition condition() {
        static constexpr RelOp kOps[] = {RelOp::Eq, RelOp::Ne, RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge};
        return Condition{operand(), kOps[pick(0, 5)], operand()};
    }

    Stmt simple() {
        switch (pick(0, 2)) {
        case 0: {
            Input in;
            int n = static_cast<int>(pick(1, 2));
            for (int i = 0; i < n; ++i) in.targets.push_back(any_var());
            return stmt(std::move(in));
        }
        case 1: {
            static const char* kTexts[] = {"value: ", " ", "sum\n", "x=", "done", "\t|"};
            Output out;
            int n = static_cast<int>(pick(1, 4));
            for (int i = 0; i < n; ++i) {
                switch (pick(0, 3)) {
                case 0: out.items.emplace_back(StringLit{kTexts[pick(0, 5)]}); break;
                case 1: out.items.emplace_back(Endl{}); break;
                default: out.items.emplace_back(expr(2)); break;
                }
            }
            return stmt(std::move(out));
        }
        default: return stmt(Assign{any_var(), expr(3)});
        }
    }

    // `budget` statements may be spent; `in_loop` forbids nested loops.
    std::vector<Stmt> block(bool in_loop, int budget) {
        std::vector<Stmt> out;
        int target = static_cast<int>(pick(1, std::max<std::int64_t>(1, std::min(budget, 8))));
        while (budget > 0 && static_cast<int>(out.size()) < target) {
            int kind = static_cast<int>(pick(0, 9));
            if (kind == 8 && budget >= 2) {
                int inner = std::min(budget - 1, 3);
                If f{condition(), block(in_loop, static_cast<int>(pick(1, inner)))};
                budget -= 1 + count(f.body);
                out.push_back(stmt(std::move(f)));
            } else if (kind == 9 && !in_loop && budget >= 4 && next_counter_ < counters_.size()) {
                const std::string c = counters_[next_counter_++];
                out.push_back(stmt(Assign{c, lit(0)}));
                live_counters_.push_back(c);
                int inner = std::min(budget - 3, 5);
                std::vector<Stmt> body = block(true, static_cast<int>(pick(1, inner)));
                live_counters_.pop_back();
                budget -= 3 + count(body);
                body.push_back(stmt(Assign{c, binary(BinOp::Add, var(c), lit(1))}));
                std::int64_t n = pick(0, kMaxIterations);
                out.push_back(stmt(While{Condition{var(c), RelOp::Lt, lit(n)}, std::move(body)}));
            } else {
                out.push_back(simple());
                budget -= 1;
            }
        }
        return out;
    }

    static int count(const std::vector<Stmt>& stmts) {
        int n = 0;
        for (const auto& s : stmts) {
            ++n;
            if (const auto* f = std::get_if<If>(&s.node)) n += count(f->body);
            if (const auto* w = std::get_if<While>(&s.node)) n += count(w->body);
        }
        return n;
    }

    std::mt19937_64 rng_;
    int budget_;
    std::vector<std::string> vars_;
    std::vector<std::string> counters_;
    std::vector<std::string> live_counters_;
    std::size_t next_counter_ = 0;
};

std::size_t reads(const std::vector<Stmt>& stmts) {
    std::size_t n = 0;
    for (const auto& s : stmts) {
        if (const auto* in = std::get_if<Input>(&s.node)) n += in->targets.size();
        if (const auto* f = std::get_if<If>(&s.node)) n += reads(f->body);
        if (const auto* w = std::get_if<While>(&s.node)) {
            std::size_t bound = kMaxIterations + 1;
            const auto* limit = std::get_if<IntLit>(&w->cond.rhs.node);
            if (limit != nullptr && (w->cond.op == RelOp::Lt || w->cond.op == RelOp::Le)) {
                std::int64_t b = limit->value + (w->cond.op == RelOp::Le ? 1 : 0);
                bound = static_cast<std::size_t>(std::max<std::int64_t>(0, std::min(b, kMaxIterations + 1)));
            }
            n += bound * reads(w->body);
        }
    }
    return n;
}

}  // namespace

std::size_t max_reads(const ast::Program& program) { return reads(program.statements); }

RandomCase random_case(std::uint64_t seed, int scripts, int max_statements) {
    RandomCase rc;
    rc.program = Generator(seed, max_statements).run();
    std::size_t need = max_reads(rc.program);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (int i = 0; i < scripts; ++i) {
        InputScript s;
        for (std::size_t k = 0; k < need; ++k) s.values.push_back(static_cast<std::int64_t>(rng() % 201) - 100);
        rc.scripts.push_back(std::move(s));
    }
    return rc;
}

}  // namespace fm
