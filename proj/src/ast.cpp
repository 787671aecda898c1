#include "fm/ast.hpp"

namespace fm::ast {

const char* to_string(BinOp op) noexcept {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    }
    return "?";
}

const char* to_string(RelOp op) noexcept {
    switch (op) {
    case RelOp::Eq: return "==";
    case RelOp::Ne: return "!=";
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
    }
    return "?";
}

Expr var(std::string name) { return Expr{Var{std::move(name)}}; }
Expr lit(std::int64_t value) { return Expr{IntLit{value}}; }
Expr binary(BinOp op, Expr lhs, Expr rhs) {
    return Expr{Binary{op, Box<Expr>(std::move(lhs)), Box<Expr>(std::move(rhs))}};
}

int binary_count(const Expr& e) {
    if (const auto* b = std::get_if<Binary>(&e.node)) {
        return 1 + binary_count(*b->lhs) + binary_count(*b->rhs);
    }
    return 0;
}

bool operator==(const If& a, const If& b) { return a.cond == b.cond && a.body == b.body; }
bool operator==(const While& a, const While& b) { return a.cond == b.cond && a.body == b.body; }
bool operator==(const Stmt& a, const Stmt& b) { return a.node == b.node; }

}  // namespace fm::ast
