#include <cstdio>

#include "fm/frontend.hpp"

namespace fm {

namespace {

using namespace fm::ast;

int precedence(BinOp op) { return (op == BinOp::Add || op == BinOp::Sub) ? 1 : 2; }

void print_expr(const Expr& e, int parent_prec, bool right, std::string& out) {
    if (const auto* v = std::get_if<Var>(&e.node)) {
        out += v->name;
    } else if (const auto* l = std::get_if<IntLit>(&e.node)) {
        out += std::to_string(l->value);
    } else {
        const auto& b = std::get<Binary>(e.node);
        int p = precedence(b.op);
        bool parens = p < parent_prec || (p == parent_prec && right);
        if (parens) out += '(';
        print_expr(*b.lhs, p, false, out);
        out += ' ';
        out += to_string(b.op);
        out += ' ';
        print_expr(*b.rhs, p, true, out);
        if (parens) out += ')';
    }
}

std::string quote(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        default: {
            auto u = static_cast<unsigned char>(c);
            if (u < 0x20 || u == 0x7f) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\%03o", u);
                out += buf;
            } else {
                out += c;
            }
        }
        }
    }
    out += '"';
    return out;
}

struct ItemPrinter {
    std::string& out;
    void operator()(const Expr& e) const { print_expr(e, 0, false, out); }
    void operator()(const StringLit& s) const { out += quote(s.text); }
    void operator()(const Endl&) const { out += "std::endl"; }
};

void print_block(const std::vector<Stmt>& stmts, int indent, std::string& out);

void print_stmt(const Stmt& s, int indent, std::string& out) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (const auto* f = std::get_if<If>(&s.node)) {
        out += pad + "if (" + condition_text(f->cond) + ") {\n";
        print_block(f->body, indent + 1, out);
        out += pad + "}\n";
    } else if (const auto* w = std::get_if<While>(&s.node)) {
        out += pad + "while (" + condition_text(w->cond) + ") {\n";
        print_block(w->body, indent + 1, out);
        out += pad + "}\n";
    } else {
        out += pad + statement_text(s) + ";\n";
    }
}

void print_block(const std::vector<Stmt>& stmts, int indent, std::string& out) {
    for (const auto& s : stmts) print_stmt(s, indent, out);
}

}  // namespace

std::string expr_text(const ast::Expr& expr) {
    std::string out;
    print_expr(expr, 0, false, out);
    return out;
}

std::string condition_text(const ast::Condition& cond) {
    return expr_text(cond.lhs) + " " + to_string(cond.op) + " " + expr_text(cond.rhs);
}

std::string statement_text(const ast::Stmt& stmt) {
    std::string out;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Decl>) {
                out = "int " + n.name;
                if (n.init) out += " = " + std::to_string(*n.init);
            } else if constexpr (std::is_same_v<T, Input>) {
                out = "std::cin";
                for (const auto& t : n.targets) out += " >> " + t;
            } else if constexpr (std::is_same_v<T, Output>) {
                out = "std::cout";
                for (const auto& item : n.items) {
                    out += " << ";
                    std::visit(ItemPrinter{out}, item);
                }
            } else if constexpr (std::is_same_v<T, Assign>) {
                out = n.target + " = " + expr_text(n.value);
            } else if constexpr (std::is_same_v<T, If>) {
                out = "if (" + condition_text(n.cond) + ")";
            } else if constexpr (std::is_same_v<T, While>) {
                out = "while (" + condition_text(n.cond) + ")";
            } else {
                out = "return " + std::to_string(n.value);
            }
        },
        stmt.node);
    return out;
}

std::string pretty(const ast::Program& program) {
    std::string out = "int main()\n{\n";
    print_block(program.statements, 1, out);
    out += "}\n";
    return out;
}

}  // namespace fm
