#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fm::ast {

/// Owning, deep-copying pointer so recursive nodes keep value semantics.
template <typename T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;
    ~Box() = default;

    T& operator*() { return *ptr_; }
    const T& operator*() const { return *ptr_; }
    T* operator->() { return ptr_.get(); }
    const T* operator->() const { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return *a == *b; }

private:
    std::unique_ptr<T> ptr_;
};

enum class BinOp : std::uint8_t { Add, Sub, Mul, Div };
enum class RelOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

const char* to_string(BinOp op) noexcept;
const char* to_string(RelOp op) noexcept;

struct Expr;

struct Var {
    std::string name;
    friend bool operator==(const Var&, const Var&) = default;
};

struct IntLit {
    std::int64_t value = 0;
    friend bool operator==(const IntLit&, const IntLit&) = default;
};

struct Binary {
    BinOp op;
    Box<Expr> lhs;
    Box<Expr> rhs;
    friend bool operator==(const Binary&, const Binary&) = default;
};

struct Expr {
    std::variant<Var, IntLit, Binary> node;
    friend bool operator==(const Expr&, const Expr&) = default;
};

Expr var(std::string name);
Expr lit(std::int64_t value);
Expr binary(BinOp op, Expr lhs, Expr rhs);

/// Number of Binary nodes in the tree.
int binary_count(const Expr& e);

struct StringLit {
    std::string text;  // escapes already decoded
    friend bool operator==(const StringLit&, const StringLit&) = default;
};

struct Endl {
    friend bool operator==(const Endl&, const Endl&) = default;
};

using OutputItem = std::variant<Expr, StringLit, Endl>;

/// `lhs relop rhs`; both sides are a Var or an IntLit.
struct Condition {
    Expr lhs;
    RelOp op = RelOp::Eq;
    Expr rhs;
    friend bool operator==(const Condition&, const Condition&) = default;
};

struct Stmt;

struct Decl {
    std::string name;
    std::optional<std::int64_t> init;
    friend bool operator==(const Decl&, const Decl&) = default;
};

struct Input {
    std::vector<std::string> targets;
    friend bool operator==(const Input&, const Input&) = default;
};

struct Output {
    std::vector<OutputItem> items;
    friend bool operator==(const Output&, const Output&) = default;
};

struct Assign {
    std::string target;
    Expr value;
    friend bool operator==(const Assign&, const Assign&) = default;
};

struct If {
    Condition cond;
    std::vector<Stmt> body;
};

struct While {
    Condition cond;
    std::vector<Stmt> body;
};

struct Return {
    std::int64_t value = 0;
    friend bool operator==(const Return&, const Return&) = default;
};

struct Stmt {
    std::variant<Decl, Input, Output, Assign, If, While, Return> node;
    int line = 0;  // 1-based source line; 0 when synthesized
};

// Structural equality; source lines are ignored.
bool operator==(const If& a, const If& b);
bool operator==(const While& a, const While& b);
bool operator==(const Stmt& a, const Stmt& b);

struct Program {
    std::vector<Stmt> statements;  // body of int main()
    friend bool operator==(const Program&, const Program&) = default;
};

}  // namespace fm::ast
