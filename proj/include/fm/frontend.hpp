#pragma once

// Lexer, parser, resolver and canonical printer for the mini C++ subset:
// int declarations, cin/cout with chaining, integer assignment, if without
// else, while, and return of an integer literal, all inside int main().

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fm/ast.hpp"

namespace fm {

enum class ParseErrorKind { SyntaxError, UseBeforeDecl, UnsupportedConstruct };

const char* to_string(ParseErrorKind k) noexcept;

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, int line, int col, std::string message, std::string expected = {});

    ParseErrorKind kind() const noexcept { return kind_; }
    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }
    const std::string& expected() const noexcept { return expected_; }

    /// "file:line:col: message"
    std::string format(std::string_view file) const;

private:
    ParseErrorKind kind_;
    int line_;
    int col_;
    std::string expected_;
};

/// Parses and resolves a translation unit. Throws ParseError.
ast::Program parse(std::string_view source);

/// Non-fatal diagnostics, e.g. a body that does not end with return.
std::vector<std::string> lint(const ast::Program& program);

/// Canonical source text; parse(pretty(p)) == p.
std::string pretty(const ast::Program& program);

/// One-line rendering of a non-compound statement, without the trailing ';'.
std::string statement_text(const ast::Stmt& stmt);
std::string condition_text(const ast::Condition& cond);
std::string expr_text(const ast::Expr& expr);

/// Splits every multi-target Input into one Input per target, recursively.
ast::Program normalize_inputs(const ast::Program& program);

}  // namespace fm
