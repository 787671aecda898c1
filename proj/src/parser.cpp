#include <cctype>
#include <charconv>
#include <set>
#include <unordered_set>

#include "fm/frontend.hpp"

namespace fm {

const char* to_string(ParseErrorKind k) noexcept {
    switch (k) {
    case ParseErrorKind::SyntaxError: return "SyntaxError";
    case ParseErrorKind::UseBeforeDecl: return "UseBeforeDecl";
    case ParseErrorKind::UnsupportedConstruct: return "UnsupportedConstruct";
    }
    return "?";
}

ParseError::ParseError(ParseErrorKind kind, int line, int col, std::string message, std::string expected)
    : std::runtime_error(std::move(message)), kind_(kind), line_(line), col_(col),
      expected_(std::move(expected)) {}

std::string ParseError::format(std::string_view file) const {
    std::string out(file);
    out += ':' + std::to_string(line_) + ':' + std::to_string(col_) + ": ";
    out += to_string(kind_);
    out += ": ";
    out += what();
    return out;
}

namespace {

using namespace fm::ast;

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
    Tok type = Tok::End;
    std::string text;  // identifier, digits, decoded string, or punctuation
    int line = 1;
    int col = 1;
};

constexpr int kMaxDepth = 200;

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            Token t;
            t.line = line_;
            t.col = col_;
            if (pos_ >= src_.size()) {
                t.type = Tok::End;
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (is_ident_start(c)) {
                t.type = Tok::Ident;
                while (pos_ < src_.size() && is_ident_char(src_[pos_])) t.text += advance();
            } else if (c >= '0' && c <= '9') {
                t.type = Tok::Int;
                while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') t.text += advance();
                if (pos_ < src_.size() && (is_ident_char(src_[pos_]) || src_[pos_] == '.')) {
                    throw ParseError(ParseErrorKind::UnsupportedConstruct, line_, col_,
                                     "only decimal integer literals are supported");
                }
            } else if (c == '"') {
                t.type = Tok::String;
                t.text = string_literal();
            } else if (c == '\'') {
                throw ParseError(ParseErrorKind::UnsupportedConstruct, line_, col_,
                                 "character literals are not supported");
            } else {
                t.type = Tok::Punct;
                t.text = punct();
            }
            out.push_back(std::move(t));
        }
    }

private:
    static bool is_ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
            at_line_start_ = true;
        } else {
            ++col_;
            if (c != ' ' && c != '\t' && c != '\r') at_line_start_ = false;
        }
        return c;
    }

    bool peek_is(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
                advance();
            } else if (c == '#' && at_line_start_) {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (peek_is("//")) {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (peek_is("/*")) {
                int l = line_;
                int col = col_;
                advance();
                advance();
                while (pos_ < src_.size() && !peek_is("*/")) advance();
                if (pos_ >= src_.size()) {
                    throw ParseError(ParseErrorKind::SyntaxError, l, col, "unterminated comment", "*/");
                }
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    std::string string_literal() {
        int l = line_;
        int col = col_;
        advance();  // opening quote
        std::string out;
        for (;;) {
            if (pos_ >= src_.size() || src_[pos_] == '\n') {
                throw ParseError(ParseErrorKind::SyntaxError, l, col, "unterminated string literal", "\"");
            }
            char c = advance();
            if (c == '"') return out;
            if (c != '\\') {
                out += c;
                continue;
            }
            if (pos_ >= src_.size()) continue;
            char e = advance();
            switch (e) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case 'r': out += '\r'; break;
            case 'a': out += '\a'; break;
            case 'b': out += '\b'; break;
            case 'f': out += '\f'; break;
            case 'v': out += '\v'; break;
            case '\\': out += '\\'; break;
            case '"': out += '"'; break;
            case '\'': out += '\''; break;
            case '?': out += '?'; break;
            case 'x': {
                int value = 0;
                int digits = 0;
                while (pos_ < src_.size() && digits < 2 && std::isxdigit(static_cast<unsigned char>(src_[pos_]))) {
                    char h = advance();
                    value = value * 16 + (h <= '9' ? h - '0' : (std::tolower(h) - 'a' + 10));
                    ++digits;
                }
                if (digits == 0) {
                    throw ParseError(ParseErrorKind::SyntaxError, line_, col_, "malformed \\x escape",
                                     "hex digit");
                }
                out += static_cast<char>(value);
                break;
            }
            default:
                if (e >= '0' && e <= '7') {
                    int value = e - '0';
                    for (int i = 0; i < 2 && pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '7'; ++i) {
                        value = value * 8 + (advance() - '0');
                    }
                    out += static_cast<char>(value & 0xff);
                } else {
                    throw ParseError(ParseErrorKind::SyntaxError, line_, col_ - 1,
                                     std::string("unknown escape sequence '\\") + e + "'");
                }
            }
        }
    }

    std::string punct() {
        static constexpr std::string_view kTwo[] = {"<<", ">>", "<=", ">=", "==", "!=", "::",
                                                   "++", "--", "+=", "-=", "*=", "/=", "&&", "||"};
        for (auto p : kTwo) {
            if (peek_is(p)) {
                advance();
                advance();
                return std::string(p);
            }
        }
        char c = src_[pos_];
        static constexpr std::string_view kOne = "<>=!+-*/(){};,%&|^~?:[].";
        if (kOne.find(c) == std::string_view::npos) {
            throw ParseError(ParseErrorKind::SyntaxError, line_, col_, "unexpected character");
        }
        advance();
        return std::string(1, c);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    bool at_line_start_ = true;
};

const std::unordered_set<std::string>& unsupported_keywords() {
    static const std::unordered_set<std::string> k = {
        "else",   "for",    "do",       "switch",   "case",   "default", "break",  "continue",
        "goto",   "class",  "struct",   "union",    "enum",   "float",   "double", "char",
        "bool",   "long",   "short",    "unsigned", "signed", "auto",    "const",  "static",
        "string", "void",   "template", "namespace", "typedef", "new",   "delete", "try",
        "throw",  "catch",  "sizeof",   "true",     "false",  "nullptr", "printf", "scanf"};
    return k;
}

bool reserved_name(const std::string& name) {
    return name == "cin" || name == "cout" || name == "endl" || name == "std" || name == "main" ||
           name == "int" || name == "if" || name == "while" || name == "return" || name == "using" ||
           unsupported_keywords().contains(name);
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program program() {
        skip_usings();
        if (!(is_ident("int"))) {
            if (peek().type == Tok::Ident && unsupported_keywords().contains(peek().text)) unsupported(peek());
            syntax("expected 'int main()'", "int");
        }
        const Token& after_int = peek(1);
        if (after_int.type != Tok::Ident || after_int.text != "main") {
            unsupported(peek(), "declarations and functions other than main are not supported");
        }
        next();
        next();
        expect("(");
        if (is_ident("void")) next();
        if (!is_punct(")")) unsupported(peek(), "main must take no parameters");
        next();
        expect("{");
        scopes_.emplace_back();
        Program p;
        p.statements = block_body();
        scopes_.pop_back();
        expect("}");
        skip_usings();
        if (peek().type != Tok::End) unsupported(peek(), "only int main() may appear in the program");
        return p;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool is_punct(std::string_view p, std::size_t ahead = 0) const {
        return peek(ahead).type == Tok::Punct && peek(ahead).text == p;
    }
    bool is_ident(std::string_view name, std::size_t ahead = 0) const {
        return peek(ahead).type == Tok::Ident && peek(ahead).text == name;
    }

    [[noreturn]] void syntax(const std::string& message, const std::string& expected = {}) const {
        const Token& t = peek();
        std::string found = t.type == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(ParseErrorKind::SyntaxError, t.line, t.col, message + ", found " + found, expected);
    }
    [[noreturn]] void unsupported(const Token& t, const std::string& message = {}) const {
        throw ParseError(ParseErrorKind::UnsupportedConstruct, t.line, t.col,
                         message.empty() ? "'" + t.text + "' is outside the supported subset" : message);
    }

    void expect(std::string_view p) {
        if (!is_punct(p)) syntax("expected '" + std::string(p) + "'", std::string(p));
        next();
    }

    std::string expect_ident() {
        if (peek().type != Tok::Ident) syntax("expected identifier", "identifier");
        return next().text;
    }

    void skip_usings() {
        while (is_ident("using")) {
            while (peek().type != Tok::End && !is_punct(";")) next();
            expect(";");
        }
    }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxDepth) p_.syntax("nesting is too deep");
        }
        ~DepthGuard() { --p_.depth_; }
        DepthGuard(const DepthGuard&) = delete;
        DepthGuard& operator=(const DepthGuard&) = delete;
        Parser& p_;
    };

    // ---- names ---------------------------------------------------------------

    bool visible(const std::string& name) const {
        for (const auto& s : scopes_) {
            if (s.contains(name)) return true;
        }
        return false;
    }

    void declare(const Token& at, const std::string& name) {
        if (reserved_name(name)) {
            throw ParseError(ParseErrorKind::SyntaxError, at.line, at.col,
                             "'" + name + "' cannot be used as a variable name", "identifier");
        }
        if (name.rfind("__", 0) == 0) {
            throw ParseError(ParseErrorKind::SyntaxError, at.line, at.col,
                             "identifiers starting with '__' are reserved", "identifier");
        }
        if (!declared_.insert(name).second) {
            throw ParseError(ParseErrorKind::SyntaxError, at.line, at.col,
                             "redeclaration of '" + name + "'", "fresh identifier");
        }
        scopes_.back().insert(name);
    }

    void use(const Token& at) const {
        if (!visible(at.text)) {
            throw ParseError(ParseErrorKind::UseBeforeDecl, at.line, at.col,
                             "'" + at.text + "' is used before its declaration");
        }
    }

    // ---- statements ----------------------------------------------------------

    std::vector<Stmt> block_body() {
        std::vector<Stmt> out;
        while (!is_punct("}")) {
            if (peek().type == Tok::End) syntax("expected '}'", "}");
            statement(out);
        }
        return out;
    }

    std::vector<Stmt> body() {
        DepthGuard guard(*this);
        scopes_.emplace_back();
        std::vector<Stmt> out;
        if (is_punct("{")) {
            next();
            out = block_body();
            expect("}");
        } else {
            statement(out);
        }
        scopes_.pop_back();
        return out;
    }

    void statement(std::vector<Stmt>& out) {
        const Token& t = peek();
        int line = t.line;
        if (t.type == Tok::Ident) {
            if (t.text == "int") return declaration(out);
            if (t.text == "if" || t.text == "while") {
                bool is_if = t.text == "if";
                next();
                Condition cond = condition();
                std::vector<Stmt> b = body();
                if (is_if) {
                    if (is_ident("else")) unsupported(peek(), "else branches are not supported");
                    out.push_back(Stmt{If{std::move(cond), std::move(b)}, line});
                } else {
                    out.push_back(Stmt{While{std::move(cond), std::move(b)}, line});
                }
                return;
            }
            if (t.text == "return") {
                next();
                std::int64_t v = signed_int_literal("integer literal");
                expect(";");
                out.push_back(Stmt{Return{v}, line});
                return;
            }
            if (t.text == "std" || t.text == "cin" || t.text == "cout") return stream(out);
            if (t.text == "using") {
                skip_usings();
                return;
            }
            if (unsupported_keywords().contains(t.text)) unsupported(t);
            // assignment
            Token target = next();
            if (!is_punct("=")) {
                if (is_punct("(")) unsupported(peek(), "function calls are not supported");
                if (peek().type == Tok::Punct &&
                    (peek().text == "++" || peek().text == "--" || peek().text == "+=" ||
                     peek().text == "-=" || peek().text == "*=" || peek().text == "/=")) {
                    unsupported(peek(), "compound assignment is not supported");
                }
                syntax("expected '='", "=");
            }
            use(target);
            next();
            Expr value = expr();
            expect(";");
            out.push_back(Stmt{Assign{target.text, std::move(value)}, line});
            return;
        }
        if (t.type == Tok::Punct && (t.text == "{" || t.text == ";")) {
            unsupported(t, t.text == "{" ? "nested blocks are not supported" : "empty statements are not supported");
        }
        syntax("expected a statement", "statement");
    }

    void declaration(std::vector<Stmt>& out) {
        int line = peek().line;
        next();  // int
        for (;;) {
            Token name_tok = peek();
            std::string name = expect_ident();
            if (is_punct("(")) unsupported(peek(), "functions other than main are not supported");
            std::optional<std::int64_t> init;
            if (is_punct("=")) {
                next();
                init = signed_int_literal("integer literal initializer");
            }
            declare(name_tok, name);
            out.push_back(Stmt{Decl{name, init}, line});
            if (is_punct(",")) {
                next();
                continue;
            }
            break;
        }
        expect(";");
    }

    // std:: prefix handling for cin/cout/endl
    std::optional<std::string> stream_name() {
        if (is_ident("std") && is_punct("::", 1)) {
            const Token& name = peek(2);
            if (name.type != Tok::Ident || (name.text != "cin" && name.text != "cout" && name.text != "endl")) {
                unsupported(name, "only std::cin, std::cout and std::endl are supported");
            }
            next();
            next();
            return next().text;
        }
        if (is_ident("cin") || is_ident("cout") || is_ident("endl")) return next().text;
        return std::nullopt;
    }

    void stream(std::vector<Stmt>& out) {
        int line = peek().line;
        auto which = stream_name();
        if (!which || *which == "endl") syntax("expected cin or cout", "cin or cout");
        if (*which == "cin") {
            Input in;
            do {
                expect(">>");
                Token target = peek();
                std::string name = expect_ident();
                use(target);
                in.targets.push_back(name);
            } while (is_punct(">>"));
            expect(";");
            out.push_back(Stmt{std::move(in), line});
            return;
        }
        Output o;
        do {
            expect("<<");
            o.items.push_back(output_item());
        } while (is_punct("<<"));
        expect(";");
        out.push_back(Stmt{std::move(o), line});
    }

    OutputItem output_item() {
        if (peek().type == Tok::String) {
            std::string text;
            while (peek().type == Tok::String) text += next().text;
            return StringLit{std::move(text)};
        }
        if (is_ident("endl") || (is_ident("std") && is_punct("::", 1))) {
            auto n = stream_name();
            if (n != "endl") unsupported(peek(), "only std::endl may appear in an output chain");
            return Endl{};
        }
        return expr();
    }

    // ---- expressions ---------------------------------------------------------

    std::int64_t int_value(const Token& t, bool negative) const {
        // parse magnitude as unsigned so INT64_MIN is representable
        std::uint64_t mag = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), mag);
        std::uint64_t limit = negative ? (std::uint64_t{1} << 63) : (std::uint64_t{1} << 63) - 1;
        if (ec != std::errc() || mag > limit) {
            throw ParseError(ParseErrorKind::SyntaxError, t.line, t.col, "integer literal out of range");
        }
        return negative ? static_cast<std::int64_t>(0 - mag) : static_cast<std::int64_t>(mag);
    }

    std::int64_t signed_int_literal(const std::string& what) {
        bool negative = false;
        if (is_punct("-")) {
            negative = true;
            next();
        }
        if (peek().type != Tok::Int) {
            if (!negative && peek().type == Tok::Ident) {
                unsupported(peek(), "expected " + what + "; only integer literals are supported here");
            }
            syntax("expected " + what, "integer literal");
        }
        return int_value(next(), negative);
    }

    Expr operand() {
        if (peek().type == Tok::Ident) {
            if (unsupported_keywords().contains(peek().text)) unsupported(peek());
            use(peek());
            return var(next().text);
        }
        return lit(signed_int_literal("variable or integer literal"));
    }

    Condition condition() {
        expect("(");
        Condition c;
        c.lhs = operand();
        static const std::pair<const char*, RelOp> kOps[] = {{"==", RelOp::Eq}, {"!=", RelOp::Ne},
                                                             {"<", RelOp::Lt},  {"<=", RelOp::Le},
                                                             {">", RelOp::Gt},  {">=", RelOp::Ge}};
        bool found = false;
        for (auto [text, op] : kOps) {
            if (is_punct(text)) {
                c.op = op;
                found = true;
                break;
            }
        }
        if (!found) {
            if (is_punct("&&") || is_punct("||") || is_punct("+") || is_punct("-") || is_punct("*") ||
                is_punct("/")) {
                unsupported(peek(), "conditions must be 'operand relop operand'");
            }
            syntax("expected a relational operator", "relop");
        }
        next();
        c.rhs = operand();
        expect(")");
        return c;
    }

    Expr expr() {
        DepthGuard guard(*this);
        Expr lhs = term();
        while (is_punct("+") || is_punct("-")) {
            BinOp op = next().text == "+" ? BinOp::Add : BinOp::Sub;
            lhs = binary(op, std::move(lhs), term());
        }
        return lhs;
    }

    Expr term() {
        Expr lhs = unary();
        while (is_punct("*") || is_punct("/")) {
            const Token& op_tok = next();
            BinOp op = op_tok.text == "*" ? BinOp::Mul : BinOp::Div;
            Token rhs_tok = peek();
            Expr rhs = unary();
            if (op == BinOp::Div) {
                if (const auto* l = std::get_if<IntLit>(&rhs.node); l && l->value == 0) {
                    throw ParseError(ParseErrorKind::SyntaxError, rhs_tok.line, rhs_tok.col,
                                     "division by literal zero", "non-zero divisor");
                }
            }
            lhs = binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr unary() {
        if (is_punct("-")) {
            if (peek(1).type == Tok::Int) {
                next();
                return lit(int_value(next(), true));
            }
            next();
            DepthGuard guard(*this);
            return binary(BinOp::Sub, lit(0), unary());
        }
        return primary();
    }

    Expr primary() {
        const Token& t = peek();
        if (t.type == Tok::Int) return lit(int_value(next(), false));
        if (t.type == Tok::Ident) {
            if (unsupported_keywords().contains(t.text)) unsupported(t);
            if (t.text == "cin" || t.text == "cout" || t.text == "std" || t.text == "endl") {
                syntax("expected an expression", "expression");
            }
            use(t);
            if (is_punct("(", 1)) unsupported(peek(1), "function calls are not supported");
            return var(next().text);
        }
        if (is_punct("(")) {
            next();
            Expr e = expr();
            expect(")");
            return e;
        }
        if (t.type == Tok::String) unsupported(t, "string values are only supported in output chains");
        syntax("expected an expression", "expression");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;
    std::vector<std::set<std::string>> scopes_;
    std::set<std::string> declared_;
};

}  // namespace

ast::Program parse(std::string_view source) {
    Parser p(Lexer(source).run());
    return p.program();
}

std::vector<std::string> lint(const ast::Program& program) {
    std::vector<std::string> out;
    if (program.statements.empty() ||
        !std::holds_alternative<ast::Return>(program.statements.back().node)) {
        out.emplace_back("main does not end with a return statement");
    }
    return out;
}

namespace {

void split_inputs(const std::vector<ast::Stmt>& in, std::vector<ast::Stmt>& out) {
    for (const auto& s : in) {
        if (const auto* i = std::get_if<ast::Input>(&s.node)) {
            for (const auto& t : i->targets) out.push_back(ast::Stmt{ast::Input{{t}}, s.line});
        } else if (const auto* f = std::get_if<ast::If>(&s.node)) {
            ast::If copy{f->cond, {}};
            split_inputs(f->body, copy.body);
            out.push_back(ast::Stmt{std::move(copy), s.line});
        } else if (const auto* w = std::get_if<ast::While>(&s.node)) {
            ast::While copy{w->cond, {}};
            split_inputs(w->body, copy.body);
            out.push_back(ast::Stmt{std::move(copy), s.line});
        } else {
            out.push_back(s);
        }
    }
}

}  // namespace

ast::Program normalize_inputs(const ast::Program& program) {
    ast::Program out;
    split_inputs(program.statements, out.statements);
    return out;
}

}  // namespace fm
