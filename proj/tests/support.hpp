#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fm/ast.hpp"
#include "fm/frontend.hpp"
#include "fm/sim.hpp"

namespace fmtest {

inline std::string source_dir() { return FM_SOURCE_DIR; }
inline std::string fixture(const std::string& name) { return source_dir() + "/tests/fixtures/" + name; }

inline std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("missing test file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline fm::ast::Program load_program(const std::string& name) { return fm::parse(read_text(fixture(name))); }

struct CorpusEntry {
    std::string file;
    std::vector<fm::InputScript> scripts;  // five per program
};

inline fm::InputScript ints(std::vector<std::int64_t> v) { return fm::InputScript{std::move(v)}; }

inline std::vector<std::int64_t> repeat(std::int64_t v, int n) { return std::vector<std::int64_t>(n, v); }

inline std::vector<std::int64_t> series(std::int64_t start, std::int64_t step, int n) {
    std::vector<std::int64_t> out;
    for (int i = 0; i < n; ++i) out.push_back(start + step * i);
    return out;
}

/// The four fixture programs with five input scripts each.
inline std::vector<CorpusEntry> corpus() {
    return {
        {"prog1.cpp", {ints({}), ints({}), ints({1}), ints({0, 0}), ints({42})}},
        {"prog2.cpp", {ints({3, 4}), ints({0, 0}), ints({-5, 5}), ints({2147483647, 1}), ints({100, -250})}},
        {"prog3.cpp", {ints({5, 5}), ints({5, 6}), ints({-1, -1}), ints({0, 7}), ints({9223372036854775807LL, 9223372036854775807LL})}},
        {"prog4_average.cpp",
         {ints(repeat(7, 10)), ints(series(1, 1, 10)), ints(repeat(0, 10)), ints(series(100, -10, 10)),
          ints({55, 68, 92, 100, 0, 73, 81, 64, 99, 45})}},
    };
}

/// Minimal recursive-descent checker for the DOT digraph grammar subset:
/// graph, subgraph, node, edge and attribute statements with quoted or bare IDs.
class DotChecker {
public:
    explicit DotChecker(std::string text) : s_(std::move(text)) {}

    bool ok(std::string* error = nullptr) {
        try {
            graph();
            skip();
            if (i_ != s_.size()) fail("trailing input");
            return true;
        } catch (const std::runtime_error& e) {
            if (error) *error = e.what();
            return false;
        }
    }

private:
    [[noreturn]] void fail(const std::string& what) {
        throw std::runtime_error(what + " at offset " + std::to_string(i_));
    }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool peek(char c) {
        skip();
        return i_ < s_.size() && s_[i_] == c;
    }

    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++i_;
    }

    bool id(std::string* out = nullptr) {
        skip();
        if (i_ >= s_.size()) return false;
        std::size_t start = i_;
        if (s_[i_] == '"') {
            ++i_;
            while (i_ < s_.size() && s_[i_] != '"') {
                if (s_[i_] == '\\') ++i_;
                if (s_[i_] == '\n') fail("raw newline in string");
                ++i_;
            }
            if (i_ >= s_.size()) fail("unterminated string");
            ++i_;
        } else {
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' ||
                                      s_[i_] == '.' || (s_[i_] == '-' && i_ + 1 < s_.size() && std::isdigit(
                                                                               static_cast<unsigned char>(s_[i_ + 1]))))) {
                ++i_;
            }
            if (i_ == start) return false;
        }
        if (out) *out = s_.substr(start, i_ - start);
        return true;
    }

    void attr_list() {
        while (peek('[')) {
            ++i_;
            while (!peek(']')) {
                if (!id()) fail("expected attribute name");
                expect('=');
                if (!id()) fail("expected attribute value");
                if (peek(',') || peek(';')) ++i_;
            }
            ++i_;
        }
    }

    void graph() {
        std::string kw;
        if (!id(&kw) || kw != "digraph") fail("expected digraph");
        id();
        block();
    }

    void block() {
        expect('{');
        while (!peek('}')) {
            statement();
            if (peek(';')) ++i_;
        }
        ++i_;
    }

    void statement() {
        std::string first;
        std::size_t save = i_;
        if (!id(&first)) fail("expected statement");
        if (first == "subgraph") {
            id();
            block();
            return;
        }
        if (first == "graph" || first == "node" || first == "edge") {
            if (peek('[')) {
                attr_list();
                return;
            }
        }
        if (peek('=')) {
            ++i_;
            if (!id()) fail("expected value");
            return;
        }
        (void)save;
        while (true) {
            skip();
            if (s_.compare(i_, 2, "->") == 0) {
                i_ += 2;
                if (!id()) fail("expected edge target");
                continue;
            }
            break;
        }
        attr_list();
    }

    std::string s_;
    std::size_t i_ = 0;
};

inline std::size_t count(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t p = haystack.find(needle); p != std::string::npos; p = haystack.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace fmtest
