// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fm/compile.hpp"
#include "fm/emit.hpp"
#include "fm/frontend.hpp"
#include "fm/random_program.hpp"
#include "fm/sim.hpp"
#include "fm/transform.hpp"
#include "support.hpp"

using namespace fm;
using fm::ast::Program;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

struct Run {
    FmGraph graph;
    Trace trace;
};

// Event logs gathered by criteria 1 and 2, checked by criterion 9.
std::vector<Run> g_logged;

int count_statements(const std::vector<ast::Stmt>& body) {
    int n = 0;
    for (const auto& s : body) {
        ++n;
        if (const auto* f = std::get_if<ast::If>(&s.node)) n += count_statements(f->body);
        if (const auto* w = std::get_if<ast::While>(&s.node)) n += count_statements(w->body);
    }
    return n;
}

void oracle_run(const Program& p, const InputScript& s, const std::string& what, Outcome& o) {
    FmGraph g = compile(p);
    try {
        Trace t = simulate(g, s);
        Equivalence e = equivalent(t, interpret(p, s));
        if (!e.equal) o.fail(what + ": " + e.diff);
        g_logged.push_back({std::move(g), std::move(t)});
    } catch (const std::exception& e) {
        o.fail(what + ": " + e.what());
    }
}

Outcome corpus_equivalence() {
    Outcome o;
    int runs = 0;
    for (const auto& entry : fmtest::corpus()) {
        Program p = fmtest::load_program(entry.file);
        if (entry.scripts.size() != 5) o.fail(entry.file + ": expected five scripts");
        for (std::size_t i = 0; i < entry.scripts.size(); ++i, ++runs)
            oracle_run(p, entry.scripts[i], entry.file + " script " + std::to_string(i + 1), o);
    }
    if (runs != 20) o.fail("expected 20 runs, got " + std::to_string(runs));
    if (o.pass) o.detail = std::to_string(runs) + " runs";
    return o;
}

Outcome random_equivalence() {
    Outcome o;
    int runs = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        RandomCase rc = random_case(seed, 3, 20);
        if (count_statements(rc.program.statements) > 20) o.fail("seed " + std::to_string(seed) + " too long");
        for (std::size_t i = 0; i < rc.scripts.size(); ++i, ++runs)
            oracle_run(rc.program, rc.scripts[i], "seed " + std::to_string(seed) + " script " + std::to_string(i + 1), o);
    }
    if (runs != 300) o.fail("expected 300 runs, got " + std::to_string(runs));
    if (o.pass) o.detail = std::to_string(runs) + " runs";
    return o;
}

Outcome validator_soundness() {
    Outcome o;
    std::vector<std::pair<std::string, Program>> programs;
    for (const auto& entry : fmtest::corpus()) programs.emplace_back(entry.file, fmtest::load_program(entry.file));
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
        programs.emplace_back("seed " + std::to_string(seed), random_case(seed, 0).program);
    int graphs = 0;
    for (const auto& [name, p] : programs) {
        for (CompileOptions opt : {CompileOptions{true, false}, CompileOptions{false, false},
                                   CompileOptions{true, true}, CompileOptions{false, true}}) {
            ++graphs;
            auto v = validate(compile(p, opt));
            if (!v.empty()) o.fail(name + ": " + std::string(to_string(v[0].code)) + " " + v[0].subject);
        }
    }
    if (o.pass) o.detail = std::to_string(graphs) + " graphs, 0 violations";
    return o;
}

Outcome validator_sensitivity() {
    Outcome o;
    const std::pair<const char*, ViolationCode> cases[] = {
        {"reversed_release_transfer", ViolationCode::IllegalAdjacency},
        {"non_transfer_crossing", ViolationCode::NonTransferCrossing},
        {"arrive_without_accept", ViolationCode::MixedReceive},
        {"dangling_endpoint", ViolationCode::DanglingRef},
        {"duplicate_id", ViolationCode::DuplicateId},
        {"flow_cycle", ViolationCode::FlowCycle},
    };
    for (const auto& [file, code] : cases) {
        try {
            auto v = validate(from_json(fmtest::read_text(fmtest::fixture(std::string("mutations/") + file + ".json"))));
            bool hit = std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.code == code; });
            if (!hit) o.fail(std::string(file) + ": no " + std::string(to_string(code)));
        } catch (const std::exception& e) {
            o.fail(std::string(file) + ": " + e.what());
        }
    }
    if (o.pass) o.detail = "6 fixtures";
    return o;
}

Outcome program1_structure() {
    Outcome o;
    FmGraph g = compile(fmtest::load_program("prog1.cpp"));
    const Sphere* st = nullptr;
    for (const auto& s : g.spheres())
        if (s.name == "Statements") st = &s;
    if (st == nullptr) {
        o.fail("no Statements sphere");
        return o;
    }
    if (st->children.size() != 2) {
        o.fail(std::to_string(st->children.size()) + " statement spheres");
        return o;
    }
    std::size_t a = g.find_sphere(st->children[0])->flowsystems.size();
    std::size_t b = g.find_sphere(st->children[1])->flowsystems.size();
    if (a != 3 || b != 1) o.fail("flowsystem counts " + std::to_string(a) + " and " + std::to_string(b));
    if (o.pass) o.detail = "2 statements with 3 and 1 flowsystems";
    return o;
}

Outcome transform_neutrality() {
    Outcome o;
    using Pass = std::function<FmGraph(const FmGraph&)>;
    const std::vector<std::pair<std::string, Pass>> passes = {
        {"expand", expand_receive},
        {"merge", merge_receive},
        {"expand+merge", [](const FmGraph& g) { return merge_receive(expand_receive(g)); }},
        {"collapse", collapse_single},
        {"fuse", fuse_statements},
        {"all", [](const FmGraph& g) { return fuse_statements(collapse_single(merge_receive(expand_receive(g)))); }},
        {"all expanded", [](const FmGraph& g) { return fuse_statements(collapse_single(expand_receive(g))); }},
    };
    int checks = 0;
    for (const auto& entry : fmtest::corpus()) {
        Program p = fmtest::load_program(entry.file);
        FmGraph base = compile(p);
        for (const auto& [name, pass] : passes) {
            FmGraph g = pass(base);
            if (!validate(g).empty()) o.fail(entry.file + " " + name + ": violations");
            for (const auto& s : entry.scripts) {
                ++checks;
                try {
                    Equivalence e = equivalent(simulate(g, s), interpret(p, s));
                    if (!e.equal) o.fail(entry.file + " " + name + ": " + e.diff);
                } catch (const std::exception& e) {
                    o.fail(entry.file + " " + name + ": " + e.what());
                }
            }
        }
    }
    if (o.pass) o.detail = std::to_string(checks) + " runs";
    return o;
}

bool has_cycle(const Flowchart& c) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& e : c.edges) adj[e.from].push_back(e.to);
    std::map<std::string, int> color;
    std::function<bool(const std::string&)> dfs = [&](const std::string& n) {
        color[n] = 1;
        for (const auto& m : adj[n])
            if (color[m] == 1 || (color[m] == 0 && dfs(m))) return true;
        color[n] = 2;
        return false;
    };
    for (const auto& n : c.nodes)
        if (color[n.id] == 0 && dfs(n.id)) return true;
    return false;
}

Outcome flowchart_reduction() {
    Outcome o;
    auto kinds = [](const Flowchart& c, FlowchartNodeKind k) {
        return std::count_if(c.nodes.begin(), c.nodes.end(), [&](const auto& n) { return n.kind == k; });
    };
    for (bool from_graph : {false, true}) {
        std::string via = from_graph ? " (graph)" : " (source)";
        Program p3 = fmtest::load_program("prog3.cpp");
        Flowchart c = from_graph ? to_flowchart(compile(p3)) : to_flowchart(p3);
        if (kinds(c, FlowchartNodeKind::Decision) != 1) o.fail("program 3 decisions" + via);
        if (kinds(c, FlowchartNodeKind::InputOutput) != 3) o.fail("program 3 input/output nodes" + via);
        if (kinds(c, FlowchartNodeKind::Terminal) != 2) o.fail("program 3 terminals" + via);
        std::string print, after;
        for (const auto& e : c.edges) {
            if (e.label == "true") print = e.to;
            if (e.label == "false") after = e.to;
        }
        bool bypass = !print.empty() && !after.empty() && print != after;
        bool rejoin = std::any_of(c.edges.begin(), c.edges.end(), [&](const auto& e) { return e.from == print && e.to == after; });
        if (!bypass || !rejoin) o.fail("program 3 false edge does not bypass the print" + via);

        Program p4 = fmtest::load_program("prog4_average.cpp");
        Flowchart w = from_graph ? to_flowchart(compile(p4)) : to_flowchart(p4);
        if (kinds(w, FlowchartNodeKind::Decision) != 1) o.fail("while decisions" + via);
        if (!has_cycle(w)) o.fail("while has no back edge" + via);
    }
    if (o.pass) o.detail = "1 decision, 3 io, 2 terminals; loop cycle present";
    return o;
}

Outcome serialization() {
    Outcome o;
    int graphs = 0;
    for (const auto& entry : fmtest::corpus()) {
        for (CompileOptions opt : {CompileOptions{true, false}, CompileOptions{false, true}}) {
            FmGraph g = compile(fmtest::load_program(entry.file), opt);
            ++graphs;
            FmGraph back = from_json(to_json(g));
            if (!(back == g)) o.fail(entry.file + ": round trip differs");
            if (!validate(back).empty()) o.fail(entry.file + ": round trip does not validate");
        }
    }
    std::string golden = fmtest::read_text(fmtest::source_dir() + "/tests/golden/prog1.json");
    std::string first = to_json(compile(fmtest::load_program("prog1.cpp")));
    std::string second = to_json(compile(fmtest::load_program("prog1.cpp")));
    if (first != golden) o.fail("program 1 differs from the golden file");
    if (first != second) o.fail("program 1 serialization is not stable");
    if (o.pass) o.detail = std::to_string(graphs) + " round trips, golden byte-equal";
    return o;
}

Outcome event_logs() {
    Outcome o;
    std::size_t events = 0;
    for (const auto& r : g_logged) {
        events += r.trace.events.size();
        auto problems = check_event_log(r.graph, r.trace);
        if (!problems.empty()) o.fail(problems.front());
    }
    if (g_logged.size() != 320) o.fail("expected 320 logs, got " + std::to_string(g_logged.size()));
    if (o.pass) o.detail = std::to_string(g_logged.size()) + " logs, " + std::to_string(events) + " events";
    return o;
}

Outcome frontend_fuzz() {
    Outcome o;
    std::mt19937_64 rng(10000);
    const std::string pieces[] = {"int", " ", "main", "(", ")", "{", "}", ";", "cout", "cin", "<<", ">>", "std::",
                                  "endl", "if", "while", "return", "=", "==", "<", "+", "-", "*", "/", "x", "0",
                                  "42", "\"", "\\", "\n", "#include <iostream>", "using namespace std;"};
    int rejected = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string s;
        std::size_t len = rng() % 80;
        for (std::size_t k = 0; k < len; ++k) {
            if (i % 2 == 0) s += static_cast<char>(rng() & 0xff);
            else s += pieces[rng() % std::size(pieces)];
        }
        try {
            parse(s);
        } catch (const ParseError&) {
            ++rejected;
        } catch (const std::exception& e) {
            o.fail("input " + std::to_string(i) + ": unstructured error " + e.what());
        }
    }
    if (o.pass) o.detail = "10000 inputs, " + std::to_string(rejected) + " structured rejections";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
        double budget_s;  // 0 means no time limit
    };
    const Criterion criteria[] = {
        {"corpus equivalence", corpus_equivalence, 1.0},
        {"randomized equivalence", random_equivalence, 10.0},
        {"validator soundness", validator_soundness, 0},
        {"validator sensitivity", validator_sensitivity, 0},
        {"program 1 structure", program1_structure, 0},
        {"transform neutrality", transform_neutrality, 0},
        {"flowchart reduction", flowchart_reduction, 0},
        {"serialization", serialization, 0},
        {"stage exclusivity and no back-flow", event_logs, 0},
        {"frontend robustness", frontend_fuzz, 0},
    };
    int failed = 0;
    int n = 0;
    for (const auto& c : criteria) {
        ++n;
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_s > 0 && secs >= c.budget_s) {
            std::ostringstream why;
            why << "took " << secs << " s, budget " << c.budget_s << " s";
            o.fail(why.str());
        }
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.3f s", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << n << ". " << c.name << ": " << o.detail << " [" << timing
                  << "]\n";
        failed += !o.pass;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
