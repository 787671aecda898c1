#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fm/cli.hpp"
#include "fm/emit.hpp"
#include "support.hpp"

using namespace fm;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result fmcc(std::vector<std::string> args, const std::string& stdin_text = {}) {
    std::ostringstream out, err;
    std::istringstream in(stdin_text);
    int code = run_cli(args, out, err, in);
    return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return fmtest::fixture(name); }

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("fmcc_test_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = temp_path(name);
    std::ofstream(path, std::ios::binary) << text;
    return path;
}

}  // namespace

TEST_CASE("simulate program 1") {
    Result r = fmcc({"simulate", fx("prog1.cpp")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("screen: \"Welcome to C++!\\n\"") != std::string::npos);
    CHECK(r.out.find("return: 0\n") != std::string::npos);
    CHECK(r.out.find("--- output ---\nWelcome to C++!\n---") != std::string::npos);
}

TEST_CASE("simulate with the oracle") {
    Result r = fmcc({"simulate", fx("prog2.cpp"), "--in", "3 4", "--oracle"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("screen: \"Sum is \" \"7\" \"\\n\"") != std::string::npos);
    CHECK(r.out.find("memory: integer1=3 integer2=4 sum=7") != std::string::npos);
    CHECK(r.out.find("oracle: MATCH\n") != std::string::npos);

    std::string script = write_temp("grades.txt", "7 7 7 7 7\n7 7 7 7 7\n");
    Result avg = fmcc({"simulate", fx("prog4_average.cpp"), "--in", "@" + script, "--oracle"});
    CHECK(avg.code == kExitOk);
    CHECK(avg.out.find("average=7") != std::string::npos);
    std::remove(script.c_str());
}

TEST_CASE("the oracle needs source") {
    std::string json = write_temp("p2.json", fmcc({"compile", fx("prog2.cpp")}).out);
    CHECK(fmcc({"simulate", json, "--in", "1 2"}).code == kExitOk);
    CHECK(fmcc({"simulate", json, "--in", "1 2", "--oracle"}).code == kExitUsage);
    std::remove(json.c_str());
}

TEST_CASE("check lists violations of a broken graph") {
    Result r = fmcc({"check", fx("mutations/dangling_endpoint.json")});
    CHECK(r.code == kExitViolations);
    CHECK(r.out == "DanglingRef f36: endpoint 'computer.memory.total:Transfer' does not resolve\n");

    Result ok = fmcc({"check", fx("prog3.cpp")});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out == "ok: no violations\n");
}

TEST_CASE("every mutation fixture fails the check") {
    for (const char* m : {"reversed_release_transfer", "non_transfer_crossing", "arrive_without_accept",
                          "dangling_endpoint", "duplicate_id", "flow_cycle"}) {
        CAPTURE(m);
        CHECK(fmcc({"check", fx(std::string("mutations/") + m + ".json")}).code == kExitViolations);
    }
}

TEST_CASE("compile output pipes into check") {
    for (const auto& e : fmtest::corpus()) {
        for (std::vector<std::string> flags : {std::vector<std::string>{}, {"--no-keyboard-screen"},
                                               {"--fetch-constants", "--collapse", "--fuse"}}) {
            std::vector<std::string> args{"compile", fx(e.file)};
            args.insert(args.end(), flags.begin(), flags.end());
            Result c = fmcc(args);
            REQUIRE(c.code == kExitOk);
            Result k = fmcc({"check", "-"}, c.out);
            CAPTURE(e.file);
            CHECK(k.code == kExitOk);
            CHECK(fmcc({"simulate", "-", "--in", "1 2 3 4 5 6 7 8 9 10"}, c.out).code == kExitOk);
        }
    }
}

TEST_CASE("outputs are deterministic") {
    for (const char* cmd : {"parse", "compile", "render", "flowchart", "narrate"}) {
        CAPTURE(cmd);
        Result a = fmcc({cmd, fx("prog3.cpp")});
        CHECK(a.code == kExitOk);
        CHECK_FALSE(a.out.empty());
        CHECK(fmcc({cmd, fx("prog3.cpp")}).out == a.out);
    }
    CHECK(fmcc({"gen", "--seed", "7"}).out == fmcc({"gen", "--seed", "7"}).out);
    CHECK(fmcc({"gen", "--seed", "7"}).out != fmcc({"gen", "--seed", "8"}).out);
}

TEST_CASE("parse dumps the tree") {
    Result r = fmcc({"parse", fx("prog2.cpp")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("Program\n  Decl integer1  @6\n", 0) == 0);
    CHECK(r.out.find("  Assign sum = integer1 + integer2  @11\n") != std::string::npos);
    Result warn = fmcc({"parse", "-"}, "int main() { int a; }");
    CHECK(warn.code == kExitOk);
    CHECK(warn.err.find("warning") != std::string::npos);
}

TEST_CASE("render options reach the emitter") {
    CHECK(fmcc({"render", fx("prog1.cpp")}).out.find("dashed") != std::string::npos);
    CHECK(fmcc({"render", fx("prog1.cpp"), "--no-triggers"}).out.find("dashed") == std::string::npos);
    CHECK(fmcc({"render", fx("prog3.cpp"), "--style", "simplified"}).out.find("diamond") != std::string::npos);
    CHECK(fmcc({"render", fx("prog2.cpp"), "--fuse"}).out.find("cluster_g_") != std::string::npos);
    CHECK(fmcc({"render", fx("prog1.cpp"), "--style", "fancy"}).code == kExitUsage);
}

TEST_CASE("narrate static and dynamic") {
    Result s = fmcc({"narrate", fx("prog1.cpp")});
    CHECK(fmtest::count(s.out, "\n") == 7);
    Result d = fmcc({"narrate", fx("prog2.cpp"), "--in", "3 4"});
    CHECK(d.out.find("ALU processes 3 + 4, triggering creation of 7") != std::string::npos);
    Result v = fmcc({"narrate", fx("prog1.cpp"), "--verbose"});
    CHECK(fmtest::count(v.out, "\n") > 7);
}

TEST_CASE("--out writes a file") {
    std::string path = temp_path("out.dot");
    Result r = fmcc({"flowchart", fx("prog3.cpp"), "--out", path});
    CHECK(r.code == kExitOk);
    CHECK(r.out.empty());
    CHECK(fmtest::read_text(path).rfind("digraph flowchart", 0) == 0);
    std::remove(path.c_str());
}

TEST_CASE("exit codes") {
    CHECK(fmcc({}).code == kExitUsage);
    CHECK(fmcc({"--help"}).out.find("simulate") != std::string::npos);
    CHECK(fmcc({"frobnicate"}).code == kExitUsage);
    CHECK(fmcc({"compile"}).code == kExitUsage);
    CHECK(fmcc({"compile", fx("prog1.cpp"), "--bogus"}).code == kExitUsage);
    CHECK(fmcc({"compile", "/nonexistent/file.cpp"}).code == kExitUsage);
    CHECK(fmcc({"simulate", fx("prog2.cpp"), "--in", "3 x"}).code == kExitUsage);
    CHECK(fmcc({"parse", fx("mutations/duplicate_id.json")}).code == kExitUsage);

    Result p = fmcc({"compile", "-"}, "int main() {\n  return 0\n}\n");
    CHECK(p.code == kExitParse);
    CHECK(p.err.rfind("<stdin>:3:1: ", 0) == 0);

    Result s = fmcc({"simulate", fx("prog2.cpp"), "--in", "3"});
    CHECK(s.code == kExitSimulation);
    CHECK(s.err.find("InputExhausted") != std::string::npos);
    CHECK(fmcc({"simulate", fx("prog4_average.cpp"), "--in", "1 2 3 4 5 6 7 8 9 10", "--max-steps", "50"}).code ==
          kExitSimulation);
    CHECK(fmcc({"simulate", "-"}, "int main() { int a = 0; a = 1 / a; return 0; }").code == kExitSimulation);

    Result bad = fmcc({"check", "-"}, "{ \"version\": \"1\" ");
    CHECK(bad.code == kExitViolations);
    CHECK(bad.err.find("schema error at /") != std::string::npos);
    CHECK(fmcc({"render", fx("mutations/arrive_without_accept.json")}).code == kExitOk);
}

TEST_CASE("gen output is a runnable program") {
    Result g = fmcc({"gen", "--seed", "3"});
    REQUIRE(g.code == kExitOk);
    std::string script;
    std::istringstream lines(g.out);
    for (std::string l; std::getline(lines, l);)
        if (l.rfind("// script 1:", 0) == 0) script = l.substr(12);
    Result r = fmcc({"simulate", "-", "--in", script, "--oracle"}, g.out);
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("oracle: MATCH") != std::string::npos);
}
