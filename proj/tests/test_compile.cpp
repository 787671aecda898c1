#include <algorithm>

#include "doctest.h"
#include "fm/compile.hpp"
#include "fm/emit.hpp"
#include "fm/random_program.hpp"
#include "support.hpp"

using namespace fm;
using namespace fm::ast;

namespace {

const CompileOptions kAllOptions[] = {{true, false}, {false, false}, {true, true}, {false, true}};

std::string attr(const Flowsystem& f, const char* key) {
    auto it = f.attrs.find(key);
    return it == f.attrs.end() ? std::string{} : it->second;
}

std::vector<const Flowsystem*> with_role(const FmGraph& g, const char* r) {
    std::vector<const Flowsystem*> out;
    for (const auto& f : g.flowsystems())
        if (attr(f, "role") == r) out.push_back(&f);
    return out;
}

int flows_into(const FmGraph& g, const std::string& fs, StageKind stage, bool from_outside) {
    int n = 0;
    for (const auto& a : g.flow_arcs())
        if (a.to.flowsystem == fs && a.to.stage == stage && (a.from.flowsystem != fs) == from_outside) ++n;
    return n;
}

int flows_out_of(const FmGraph& g, const std::string& fs) {
    int n = 0;
    for (const auto& a : g.flow_arcs())
        if (a.from.flowsystem == fs && a.to.flowsystem != fs) ++n;
    return n;
}

const Sphere& statements(const FmGraph& g) {
    const Sphere* s = g.find_sphere("computer.main.statements");
    REQUIRE(s != nullptr);
    return *s;
}

}  // namespace

TEST_CASE("skeleton spheres are present for every program") {
    FmGraph g = compile(parse("int main() { return 0; }"));
    CHECK(g.root() == "computer");
    for (const char* id : {"computer.operating_system", "computer.memory", "computer.alu", "computer.main",
                           "computer.main.statements"}) {
        CAPTURE(id);
        CHECK(g.find_sphere(id) != nullptr);
    }
    CHECK(g.entry() == StageRef{"computer.operating_system.os", StageKind::Create});
    CHECK(validate(g).empty());
}

TEST_CASE("return-only program is a single signal flow to the OS") {
    FmGraph g = compile(parse("int main() { return 0; }"));
    CHECK(statements(g).children.size() == 1);
    CHECK(with_role(g, role::kAluOp).empty());
    CHECK(with_role(g, role::kAluResult).empty());
    CHECK(g.find_sphere("computer.alu")->flowsystems.empty());
    auto sig = with_role(g, role::kSignal);
    REQUIRE(sig.size() == 1);
    CHECK(attr(*sig[0], "value") == "0");
    int to_os = 0;
    for (const auto& a : g.flow_arcs())
        if (a.from.flowsystem == sig[0]->id && a.to.flowsystem == "computer.operating_system.os") ++to_os;
    CHECK(to_os == 1);
}

TEST_CASE("program 1 has two statements with three and one flowsystems") {
    FmGraph g = compile(fmtest::load_program("prog1.cpp"));
    const Sphere& st = statements(g);
    REQUIRE(st.children.size() == 2);
    const Sphere* s1 = g.find_sphere(st.children[0]);
    const Sphere* s2 = g.find_sphere(st.children[1]);
    CHECK(s1->flowsystems.size() == 3);
    CHECK(s2->flowsystems.size() == 1);
    std::vector<std::string> roles;
    for (const auto& id : s1->flowsystems) roles.push_back(attr(*g.find_flowsystem(id), "role"));
    std::sort(roles.begin(), roles.end());
    CHECK(roles == std::vector<std::string>{"cout", "literal", "screen"});
    CHECK(s1->attrs.at("template") == "output");
    CHECK(s2->attrs.at("template") == "return");
}

TEST_CASE("output flows memory to cout to screen") {
    FmGraph g = compile(fmtest::load_program("prog1.cpp"));
    const std::string mem = "computer.main.statements.s1.memory";
    const std::string cout = "computer.main.statements.s1.cout";
    const std::string screen = "computer.main.statements.s1.screen";
    CHECK(g.find_flowsystem(mem)->stages == StageSet{StageKind::Release, StageKind::Transfer});
    CHECK(g.find_flowsystem(screen)->stages ==
          StageSet{StageKind::Transfer, StageKind::Receive, StageKind::Process});
    CHECK(flows_into(g, cout, StageKind::Transfer, true) == 1);
    CHECK(flows_into(g, screen, StageKind::Transfer, true) == 1);
    CHECK(attr(*g.find_flowsystem(screen), "display") == "true");
}

TEST_CASE("program 2 adds through one ALU operation") {
    FmGraph g = compile(fmtest::load_program("prog2.cpp"));
    auto ops = with_role(g, role::kAluOp);
    REQUIRE(ops.size() == 1);
    const Flowsystem& op = *ops[0];
    CHECK(op.owner == "computer.alu");
    CHECK(op.stages.contains(StageKind::Process));
    CHECK(attr(op, "op") == "+");
    CHECK(flows_into(g, op.id, StageKind::Transfer, true) == 2);
    CHECK(flows_out_of(g, op.id) == 0);

    auto results = with_role(g, role::kAluResult);
    REQUIRE(results.size() == 1);
    int result_triggers = 0;
    for (const auto& t : g.trigger_arcs())
        if (t.from == StageRef{op.id, StageKind::Process} && t.to.flowsystem == results[0]->id) ++result_triggers;
    CHECK(result_triggers == 1);
    int into_sum = 0;
    for (const auto& a : g.flow_arcs())
        if (a.from.flowsystem == results[0]->id && a.to.flowsystem == "computer.memory.sum") ++into_sum;
    CHECK(into_sum == 1);
}

TEST_CASE("declarations without initializers emit no arcs") {
    FmGraph g = compile(parse("int main() { int a; return 0; }"));
    const Sphere* decl = g.find_sphere(statements(g).children[0]);
    CHECK(decl->flowsystems.empty());
    for (const auto& a : g.flow_arcs()) CHECK(a.from.flowsystem.find("statements.s1") == std::string::npos);

    FmGraph h = compile(parse("int main() { int a = 7; return 0; }"));
    const Sphere* init = h.find_sphere(statements(h).children[0]);
    CHECK_FALSE(init->flowsystems.empty());
    CHECK(flows_into(h, "computer.memory.a", StageKind::Transfer, true) == 1);
}

TEST_CASE("input chains user, keyboard and cin into memory") {
    FmGraph g = compile(fmtest::load_program("prog2.cpp"));
    const Sphere* s4 = g.find_sphere("computer.main.statements.s4");
    CHECK(s4->attrs.at("template") == "input");
    CHECK(s4->flowsystems.size() == 3);
    CHECK(flows_into(g, "computer.main.statements.s4.cin", StageKind::Transfer, true) == 1);
    CHECK(flows_into(g, "computer.memory.integer1", StageKind::Transfer, true) == 1);

    FmGraph bare = compile(fmtest::load_program("prog2.cpp"), {false, false});
    CHECK(bare.find_sphere("computer.main.statements.s4")->flowsystems.size() == 1);
    // Without devices cin itself reads the script.
    CHECK(with_role(bare, role::kUser).empty());
    CHECK(with_role(bare, role::kCin).empty());
    for (const auto* f : with_role(bare, role::kKeyboard)) CHECK(f->name == "cin");
    CHECK(with_role(bare, role::kScreen).empty());
    CHECK(validate(bare).empty());
}

TEST_CASE("if and while each add one comparison with two operands") {
    for (const char* file : {"prog3.cpp", "prog4_average.cpp"}) {
        for (const auto& opt : kAllOptions) {
            FmGraph g = compile(fmtest::load_program(file), opt);
            auto cmp = with_role(g, role::kAluCompare);
            CAPTURE(file);
            REQUIRE(cmp.size() == 1);
            CHECK(cmp[0]->stages.contains(StageKind::Process));
            CHECK(flows_into(g, cmp[0]->id, StageKind::Transfer, true) == 2);
            int on_true = 0, on_false = 0;
            for (const auto& t : g.trigger_arcs()) {
                if (t.from.flowsystem != cmp[0]->id) continue;
                on_true += t.condition == TriggerCondition::OnTrue;
                on_false += t.condition == TriggerCondition::OnFalse;
            }
            CHECK(on_true == 1);
            CHECK(on_false == 1);
        }
    }
}

TEST_CASE("while body loops back to its comparison") {
    FmGraph g = compile(fmtest::load_program("prog4_average.cpp"));
    auto cmp = with_role(g, role::kAluCompare);
    REQUIRE(cmp.size() == 1);
    int repeats = 0;
    for (const auto& t : g.trigger_arcs())
        if (t.label == "repeat") ++repeats;
    CHECK(repeats == 1);
    CHECK(validate(g).empty());
}

TEST_CASE("literal operands are created in the ALU or fetched from memory") {
    Program p = parse("int main() { int a = 1; a = a + 2; return 0; }");
    FmGraph local = compile(p);
    FmGraph fetched = compile(p, {true, true});
    auto in_alu = [](const FmGraph& g) {
        int n = 0;
        for (const auto* f : with_role(g, role::kConstant)) n += f->owner == "computer.alu";
        return n;
    };
    CHECK(in_alu(local) == 1);
    CHECK(in_alu(fetched) == 0);
    auto lits = with_role(fetched, role::kLiteral);
    REQUIRE(lits.size() == 1);
    CHECK(lits[0]->owner == "computer.memory.constants");
    CHECK(attr(*lits[0], "value") == "2");
    CHECK(validate(local).empty());
    CHECK(validate(fetched).empty());
}

TEST_CASE("every variable has exactly one memory location") {
    for (const auto& entry : fmtest::corpus()) {
        Program p = fmtest::load_program(entry.file);
        FmGraph g = compile(p);
        std::vector<std::string> names;
        for (const auto* f : with_role(g, role::kMemory)) {
            CHECK(f->owner == "computer.memory");
            names.push_back(attr(*f, "var"));
        }
        std::vector<std::string> sorted = names;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        int decls = 0;
        for (const auto& s : decompose_exprs(p).statements) decls += std::holds_alternative<Decl>(s.node);
        CHECK(static_cast<int>(names.size()) == decls);
    }
}

TEST_CASE("decompose leaves flat expressions alone") {
    Program flat = parse("int main() { int a; int b; int sum; sum = a + b; a = 5; return 0; }");
    CHECK(decompose_exprs(flat) == flat);
}

TEST_CASE("decompose hoists the inner operation into a temporary") {
    Program p = parse("int main() { int a; int b; int c; int x; x = a + b * c; return 0; }");
    Program d = decompose_exprs(p);
    REQUIRE(d.statements.size() == p.statements.size() + 2);
    CHECK(std::get<Decl>(d.statements[0].node) == Decl{"__t1", std::nullopt});
    CHECK(std::get<Assign>(d.statements[5].node) == Assign{"__t1", binary(BinOp::Mul, var("b"), var("c"))});
    CHECK(std::get<Assign>(d.statements[6].node) == Assign{"x", binary(BinOp::Add, var("a"), var("__t1"))});
}

TEST_CASE("decompose keeps left-to-right order and flattens outputs") {
    Program p = parse("int main() { int a; int x; x = (a - 1) * (a + 2) - a; cout << a * 2; return 0; }");
    Program d = decompose_exprs(p);
    std::vector<std::string> texts;
    for (const auto& s : d.statements) texts.push_back(statement_text(s));
    CHECK(texts == std::vector<std::string>{"int __t1", "int __t2", "int __t3", "int __t4", "int a", "int x",
                                            "__t1 = a - 1", "__t2 = a + 2", "__t3 = __t1 * __t2", "x = __t3 - a",
                                            "__t4 = a * 2", "std::cout << __t4", "return 0"});
    for (const auto& s : d.statements) {
        if (const auto* a = std::get_if<Assign>(&s.node)) CHECK(binary_count(a->value) <= 1);
        if (const auto* o = std::get_if<Output>(&s.node))
            for (const auto& item : o->items)
                if (const auto* e = std::get_if<Expr>(&item)) CHECK(binary_count(*e) == 0);
    }
}

TEST_CASE("decompose preserves results on random environments") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        RandomCase rc = random_case(seed, 1);
        Program d = decompose_exprs(rc.program);
        CAPTURE(seed);
        Trace a = interpret(rc.program, rc.scripts[0]);
        Trace b = interpret(d, rc.scripts[0]);
        // Temporaries are the only difference in final memory.
        for (auto it = b.memory_final.begin(); it != b.memory_final.end();)
            it = it->first.rfind(kTempPrefix, 0) == 0 ? b.memory_final.erase(it) : std::next(it);
        CHECK(equivalent(a, b).equal);
    }
}

TEST_CASE("statement spheres follow the decomposed program") {
    Program p = parse("int main() { int a; int x; x = a * a + a; if (x > 0) { x = 1; } return 0; }");
    FmGraph g = compile(p);
    Program d = decompose_exprs(p);
    const Sphere& st = statements(g);
    REQUIRE(st.children.size() == d.statements.size());
    for (std::size_t i = 0; i < st.children.size(); ++i) {
        CAPTURE(i);
        CHECK(g.find_sphere(st.children[i])->attrs.at("text") == statement_text(d.statements[i]));
    }
    const Sphere* body_owner = g.find_sphere(st.children[st.children.size() - 2]);
    REQUIRE(body_owner != nullptr);
    CHECK(body_owner->attrs.at("template") == "if");
    CHECK(body_owner->children.size() == 1);
}

TEST_CASE("compile is deterministic") {
    for (const auto& entry : fmtest::corpus()) {
        Program p = fmtest::load_program(entry.file);
        for (const auto& opt : kAllOptions) CHECK(to_json(compile(p, opt)) == to_json(compile(p, opt)));
    }
}

TEST_CASE("compiled graphs validate under every option setting") {
    for (const auto& entry : fmtest::corpus()) {
        for (const auto& opt : kAllOptions) {
            CAPTURE(entry.file);
            CHECK(validate(compile(fmtest::load_program(entry.file), opt)).empty());
        }
    }
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Program p = random_case(seed, 0).program;
        for (const auto& opt : kAllOptions) {
            CAPTURE(seed);
            CHECK(validate(compile(p, opt)).empty());
        }
    }
}
