#include <map>

#include "fm/compile.hpp"
#include "fm/frontend.hpp"

namespace fm {

namespace {

using namespace fm::ast;
using S = StageKind;

struct Hook {
    StageRef at;
    TriggerCondition condition = TriggerCondition::Always;
    std::string scope;
};

const char* template_name(const Stmt& s) {
    static constexpr const char* kNames[] = {"decl", "input", "output", "assign", "if", "while", "return"};
    return kNames[s.node.index()];
}

class Compiler {
public:
    explicit Compiler(CompileOptions options) : opt_(options) {}

    FmGraph run(const Program& source) {
        Program p = decompose_exprs(source);
        skeleton();
        declare_all(p.statements);
        std::vector<Hook> tail = block(statements_, "", p.statements, {Hook{{os_, S::Create}}});
        // Falling off the end of main hands control back without a status.
        connect(tail, {os_, S::Receive}, "end");
        return std::move(g_);
    }

private:
    void skeleton() {
        std::string computer = g_.add_sphere("", "Computer");
        std::string os_sphere = g_.add_sphere(computer, "Operating system");
        os_ = g_.add_flowsystem(os_sphere, "OS", FlowthingKind::Signal,
                                {S::Create, S::Transfer, S::Receive}, {{"role", role::kOs}});
        g_.add_arc({os_, S::Transfer}, {os_, S::Receive}, ArcKind::Flow);
        memory_ = g_.add_sphere(computer, "Memory");
        alu_ = g_.add_sphere(computer, "ALU");
        std::string main = g_.add_sphere(computer, "Main");
        statements_ = g_.add_sphere(main, "Statements");
        g_.set_entry({os_, S::Create});
    }

    void declare_all(const std::vector<Stmt>& stmts) {
        for (const auto& s : stmts) {
            if (const auto* d = std::get_if<Decl>(&s.node)) {
                Attrs attrs{{"role", role::kMemory}, {"var", d->name}};
                if (d->name.rfind(kTempPrefix, 0) == 0) attrs["temp"] = "true";
                std::string fs = g_.add_flowsystem(memory_, d->name, FlowthingKind::DataInt,
                                                   {S::Release, S::Transfer, S::Receive}, attrs);
                g_.add_arc({fs, S::Transfer}, {fs, S::Receive}, ArcKind::Flow);
                g_.add_arc({fs, S::Release}, {fs, S::Transfer}, ArcKind::Flow);
                vars_[d->name] = fs;
            } else if (const auto* f = std::get_if<If>(&s.node)) {
                declare_all(f->body);
            } else if (const auto* w = std::get_if<While>(&s.node)) {
                declare_all(w->body);
            }
        }
    }

    void flow(const std::string& from_fs, S from, const std::string& to_fs, S to) {
        g_.add_arc({from_fs, from}, {to_fs, to}, ArcKind::Flow);
    }

    void chain(const std::string& fs, std::initializer_list<S> stages) {
        const S* prev = nullptr;
        for (const S& s : stages) {
            if (prev != nullptr) flow(fs, *prev, fs, s);
            prev = &s;
        }
    }

    void connect(const std::vector<Hook>& hooks, const StageRef& entry, const std::string& label = {}) {
        for (const auto& h : hooks) {
            std::string l = label;
            if (h.condition == TriggerCondition::OnTrue) l = "true";
            if (h.condition == TriggerCondition::OnFalse) l = "false";
            g_.add_trigger(h.at, entry, l, h.condition, h.scope);
        }
    }

    std::vector<Hook> block(const std::string& parent, const std::string& path,
                            const std::vector<Stmt>& stmts, std::vector<Hook> incoming) {
        int index = 0;
        for (const auto& s : stmts) {
            ++index;
            std::string code = path.empty() ? "s" + std::to_string(index) : path + ".s" + std::to_string(index);
            Attrs attrs{{"template", template_name(s)}, {"text", statement_text(s)}};
            if (s.line > 0) attrs["line"] = std::to_string(s.line);
            if (const auto* f = std::get_if<If>(&s.node)) attrs["condition"] = condition_text(f->cond);
            if (const auto* w = std::get_if<While>(&s.node)) attrs["condition"] = condition_text(w->cond);
            std::string sphere = g_.add_sphere(parent, "s" + std::to_string(index), attrs);
            incoming = statement(sphere, code, s, std::move(incoming));
        }
        return incoming;
    }

    std::vector<Hook> statement(const std::string& sphere, const std::string& code, const Stmt& s,
                                std::vector<Hook> in) {
        return std::visit(
            [&](const auto& n) -> std::vector<Hook> {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Decl>) {
                    return declaration(sphere, n, std::move(in));
                } else if constexpr (std::is_same_v<T, Input>) {
                    return input(sphere, n, std::move(in));
                } else if constexpr (std::is_same_v<T, Output>) {
                    return output(sphere, n, std::move(in));
                } else if constexpr (std::is_same_v<T, Assign>) {
                    return assign(code, n, std::move(in));
                } else if constexpr (std::is_same_v<T, If>) {
                    std::string cmp = compare(code, n.cond, in);
                    std::vector<Hook> body_out =
                        block(sphere, code, n.body, {Hook{{cmp, S::Process}, TriggerCondition::OnTrue}});
                    body_out.push_back(Hook{{cmp, S::Process}, TriggerCondition::OnFalse});
                    return body_out;
                } else if constexpr (std::is_same_v<T, While>) {
                    std::string cmp = compare(code, n.cond, in);
                    std::vector<Hook> body_out =
                        block(sphere, code, n.body, {Hook{{cmp, S::Process}, TriggerCondition::OnTrue}});
                    connect(body_out, {cmp, S::Transfer}, "repeat");
                    return {Hook{{cmp, S::Process}, TriggerCondition::OnFalse}};
                } else {
                    return ret(sphere, n, std::move(in));
                }
            },
            s.node);
    }

    std::vector<Hook> declaration(const std::string& sphere, const Decl& d, std::vector<Hook> in) {
        if (!d.init) return in;
        const std::string& mem = vars_.at(d.name);
        std::string k = g_.add_flowsystem(sphere, "Constant", FlowthingKind::DataInt,
                                          {S::Create, S::Release, S::Transfer},
                                          {{"role", role::kConstant}, {"value", std::to_string(*d.init)}});
        connect(in, {k, S::Create});
        chain(k, {S::Create, S::Release, S::Transfer});
        flow(k, S::Transfer, mem, S::Transfer);
        return {Hook{{mem, S::Receive}, TriggerCondition::Always, k}};
    }

    std::vector<Hook> input(const std::string& sphere, const Input& n, std::vector<Hook> in) {
        for (const auto& target : n.targets) {
            const std::string& mem = vars_.at(target);
            std::string cin;
            if (opt_.model_keyboard_screen) {
                std::string user = g_.add_flowsystem(sphere, "User", FlowthingKind::Action, {S::Create},
                                                     {{"role", role::kUser}});
                std::string kb = g_.add_flowsystem(sphere, "Keyboard", FlowthingKind::DataInt,
                                                   {S::Create, S::Release, S::Transfer},
                                                   {{"role", role::kKeyboard}});
                cin = g_.add_flowsystem(sphere, "cin", FlowthingKind::DataInt,
                                        {S::Transfer, S::Receive, S::Release}, {{"role", role::kCin}});
                connect(in, {user, S::Create});
                g_.add_trigger({user, S::Create}, {kb, S::Create}, "", TriggerCondition::Always);
                chain(kb, {S::Create, S::Release, S::Transfer});
                flow(kb, S::Transfer, cin, S::Transfer);
                flow(cin, S::Transfer, cin, S::Receive);
                chain(cin, {S::Receive, S::Release, S::Transfer});
            } else {
                cin = g_.add_flowsystem(sphere, "cin", FlowthingKind::DataInt,
                                        {S::Create, S::Release, S::Transfer}, {{"role", role::kKeyboard}});
                connect(in, {cin, S::Create});
                chain(cin, {S::Create, S::Release, S::Transfer});
            }
            flow(cin, S::Transfer, mem, S::Transfer);
            in = {Hook{{mem, S::Receive}, TriggerCondition::Always, cin}};
        }
        return in;
    }

    std::vector<Hook> output(const std::string& sphere, const Output& n, std::vector<Hook> in) {
        for (const auto& item : n.items) {
            std::string source;
            FlowthingKind kind = FlowthingKind::DataString;
            std::string literal;
            if (const auto* s = std::get_if<StringLit>(&item)) {
                literal = s->text;
            } else if (std::holds_alternative<Endl>(item)) {
                literal = "\n";
            } else {
                const auto& e = std::get<Expr>(item);
                kind = FlowthingKind::DataInt;
                if (const auto* v = std::get_if<Var>(&e.node)) {
                    source = vars_.at(v->name);
                } else {
                    literal = std::to_string(std::get<IntLit>(e.node).value);
                }
            }

            std::string cout_fs = g_.add_flowsystem(
                sphere, "cout", kind,
                opt_.model_keyboard_screen ? StageSet{S::Transfer, S::Receive, S::Release}
                                           : StageSet{S::Transfer, S::Receive, S::Process},
                opt_.model_keyboard_screen ? Attrs{{"role", role::kCout}}
                                           : Attrs{{"role", role::kCout}, {"display", "true"}});
            bool stored_literal = source.empty();
            if (stored_literal) {
                source = g_.add_flowsystem(sphere, "Memory", kind, {S::Release, S::Transfer},
                                           {{"role", role::kLiteral}, {"value", literal}});
            }
            connect(in, {cout_fs, S::Transfer});
            g_.add_trigger({cout_fs, S::Transfer}, {source, S::Release}, "fetch", TriggerCondition::Always);
            if (stored_literal) flow(source, S::Release, source, S::Transfer);
            flow(source, S::Transfer, cout_fs, S::Transfer);
            flow(cout_fs, S::Transfer, cout_fs, S::Receive);
            if (opt_.model_keyboard_screen) {
                std::string screen = g_.add_flowsystem(sphere, "Screen", kind,
                                                       {S::Transfer, S::Receive, S::Process},
                                                       {{"role", role::kScreen}, {"display", "true"}});
                chain(cout_fs, {S::Receive, S::Release, S::Transfer});
                flow(cout_fs, S::Transfer, screen, S::Transfer);
                chain(screen, {S::Transfer, S::Receive, S::Process});
                in = {Hook{{screen, S::Process}}};
            } else {
                flow(cout_fs, S::Receive, cout_fs, S::Process);
                in = {Hook{{cout_fs, S::Process}}};
            }
        }
        return in;
    }

    // Wires one operand into an ALU flowsystem; `slot` is "lhs" or "rhs".
    void operand(const std::string& code, const std::string& alu_fs, const Expr& e, const char* slot) {
        if (const auto* v = std::get_if<Var>(&e.node)) {
            const std::string& mem = vars_.at(v->name);
            g_.add_trigger({alu_fs, S::Transfer}, {mem, S::Release}, slot, TriggerCondition::Always);
            flow(mem, S::Transfer, alu_fs, S::Transfer);
            return;
        }
        std::string value = std::to_string(std::get<IntLit>(e.node).value);
        std::string name = code + " " + slot + " constant";
        if (opt_.model_constant_fetch) {
            if (constants_.empty()) constants_ = g_.add_sphere(memory_, "Constants");
            std::string k = g_.add_flowsystem(constants_, name, FlowthingKind::DataInt,
                                              {S::Release, S::Transfer},
                                              {{"role", role::kLiteral}, {"value", value}});
            g_.add_trigger({alu_fs, S::Transfer}, {k, S::Release}, slot, TriggerCondition::Always);
            flow(k, S::Release, k, S::Transfer);
            flow(k, S::Transfer, alu_fs, S::Transfer);
        } else {
            std::string k = g_.add_flowsystem(alu_, name, FlowthingKind::DataInt,
                                              {S::Create, S::Release, S::Transfer},
                                              {{"role", role::kConstant}, {"value", value}});
            g_.add_trigger({alu_fs, S::Transfer}, {k, S::Create}, slot, TriggerCondition::Always);
            chain(k, {S::Create, S::Release, S::Transfer});
            flow(k, S::Transfer, alu_fs, S::Transfer);
        }
    }

    std::vector<Hook> assign(const std::string& code, const Assign& a, const std::vector<Hook>& in) {
        const auto* b = std::get_if<Binary>(&a.value.node);
        Attrs attrs{{"role", role::kAluOp},
                    {"op", b ? to_string(b->op) : "="},
                    {"arity", b ? "2" : "1"},
                    {"text", expr_text(a.value)}};
        std::string op = g_.add_flowsystem(alu_, code + " op", FlowthingKind::DataInt,
                                           {S::Transfer, S::Receive, S::Process}, attrs);
        connect(in, {op, S::Transfer});
        if (b) {
            operand(code, op, *b->lhs, "lhs");
            operand(code, op, *b->rhs, "rhs");
        } else {
            operand(code, op, a.value, "lhs");
        }
        chain(op, {S::Transfer, S::Receive, S::Process});
        std::string result = g_.add_flowsystem(alu_, code + " result", FlowthingKind::DataInt,
                                               {S::Create, S::Release, S::Transfer},
                                               {{"role", role::kAluResult}});
        g_.add_trigger({op, S::Process}, {result, S::Create}, "result", TriggerCondition::Always);
        chain(result, {S::Create, S::Release, S::Transfer});
        const std::string& mem = vars_.at(a.target);
        flow(result, S::Transfer, mem, S::Transfer);
        return {Hook{{mem, S::Receive}, TriggerCondition::Always, result}};
    }

    std::string compare(const std::string& code, const Condition& c, const std::vector<Hook>& in) {
        std::string cmp = g_.add_flowsystem(alu_, code + " compare", FlowthingKind::DataInt,
                                            {S::Transfer, S::Receive, S::Process},
                                            {{"role", role::kAluCompare},
                                             {"op", to_string(c.op)},
                                             {"arity", "2"},
                                             {"text", condition_text(c)}});
        connect(in, {cmp, S::Transfer});
        operand(code, cmp, c.lhs, "lhs");
        operand(code, cmp, c.rhs, "rhs");
        chain(cmp, {S::Transfer, S::Receive, S::Process});
        return cmp;
    }

    std::vector<Hook> ret(const std::string& sphere, const Return& r, const std::vector<Hook>& in) {
        std::string sig = g_.add_flowsystem(sphere, "Return signal", FlowthingKind::Signal,
                                            {S::Create, S::Release, S::Transfer},
                                            {{"role", role::kSignal}, {"value", std::to_string(r.value)}});
        connect(in, {sig, S::Create});
        chain(sig, {S::Create, S::Release, S::Transfer});
        flow(sig, S::Transfer, os_, S::Transfer);
        return {};
    }

    CompileOptions opt_;
    FmGraph g_;
    std::string os_;
    std::string memory_;
    std::string alu_;
    std::string statements_;
    std::string constants_;
    std::map<std::string, std::string> vars_;
};

}  // namespace

FmGraph compile(const ast::Program& program, const CompileOptions& options) {
    return Compiler(options).run(program);
}

}  // namespace fm
