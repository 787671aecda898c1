#include "fm/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fm/compile.hpp"
#include "fm/emit.hpp"
#include "fm/frontend.hpp"
#include "fm/random_program.hpp"
#include "fm/sim.hpp"
#include "fm/transform.hpp"

namespace fm {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string input;
    std::string script;
    std::string out_path;
    std::string style = "full";
    bool no_triggers = false;
    bool collapse = false;
    bool fuse = false;
    bool no_keyboard_screen = false;
    bool fetch_constants = false;
    bool oracle = false;
    bool verbose = false;
    std::uint64_t max_steps = Limits{}.max_steps;
    std::uint64_t seed = 1;
};

// Either a parsed program (with its compiled graph) or a loaded graph.
struct Loaded {
    std::optional<ast::Program> program;
    FmGraph graph;
};

std::string read_file(const std::string& path, std::istream& in) {
    if (path == "-") {
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

bool looks_like_json(const std::string& text) {
    auto it = std::find_if(text.begin(), text.end(), [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
    return it != text.end() && *it == '{';
}

std::string display_name(const std::string& path) { return path == "-" ? "<stdin>" : path; }

ast::Program load_program(const Config& c, std::istream& in) {
    std::string text = read_file(c.input, in);
    if (looks_like_json(text)) throw UsageError("expected C++ source, got a JSON graph");
    return parse(text);
}

Loaded load(const Config& c, std::istream& in) {
    std::string text = read_file(c.input, in);
    Loaded l;
    if (looks_like_json(text)) {
        l.graph = from_json(text);
    } else {
        l.program = parse(text);
        l.graph = compile(*l.program, CompileOptions{!c.no_keyboard_screen, c.fetch_constants});
    }
    if (c.collapse) l.graph = collapse_single(l.graph);
    if (c.fuse) l.graph = fuse_statements(l.graph);
    return l;
}

InputScript script(const Config& c) {
    std::string text = c.script;
    if (!text.empty() && text.front() == '@') {
        std::ifstream f(text.substr(1));
        if (!f) throw UsageError("cannot read input script '" + text.substr(1) + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    try {
        return InputScript::parse(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        default: out += c;
        }
    }
    return out + "\"";
}

void dump(const std::vector<ast::Stmt>& stmts, int depth, std::string& out) {
    for (const auto& s : stmts) {
        out.append(static_cast<std::size_t>(depth) * 2, ' ');
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, ast::Decl>) {
                    out += "Decl " + n.name + (n.init ? " = " + std::to_string(*n.init) : std::string{});
                } else if constexpr (std::is_same_v<T, ast::Input>) {
                    out += "Input";
                    for (const auto& t : n.targets) out += " " + t;
                } else if constexpr (std::is_same_v<T, ast::Output>) {
                    out += "Output";
                    for (const auto& item : n.items) {
                        if (const auto* e = std::get_if<ast::Expr>(&item)) out += " [" + expr_text(*e) + "]";
                        else if (const auto* str = std::get_if<ast::StringLit>(&item)) out += " " + quoted(str->text);
                        else out += " endl";
                    }
                } else if constexpr (std::is_same_v<T, ast::Assign>) {
                    out += "Assign " + n.target + " = " + expr_text(n.value);
                } else if constexpr (std::is_same_v<T, ast::If>) {
                    out += "If " + condition_text(n.cond);
                } else if constexpr (std::is_same_v<T, ast::While>) {
                    out += "While " + condition_text(n.cond);
                } else {
                    out += "Return " + std::to_string(n.value);
                }
            },
            s.node);
        if (s.line > 0) out += "  @" + std::to_string(s.line);
        out += "\n";
        if (const auto* f = std::get_if<ast::If>(&s.node)) dump(f->body, depth + 1, out);
        if (const auto* w = std::get_if<ast::While>(&s.node)) dump(w->body, depth + 1, out);
    }
}

std::string report(const Trace& t) {
    std::string out = "screen:";
    for (const auto& s : t.screen) out += " " + quoted(s);
    out += "\nmemory:";
    for (const auto& [k, v] : t.memory_final) out += " " + k + "=" + std::to_string(v);
    out += "\nreturn: " + (t.os_return ? std::to_string(*t.os_return) : std::string("none"));
    out += "\nsteps: " + std::to_string(t.steps) + "\n";
    out += "--- output ---\n" + t.screen_text();
    if (!t.screen_text().empty() && t.screen_text().back() != '\n') out += "\n";
    out += "--------------\n";
    return out;
}

class Driver {
public:
    Driver(std::ostream& out, std::ostream& err, std::istream& in) : out_(out), err_(err), in_(in) {}

    int run(const std::vector<std::string>& args) {
        CLI::App app{"Compile mini C++ programs to flowthing graphs, check, simulate and render them.", "fmcc"};
        app.require_subcommand(1, 1);
        app.set_help_all_flag("--help-all", "Show help for every subcommand");

        auto input = [&](CLI::App* sub, const char* what) {
            sub->add_option("input", c_.input, what)->required();
        };
        auto model = [&](CLI::App* sub) {
            sub->add_flag("--no-keyboard-screen", c_.no_keyboard_screen,
                          "Omit user, keyboard and screen flowsystems");
            sub->add_flag("--fetch-constants", c_.fetch_constants, "Fetch literal operands from stored constants");
        };
        auto annotate = [&](CLI::App* sub) {
            sub->add_flag("--collapse", c_.collapse, "Mark single-flowsystem spheres as collapsed");
            sub->add_flag("--fuse", c_.fuse, "Group runs of same-kind statements");
        };
        auto outfile = [&](CLI::App* sub) { sub->add_option("--out", c_.out_path, "Write output here (default stdout)"); };

        CLI::App* parse_cmd = app.add_subcommand("parse", "Dump the syntax tree of a source file");
        input(parse_cmd, "Source file or -");
        outfile(parse_cmd);

        CLI::App* compile_cmd = app.add_subcommand("compile", "Emit the graph as JSON");
        input(compile_cmd, "Source file or -");
        model(compile_cmd);
        annotate(compile_cmd);
        outfile(compile_cmd);

        CLI::App* check_cmd = app.add_subcommand("check", "Validate a JSON graph (or compiled source)");
        input(check_cmd, "JSON graph, source file or -");
        model(check_cmd);

        CLI::App* render_cmd = app.add_subcommand("render", "Render a graph as Graphviz DOT");
        input(render_cmd, "JSON graph, source file or -");
        model(render_cmd);
        annotate(render_cmd);
        outfile(render_cmd);
        render_cmd->add_option("--style", c_.style, "full or simplified")
            ->check(CLI::IsMember({"full", "simplified"}))
            ->capture_default_str();
        render_cmd->add_flag("--no-triggers", c_.no_triggers, "Leave out trigger arcs");

        CLI::App* chart_cmd = app.add_subcommand("flowchart", "Render the reduced flowchart as DOT");
        input(chart_cmd, "Source file, JSON graph or -");
        outfile(chart_cmd);

        CLI::App* sim_cmd = app.add_subcommand("simulate", "Run the graph on an input script");
        input(sim_cmd, "Source file, JSON graph or -");
        model(sim_cmd);
        annotate(sim_cmd);
        outfile(sim_cmd);
        sim_cmd->add_option("--in", c_.script, "Whitespace-separated integers, or @file");
        sim_cmd->add_flag("--oracle", c_.oracle, "Also run the reference interpreter and compare");
        sim_cmd->add_option("--max-steps", c_.max_steps, "Step limit")->capture_default_str();

        CLI::App* narrate_cmd = app.add_subcommand("narrate", "Describe the graph, or a run of it, in prose");
        input(narrate_cmd, "Source file, JSON graph or -");
        model(narrate_cmd);
        outfile(narrate_cmd);
        narrate_cmd->add_option("--in", c_.script, "Narrate a run on this script instead");
        narrate_cmd->add_flag("--verbose", c_.verbose, "One line per arc");
        narrate_cmd->add_option("--max-steps", c_.max_steps, "Step limit")->capture_default_str();

        CLI::App* gen_cmd = app.add_subcommand("gen", "Print a random test program");
        gen_cmd->add_option("--seed", c_.seed, "Generator seed")->capture_default_str();
        outfile(gen_cmd);

        try {
            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        } catch (const CLI::CallForHelp&) {
            out_ << app.help();
            return kExitOk;
        } catch (const CLI::CallForAllHelp&) {
            out_ << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            err_ << "fmcc: " << e.what() << "\n" << "run 'fmcc --help' for usage\n";
            return kExitUsage;
        }

        std::string text;
        int code = kExitOk;
        try {
            if (*parse_cmd) code = cmd_parse(text);
            else if (*compile_cmd) code = cmd_compile(text);
            else if (*check_cmd) code = cmd_check(text);
            else if (*render_cmd) code = cmd_render(text);
            else if (*chart_cmd) code = cmd_flowchart(text);
            else if (*sim_cmd) code = cmd_simulate(text);
            else if (*narrate_cmd) code = cmd_narrate(text);
            else code = cmd_gen(text);
        } catch (const ParseError& e) {
            err_ << e.format(display_name(c_.input)) << "\n";
            return kExitParse;
        } catch (const SchemaError& e) {
            err_ << display_name(c_.input) << ": schema error at " << e.path() << ": " << e.reason() << "\n";
            return kExitViolations;
        } catch (const SimError& e) {
            err_ << "simulation error: " << to_string(e.kind()) << ": " << e.what() << "\n";
            return kExitSimulation;
        } catch (const FmError& e) {
            err_ << "graph error: " << to_string(e.code()) << " " << e.subject() << ": " << e.what() << "\n";
            return kExitViolations;
        } catch (const UsageError& e) {
            err_ << "fmcc: " << e.what() << "\n";
            return kExitUsage;
        }
        if (c_.out_path.empty() || c_.out_path == "-") {
            out_ << text;
        } else {
            std::ofstream f(c_.out_path, std::ios::binary);
            if (!f) {
                err_ << "fmcc: cannot write '" << c_.out_path << "'\n";
                return kExitUsage;
            }
            f << text;
        }
        return code;
    }

private:
    int cmd_parse(std::string& text) {
        ast::Program p = load_program(c_, in_);
        for (const auto& w : lint(p)) err_ << display_name(c_.input) << ": warning: " << w << "\n";
        text = "Program\n";
        dump(p.statements, 1, text);
        return kExitOk;
    }

    int cmd_compile(std::string& text) {
        text = to_json(load(c_, in_).graph);
        return kExitOk;
    }

    int cmd_check(std::string& text) {
        auto violations = validate(load(c_, in_).graph);
        for (const auto& v : violations) {
            text += std::string(to_string(v.code)) + " " + v.subject + ": " + v.message + "\n";
        }
        if (violations.empty()) text = "ok: no violations\n";
        return violations.empty() ? kExitOk : kExitViolations;
    }

    int cmd_render(std::string& text) {
        RenderOptions o;
        o.style = c_.style == "simplified" ? RenderStyle::Simplified : RenderStyle::Full;
        o.show_triggers = !c_.no_triggers;
        text = to_dot(load(c_, in_).graph, o);
        return kExitOk;
    }

    int cmd_flowchart(std::string& text) {
        Loaded l = load(c_, in_);
        text = flowchart_to_dot(l.program ? to_flowchart(*l.program) : to_flowchart(l.graph));
        return kExitOk;
    }

    int cmd_simulate(std::string& text) {
        Loaded l = load(c_, in_);
        if (c_.oracle && !l.program) throw UsageError("--oracle needs C++ source, not a graph");
        InputScript s = script(c_);
        Limits limits{c_.max_steps};
        Trace t = simulate(l.graph, s, limits);
        for (const auto& w : t.warnings) err_ << "warning: " << w << "\n";
        text = report(t);
        if (!c_.oracle) return kExitOk;
        Trace ref = interpret(*l.program, s, limits);
        Equivalence e = equivalent(t, ref);
        text += e.equal ? "oracle: MATCH\n" : "oracle: MISMATCH: " + e.diff + "\n";
        return e.equal ? kExitOk : kExitViolations;
    }

    int cmd_narrate(std::string& text) {
        Loaded l = load(c_, in_);
        NarrativeDetail d = c_.verbose ? NarrativeDetail::Verbose : NarrativeDetail::Compact;
        if (c_.script.empty()) {
            text = narrate(l.graph, nullptr, d);
            return kExitOk;
        }
        Trace t = simulate(l.graph, script(c_), Limits{c_.max_steps});
        text = narrate(l.graph, &t, d);
        return kExitOk;
    }

    int cmd_gen(std::string& text) {
        RandomCase rc = random_case(c_.seed);
        text = "// seed " + std::to_string(c_.seed) + "\n";
        for (std::size_t i = 0; i < rc.scripts.size(); ++i) {
            text += "// script " + std::to_string(i + 1) + ":";
            for (auto v : rc.scripts[i].values) text += " " + std::to_string(v);
            text += "\n";
        }
        text += pretty(rc.program);
        return kExitOk;
    }

    std::ostream& out_;
    std::ostream& err_;
    std::istream& in_;
    Config c_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
    return Driver(out, err, in).run(args);
}

}  // namespace fm
