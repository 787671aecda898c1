#include "fm/frontend.hpp"
#include "fm/transform.hpp"

namespace fm {

const char* to_string(FlowchartNodeKind k) noexcept {
    switch (k) {
    case FlowchartNodeKind::Terminal: return "Terminal";
    case FlowchartNodeKind::Process: return "Process";
    case FlowchartNodeKind::InputOutput: return "InputOutput";
    case FlowchartNodeKind::Decision: return "Decision";
    }
    return "?";
}

namespace {

// Both entry points reduce to this outline first.
struct Outline {
    std::string tmpl;  // decl, input, output, assign, if, while, return
    std::string text;  // statement text, or the condition for if/while
    bool inert = false;  // declaration without initializer
    std::vector<Outline> body;
};

std::vector<Outline> outline(const std::vector<ast::Stmt>& stmts) {
    std::vector<Outline> out;
    for (const auto& s : stmts) {
        Outline o;
        if (const auto* f = std::get_if<ast::If>(&s.node)) {
            o = {"if", condition_text(f->cond), false, outline(f->body)};
        } else if (const auto* w = std::get_if<ast::While>(&s.node)) {
            o = {"while", condition_text(w->cond), false, outline(w->body)};
        } else {
            const auto* d = std::get_if<ast::Decl>(&s.node);
            static constexpr const char* kNames[] = {"decl", "input", "output", "assign", "", "", "return"};
            o = {kNames[s.node.index()], statement_text(s), d != nullptr && !d->init, {}};
        }
        out.push_back(std::move(o));
    }
    return out;
}

std::vector<Outline> outline(const FmGraph& g, const Sphere& parent) {
    std::vector<Outline> out;
    for (const auto& id : parent.children) {
        const Sphere* s = g.find_sphere(id);
        if (s == nullptr || !s->attrs.count("template")) continue;
        Outline o;
        o.tmpl = s->attrs.at("template");
        bool compound = o.tmpl == "if" || o.tmpl == "while";
        auto text = s->attrs.find(compound ? "condition" : "text");
        if (text != s->attrs.end()) o.text = text->second;
        o.inert = o.tmpl == "decl" && s->flowsystems.empty();
        if (compound) o.body = outline(g, *s);
        out.push_back(std::move(o));
    }
    return out;
}

class Builder {
public:
    Flowchart run(const std::vector<Outline>& stmts) {
        std::string start = node(FlowchartNodeKind::Terminal, "start");
        std::vector<Exit> open = block(stmts, {{start, ""}});
        if (!open.empty()) link(open, node(FlowchartNodeKind::Terminal, "end"));
        return std::move(fc_);
    }

private:
    struct Exit {
        std::string from;
        std::string label;
    };

    std::string node(FlowchartNodeKind kind, std::string label) {
        std::string id = "n" + std::to_string(fc_.nodes.size());
        fc_.nodes.push_back({id, kind, std::move(label)});
        return id;
    }

    void link(const std::vector<Exit>& from, const std::string& to) {
        for (const auto& e : from) fc_.edges.push_back({e.from, to, e.label});
    }

    std::vector<Exit> block(const std::vector<Outline>& stmts, std::vector<Exit> open) {
        for (const auto& s : stmts) {
            if (open.empty()) break;  // unreachable after return
            if (s.inert) continue;
            if (s.tmpl == "if" || s.tmpl == "while") {
                std::string d = node(FlowchartNodeKind::Decision, s.text);
                link(open, d);
                std::vector<Exit> body = block(s.body, {{d, "true"}});
                if (s.tmpl == "while") {
                    link(body, d);
                    open = {{d, "false"}};
                } else {
                    open = std::move(body);
                    open.push_back({d, "false"});
                }
                continue;
            }
            FlowchartNodeKind kind = FlowchartNodeKind::Process;
            if (s.tmpl == "input" || s.tmpl == "output") kind = FlowchartNodeKind::InputOutput;
            if (s.tmpl == "return") kind = FlowchartNodeKind::Terminal;
            std::string n = node(kind, s.text);
            link(open, n);
            open = kind == FlowchartNodeKind::Terminal ? std::vector<Exit>{} : std::vector<Exit>{{n, ""}};
        }
        return open;
    }

    Flowchart fc_;
};

}  // namespace

Flowchart to_flowchart(const ast::Program& program) { return Builder{}.run(outline(program.statements)); }

Flowchart to_flowchart(const FmGraph& graph) {
    // Top-level statement spheres all share the one container without a template.
    for (const auto& s : graph.spheres()) {
        if (s.attrs.count("template")) continue;
        for (const auto& c : s.children) {
            const Sphere* child = graph.find_sphere(c);
            if (child != nullptr && child->attrs.count("template")) return Builder{}.run(outline(graph, s));
        }
    }
    for (const auto& s : graph.spheres()) {
        if (s.name == "Statements") return Builder{}.run(outline(graph, s));
    }
    return Builder{}.run({});
}

}  // namespace fm
