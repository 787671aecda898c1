#include <set>

#include "fm/compile.hpp"
#include "fm/emit.hpp"

namespace fm {

namespace {

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else if (c == '\r' || c == '\t') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out + "\"";
}

std::string node_id(const StageRef& r) { return quote(to_string(r)); }

std::string annotation(const FmGraph& g, const std::string& id, const char* key) {
    auto it = g.annotations().find(id);
    if (it == g.annotations().end()) return {};
    auto a = it->second.find(key);
    return a == it->second.end() ? std::string{} : a->second;
}

class DotWriter {
public:
    DotWriter(const FmGraph& g, const RenderOptions& o) : g_(g), o_(o) {}

    std::string run() {
        out_ = "digraph fm {\n  compound=true;\n  rankdir=LR;\n  node [shape=plaintext, fontsize=10];\n";
        std::string root = g_.root();
        if (const Sphere* s = g_.find_sphere(root)) sphere(*s, 1);
        for (const auto& a : g_.flow_arcs()) {
            if (!drawn(a.from) || !drawn(a.to)) continue;
            out_ += "  " + node_id(a.from) + " -> " + node_id(a.to);
            out_ += a.label.empty() ? " [style=solid];\n" : " [style=solid, label=" + quote(a.label) + "];\n";
        }
        if (o_.show_triggers) {
            for (const auto& t : g_.trigger_arcs()) {
                if (!drawn(t.from) || !drawn(t.to)) continue;
                std::string label = t.label;
                out_ += "  " + node_id(t.from) + " -> " + node_id(t.to) + " [style=dashed";
                if (!label.empty()) out_ += ", label=" + quote(label);
                out_ += "];\n";
            }
        }
        out_ += "}\n";
        return std::move(out_);
    }

private:
    bool drawn(const StageRef& r) const { return drawn_.count(to_string(r)) != 0; }

    void pad(int depth) { out_.append(static_cast<std::size_t>(depth) * 2, ' '); }

    void sphere(const Sphere& s, int depth) {
        if (!visited_.insert(s.id).second) return;
        bool collapsed = o_.honor_collapse && annotation(g_, s.id, "collapsed") == "true" &&
                         s.flowsystems.size() == 1 && s.children.empty();
        if (collapsed) {
            if (const Flowsystem* f = g_.find_flowsystem(s.flowsystems.front())) {
                flowsystem(*f, depth, s.name + ": " + f->name);
                return;
            }
        }
        pad(depth);
        out_ += "subgraph " + quote("cluster_s_" + s.id) + " {\n";
        pad(depth + 1);
        out_ += "label=" + quote(s.name) + ";\n";
        pad(depth + 1);
        out_ += "style=rounded;\n";
        for (const auto& id : s.flowsystems) {
            if (const Flowsystem* f = g_.find_flowsystem(id)) flowsystem(*f, depth + 1, f->name);
        }
        std::string group;
        for (const auto& id : s.children) {
            const Sphere* c = g_.find_sphere(id);
            if (c == nullptr) continue;
            std::string next = o_.honor_fusion ? annotation(g_, c->id, "fused_group") : std::string{};
            if (next != group) {
                if (!group.empty()) close(depth + 1);
                if (!next.empty()) {
                    pad(depth + 1);
                    out_ += "subgraph " + quote("cluster_g_" + s.id + "_" + next) + " {\n";
                    pad(depth + 2);
                    out_ += "label=\"\";\n";
                    pad(depth + 2);
                    out_ += "style=bold;\n";
                }
                group = next;
            }
            sphere(*c, depth + (group.empty() ? 1 : 2));
        }
        if (!group.empty()) close(depth + 1);
        close(depth);
    }

    void close(int depth) {
        pad(depth);
        out_ += "}\n";
    }

    void flowsystem(const Flowsystem& f, int depth, const std::string& label) {
        pad(depth);
        out_ += "subgraph " + quote("cluster_f_" + f.id) + " {\n";
        pad(depth + 1);
        out_ += "label=" + quote(label) + ";\n";
        pad(depth + 1);
        out_ += "style=solid;\n";
        auto role = f.attrs.find("role");
        bool decision = o_.style == RenderStyle::Simplified && role != f.attrs.end() &&
                        role->second == role::kAluCompare;
        for (auto st : f.stages.list()) {
            StageRef r{f.id, st};
            drawn_.insert(to_string(r));
            pad(depth + 1);
            if (decision && st == StageKind::Process) {
                auto text = f.attrs.find("text");
                std::string l = text == f.attrs.end() ? std::string("compare") : text->second;
                out_ += node_id(r) + " [shape=diamond, label=" + quote(l) + "];\n";
            } else {
                out_ += node_id(r) + " [label=" + quote(to_string(st)) + "];\n";
            }
        }
        close(depth);
    }

    const FmGraph& g_;
    const RenderOptions& o_;
    std::string out_;
    std::set<std::string> visited_;
    std::set<std::string> drawn_;
};

const char* shape(FlowchartNodeKind k) {
    switch (k) {
    case FlowchartNodeKind::Terminal: return "ellipse";
    case FlowchartNodeKind::Process: return "box";
    case FlowchartNodeKind::InputOutput: return "parallelogram";
    case FlowchartNodeKind::Decision: return "diamond";
    }
    return "box";
}

}  // namespace

std::string to_dot(const FmGraph& graph, const RenderOptions& options) { return DotWriter(graph, options).run(); }

std::string flowchart_to_dot(const Flowchart& chart) {
    std::string out = "digraph flowchart {\n  node [fontsize=10];\n";
    for (const auto& n : chart.nodes) {
        out += "  " + quote(n.id) + " [shape=" + shape(n.kind) + ", label=" + quote(n.label) + "];\n";
    }
    for (const auto& e : chart.edges) {
        out += "  " + quote(e.from) + " -> " + quote(e.to);
        out += e.label.empty() ? ";\n" : " [label=" + quote(e.label) + "];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace fm
