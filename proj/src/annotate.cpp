#include "fm/transform.hpp"

namespace fm {

FmGraph collapse_single(const FmGraph& graph) {
    FmGraph g = graph;
    for (const auto& s : graph.spheres()) {
        if (s.flowsystems.size() == 1 && s.children.empty()) g.annotations()[s.id]["collapsed"] = "true";
    }
    return g;
}

namespace {

bool is_statement(const Sphere* s) { return s != nullptr && s->attrs.count("template") != 0; }

}  // namespace

FmGraph fuse_statements(const FmGraph& graph) {
    FmGraph g = graph;
    int group = 0;
    for (const auto& parent : graph.spheres()) {
        std::vector<const Sphere*> run;
        auto flush = [&] {
            if (run.size() >= 2) {
                std::string id = "g" + std::to_string(++group);
                for (const Sphere* s : run) g.annotations()[s->id]["fused_group"] = id;
            }
            run.clear();
        };
        for (const auto& child_id : parent.children) {
            const Sphere* child = graph.find_sphere(child_id);
            if (!is_statement(child)) {
                flush();
                continue;
            }
            const std::string& tmpl = child->attrs.at("template");
            if (tmpl == "if" || tmpl == "while") {
                flush();
                continue;
            }
            if (!run.empty() && run.front()->attrs.at("template") != tmpl) flush();
            run.push_back(child);
        }
        flush();
    }
    return g;
}

}  // namespace fm
