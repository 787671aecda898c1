#include <algorithm>
#include <map>
#include <set>

#include "fm/graph.hpp"

namespace fm {

bool intra_flow_cycle(const std::vector<FlowArc>& arcs, std::string_view flowsystem);

namespace {

class Collector {
public:
    void add(ViolationCode code, std::string subject, std::string message) {
        out_.push_back(Violation{code, std::move(subject), std::move(message)});
    }

    std::vector<Violation> finish() && {
        std::stable_sort(out_.begin(), out_.end(), [](const Violation& a, const Violation& b) {
            if (a.subject != b.subject) return natural_less(a.subject, b.subject);
            return a.code < b.code;
        });
        return std::move(out_);
    }

private:
    std::vector<Violation> out_;
};

void check_ids(const FmGraph& g, Collector& out) {
    std::map<std::string, int> seen;
    for (const auto& s : g.spheres()) ++seen[s.id];
    for (const auto& f : g.flowsystems()) ++seen[f.id];
    for (const auto& a : g.flow_arcs()) ++seen[a.id];
    for (const auto& a : g.trigger_arcs()) ++seen[a.id];
    for (const auto& [id, n] : seen) {
        if (n > 1) {
            out.add(ViolationCode::DuplicateId, id,
                    "id '" + id + "' is used by " + std::to_string(n) + " elements");
        }
    }
}

void check_containment(const FmGraph& g, Collector& out) {
    std::map<std::string, int> parents;
    for (const auto& s : g.spheres()) {
        for (const auto& c : s.children) {
            if (g.find_sphere(c) == nullptr) {
                out.add(ViolationCode::DanglingRef, s.id, "child sphere '" + c + "' does not exist");
            } else {
                ++parents[c];
            }
        }
        for (const auto& fid : s.flowsystems) {
            const auto* f = g.find_flowsystem(fid);
            if (f == nullptr) {
                out.add(ViolationCode::DanglingRef, s.id, "flowsystem '" + fid + "' does not exist");
            } else if (f->owner != s.id) {
                out.add(ViolationCode::DanglingRef, fid,
                        "flowsystem is listed by '" + s.id + "' but owned by '" + f->owner + "'");
            }
        }
    }

    std::vector<std::string> roots;
    for (const auto& s : g.spheres()) {
        auto it = parents.find(s.id);
        int n = it == parents.end() ? 0 : it->second;
        if (n == 0) roots.push_back(s.id);
        if (n > 1) {
            out.add(ViolationCode::DanglingRef, s.id,
                    "sphere has " + std::to_string(n) + " parents; containment must be a tree");
        }
    }
    if (g.spheres().empty()) {
        out.add(ViolationCode::BadEntry, "", "graph has no root sphere");
    } else if (roots.size() != 1) {
        out.add(ViolationCode::DanglingRef, roots.empty() ? g.spheres().front().id : roots[1],
                "containment has " + std::to_string(roots.size()) + " roots; exactly one required");
    }

    // Reachability from the root catches cycles that leave every sphere with one parent.
    if (!roots.empty()) {
        std::set<std::string> reached;
        std::vector<std::string> stack{roots.front()};
        while (!stack.empty()) {
            auto id = stack.back();
            stack.pop_back();
            if (!reached.insert(id).second) continue;
            if (const auto* s = g.find_sphere(id)) {
                for (const auto& c : s->children) stack.push_back(c);
            }
        }
        for (const auto& s : g.spheres()) {
            bool other_root = std::find(roots.begin() + 1, roots.end(), s.id) != roots.end();
            if (!reached.contains(s.id) && !other_root) {
                out.add(ViolationCode::DanglingRef, s.id, "sphere is not reachable from the root");
            }
        }
    }

    for (const auto& f : g.flowsystems()) {
        const auto* owner = g.find_sphere(f.owner);
        if (owner == nullptr) {
            out.add(ViolationCode::DanglingRef, f.id, "owner sphere '" + f.owner + "' does not exist");
        } else if (std::find(owner->flowsystems.begin(), owner->flowsystems.end(), f.id) ==
                   owner->flowsystems.end()) {
            out.add(ViolationCode::DanglingRef, f.id,
                    "owner sphere '" + f.owner + "' does not list this flowsystem");
        }
        if (f.stages.empty()) {
            out.add(ViolationCode::DanglingRef, f.id, "flowsystem has no stages");
        }
        bool receive = f.stages.contains(StageKind::Receive);
        bool arrive = f.stages.contains(StageKind::Arrive);
        bool accept = f.stages.contains(StageKind::Accept);
        if (receive && (arrive || accept)) {
            out.add(ViolationCode::MixedReceive, f.id, "Receive coexists with Arrive/Accept");
        } else if (arrive != accept) {
            out.add(ViolationCode::MixedReceive, f.id,
                    arrive ? "Arrive without Accept" : "Accept without Arrive");
        }
    }
}

void check_arcs(const FmGraph& g, Collector& out) {
    std::set<std::string> with_intra;
    for (const auto& a : g.flow_arcs()) {
        bool ok = true;
        for (const auto* ref : {&a.from, &a.to}) {
            if (!g.resolves(*ref)) {
                out.add(ViolationCode::DanglingRef, a.id,
                        "endpoint '" + to_string(*ref) + "' does not resolve");
                ok = false;
            }
        }
        if (!ok) continue;
        if (a.from.flowsystem != a.to.flowsystem) {
            if (a.from.stage != StageKind::Transfer || a.to.stage != StageKind::Transfer) {
                out.add(ViolationCode::NonTransferCrossing, a.id,
                        "crossing " + to_string(a.from) + " -> " + to_string(a.to) +
                            " is not Transfer -> Transfer");
            }
        } else {
            with_intra.insert(a.from.flowsystem);
            if (!legal_adjacency(a.from.stage, a.to.stage)) {
                out.add(ViolationCode::IllegalAdjacency, a.id,
                        "illegal adjacency " + std::string(to_string(a.from.stage)) + " -> " +
                            std::string(to_string(a.to.stage)));
            }
        }
    }
    for (const auto& fs : with_intra) {
        if (intra_flow_cycle(g.flow_arcs(), fs)) {
            out.add(ViolationCode::FlowCycle, fs, "intra-flowsystem flow arcs form a cycle");
        }
    }
    for (const auto& t : g.trigger_arcs()) {
        for (const auto* ref : {&t.from, &t.to}) {
            if (!g.resolves(*ref)) {
                out.add(ViolationCode::DanglingRef, t.id,
                        "endpoint '" + to_string(*ref) + "' does not resolve");
            }
        }
        if (!t.scope.empty() && g.find_flowsystem(t.scope) == nullptr) {
            out.add(ViolationCode::DanglingRef, t.id, "scope '" + t.scope + "' does not resolve");
        }
    }
}

}  // namespace

std::vector<Violation> validate(const FmGraph& graph) {
    Collector out;
    check_ids(graph, out);
    check_containment(graph, out);
    check_arcs(graph, out);
    if (!graph.empty() && !graph.resolves(graph.entry())) {
        out.add(ViolationCode::BadEntry, to_string(graph.entry()), "entry does not resolve");
    }
    return std::move(out).finish();
}

}  // namespace fm
