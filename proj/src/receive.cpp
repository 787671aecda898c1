#include <set>

#include "fm/transform.hpp"

namespace fm {

using S = StageKind;

FmGraph expand_receive(const FmGraph& graph) {
    FmGraph g = graph;
    std::set<std::string> split;
    for (const auto& f : graph.flowsystems()) {
        if (!f.stages.contains(S::Receive)) continue;
        split.insert(f.id);
        Flowsystem* m = g.find_flowsystem(f.id);
        m->stages.erase(S::Receive);
        m->stages.insert(S::Arrive);
        m->stages.insert(S::Accept);
    }
    if (split.empty()) return g;
    // Into Receive now means into Arrive; out of Receive means out of Accept.
    auto in = [&](StageRef& r) {
        if (r.stage == S::Receive && split.count(r.flowsystem)) r.stage = S::Arrive;
    };
    auto out = [&](StageRef& r) {
        if (r.stage == S::Receive && split.count(r.flowsystem)) r.stage = S::Accept;
    };
    for (auto& a : g.flow_arcs_mut()) {
        out(a.from);
        in(a.to);
    }
    for (auto& t : g.trigger_arcs_mut()) {
        out(t.from);
        in(t.to);
    }
    StageRef entry = g.entry();
    in(entry);
    g.set_entry(entry);
    for (const auto& id : split) {
        g.insert_flow_arc(FlowArc{g.next_arc_id(ArcKind::Flow), {id, S::Arrive}, {id, S::Accept}, {}});
    }
    return g;
}

FmGraph merge_receive(const FmGraph& graph) {
    FmGraph g = graph;
    std::set<std::string> joined;
    for (const auto& f : graph.flowsystems()) {
        bool arrive = f.stages.contains(S::Arrive);
        bool accept = f.stages.contains(S::Accept);
        if (arrive != accept) {
            throw FmError(ViolationCode::MixedReceive, f.id,
                          "flowsystem '" + f.id + "' has " + (arrive ? "Arrive without Accept" : "Accept without Arrive"));
        }
        if (!arrive) continue;
        joined.insert(f.id);
        Flowsystem* m = g.find_flowsystem(f.id);
        m->stages.erase(S::Arrive);
        m->stages.erase(S::Accept);
        m->stages.insert(S::Receive);
    }
    if (joined.empty()) return g;
    auto map = [&](StageRef& r) {
        if ((r.stage == S::Arrive || r.stage == S::Accept) && joined.count(r.flowsystem)) r.stage = S::Receive;
    };
    std::vector<std::string> hidden;
    for (const auto& a : graph.flow_arcs()) {
        if (a.from.flowsystem == a.to.flowsystem && joined.count(a.from.flowsystem) && a.from.stage == S::Arrive &&
            a.to.stage == S::Accept) {
            hidden.push_back(a.id);
        }
    }
    for (const auto& id : hidden) g.remove_flow_arc(id);
    for (auto& a : g.flow_arcs_mut()) {
        map(a.from);
        map(a.to);
    }
    for (auto& t : g.trigger_arcs_mut()) {
        map(t.from);
        map(t.to);
    }
    StageRef entry = g.entry();
    map(entry);
    g.set_entry(entry);
    return g;
}

}  // namespace fm
