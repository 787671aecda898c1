#include <unordered_map>

#include "fm/sim.hpp"

namespace fm {

std::vector<std::string> check_event_log(const FmGraph& graph, const Trace& trace) {
    struct State {
        std::uint32_t fs;
        StageKind stage;
        bool retired = false;
        std::vector<std::uint32_t> released;  // flowsystems this token was released from
    };
    std::vector<std::string> problems;
    std::unordered_map<std::string_view, const FlowArc*> flows;
    for (const auto& a : graph.flow_arcs()) flows.emplace(a.id, &a);
    std::unordered_map<std::uint64_t, State> live;

    auto where = [&](std::uint32_t fs, StageKind s) {
        return (fs < trace.names.size() ? trace.names[fs] : "?") + ":" + std::string(to_string(s));
    };
    auto report = [&](const Event& e, const std::string& what) {
        problems.push_back("step " + std::to_string(e.step) + " token " + std::to_string(e.token) + ": " + what);
    };

    for (const auto& e : trace.events) {
        if (e.token == 0) continue;
        auto it = live.find(e.token);
        if (e.type == EventType::Spawn) {
            if (it != live.end()) report(e, "spawned twice");
            live[e.token] = State{e.flowsystem, e.stage};
            continue;
        }
        if (it == live.end()) {
            report(e, "used before being spawned");
            continue;
        }
        State& st = it->second;
        if (st.retired) {
            report(e, "active after retiring");
            continue;
        }
        if (e.type == EventType::Enter) {
            const FlowArc* arc = nullptr;
            if (e.arc < trace.arcs.size()) {
                auto f = flows.find(trace.arcs[e.arc]);
                if (f != flows.end()) arc = f->second;
            }
            std::string from = where(st.fs, st.stage);
            std::string to = where(e.flowsystem, e.stage);
            if (arc == nullptr || to_string(arc->from) != from || to_string(arc->to) != to) {
                report(e, "moved " + from + " -> " + to + " without a matching flow arc");
            }
            if (st.stage == StageKind::Release) st.released.push_back(st.fs);
            bool early = e.stage == StageKind::Create || e.stage == StageKind::Receive ||
                         e.stage == StageKind::Process || e.stage == StageKind::Arrive ||
                         e.stage == StageKind::Accept;
            if (early) {
                for (auto fs : st.released) {
                    if (fs == e.flowsystem) report(e, "flowed back into " + to + " after release");
                }
            }
            st.fs = e.flowsystem;
            st.stage = e.stage;
            continue;
        }
        if (e.flowsystem != st.fs || e.stage != st.stage) {
            report(e, std::string(to_string(e.type)) + " at " + where(e.flowsystem, e.stage) + " while located at " +
                          where(st.fs, st.stage));
        }
        if (e.type == EventType::Rest) st.retired = true;
    }
    return problems;
}

}  // namespace fm
