#include <algorithm>

#include "fm/compile.hpp"
#include "fm/emit.hpp"

namespace fm {

namespace {

std::string attr(const Flowsystem* f, const char* key) {
    if (f == nullptr) return {};
    auto it = f->attrs.find(key);
    return it == f->attrs.end() ? std::string{} : it->second;
}

std::string shown(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '\n') out += "\\n";
        else if (c == '\t') out += "\\t";
        else out += c;
    }
    return "'" + out + "'";
}

std::string capital(std::string s) {
    // C++ stream names keep their spelling.
    if (s.rfind("cout", 0) == 0 || s.rfind("cin", 0) == 0) return s;
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

// Where a flowsystem sits, as a noun phrase.
std::string place(const Flowsystem* f) {
    if (f == nullptr) return "an unknown flowsystem";
    std::string r = attr(f, "role");
    if (r == role::kOs) return "the operating system";
    if (r == role::kMemory) return "memory location " + attr(f, "var");
    if (r == role::kLiteral) return "memory";
    if (r == role::kScreen) return "the screen";
    if (r == role::kKeyboard) return "the keyboard";
    if (r == role::kUser) return "the user";
    if (r == role::kCout || r == role::kCin) return f->name;
    if (r == role::kAluOp || r == role::kAluCompare || r == role::kAluResult || r == role::kConstant) {
        if (r == role::kConstant && f->name == "Constant") return "the constant store";
        return "the ALU";
    }
    if (r == role::kSignal) return "the return statement";
    return f->name;
}

// The flowthing a flowsystem carries, as a noun phrase.
std::string thing(const Flowsystem* f) {
    if (f == nullptr) return "a flowthing";
    std::string r = attr(f, "role");
    std::string v = attr(f, "value");
    if (r == role::kLiteral) {
        return f->kind == FlowthingKind::DataString ? "the string " + shown(v) : "the constant " + v;
    }
    if (r == role::kConstant) return "the constant " + v;
    if (r == role::kSignal) return "the return signal " + v;
    if (r == role::kMemory) return "the value of " + attr(f, "var");
    if (r == role::kKeyboard) return "the typed integer";
    if (r == role::kUser) return "the user action";
    if (r == role::kAluResult) return "the result of " + f->name.substr(0, f->name.rfind(' '));
    if (r == role::kOs) return "the start signal";
    switch (f->kind) {
    case FlowthingKind::DataString: return "the string";
    case FlowthingKind::DataInt: return "the integer";
    case FlowthingKind::Signal: return "the signal";
    case FlowthingKind::Action: return "the action";
    }
    return "the flowthing";
}

std::string at(const Flowsystem* f, StageKind s) {
    std::string out = place(f);
    std::string r = attr(f, "role");
    if (r == role::kAluOp || r == role::kAluCompare) out += " (" + f->name + ")";
    return out + " at " + std::string(to_string(s));
}

std::string trigger_line(const FmGraph& g, const TriggerArc& t) {
    const Flowsystem* a = g.find_flowsystem(t.from.flowsystem);
    const Flowsystem* b = g.find_flowsystem(t.to.flowsystem);
    std::string target;
    switch (t.to.stage) {
    case StageKind::Create: target = "the creation of " + thing(b) + " in " + place(b); break;
    case StageKind::Release: target = "the release of " + thing(b) + " from " + place(b); break;
    case StageKind::Transfer: target = place(b) + (attr(b, "role") == role::kAluOp ||
                                                              attr(b, "role") == role::kAluCompare
                                                          ? " (" + b->name + ")"
                                                          : std::string{});
        break;
    default: target = at(b, t.to.stage); break;
    }
    std::string line = capital(at(a, t.from.stage)) + " triggers " + target;
    if (t.condition == TriggerCondition::OnTrue) line += " when the comparison holds";
    if (t.condition == TriggerCondition::OnFalse) line += " when the comparison fails";
    if (!t.scope.empty()) line += " once " + thing(g.find_flowsystem(t.scope)) + " is stored";
    return line + ".";
}

std::string flow_line(const FmGraph& g, const FlowArc& a) {
    const Flowsystem* from = g.find_flowsystem(a.from.flowsystem);
    const Flowsystem* to = g.find_flowsystem(a.to.flowsystem);
    if (from != to) {
        return capital(thing(from)) + " is released from " + place(from) + " and transferred to " + place(to) +
               (attr(to, "role") == role::kAluOp || attr(to, "role") == role::kAluCompare ? " (" + to->name + ")"
                                                                                         : std::string{}) +
               ".";
    }
    if (a.from.stage == StageKind::Create) {
        return capital(thing(from)) + " is created in " + place(from) + " and moves to " +
               std::string(to_string(a.to.stage)) + ".";
    }
    return capital(thing(from)) + " moves from " + std::string(to_string(a.from.stage)) + " to " +
           std::string(to_string(a.to.stage)) + " in " + place(from) + ".";
}

std::string static_narrative(const FmGraph& g, NarrativeDetail detail) {
    struct Item {
        std::uint64_t ordinal;
        std::string text;
    };
    std::vector<Item> items;
    for (const auto& a : g.flow_arcs()) {
        bool keep = detail == NarrativeDetail::Verbose || a.from.flowsystem != a.to.flowsystem ||
                    a.from.stage == StageKind::Create;
        if (keep) items.push_back({arc_ordinal(a.id), flow_line(g, a)});
    }
    for (const auto& t : g.trigger_arcs()) items.push_back({arc_ordinal(t.id), trigger_line(g, t)});
    std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.ordinal < y.ordinal; });
    std::string out;
    int n = 0;
    for (const auto& i : items) out += std::to_string(++n) + ". " + i.text + "\n";
    return out;
}

std::string dynamic_narrative(const FmGraph& g, const Trace& trace) {
    auto fs = [&](std::uint32_t i) -> const Flowsystem* {
        return i < trace.names.size() ? g.find_flowsystem(trace.names[i]) : nullptr;
    };
    std::string out;
    int n = 0;
    for (const auto& e : trace.events) {
        const Flowsystem* f = fs(e.flowsystem);
        std::string tok = "token " + std::to_string(e.token);
        std::string line;
        switch (e.type) {
        case EventType::Spawn:
            line = capital(tok) + (e.value.empty() ? std::string{} : " carrying " + shown(e.value)) +
                   " is created in " + at(f, e.stage);
            break;
        case EventType::Enter: line = capital(tok) + " moves to " + at(f, e.stage); break;
        case EventType::Rest: line = capital(tok) + " comes to rest in " + at(f, e.stage); break;
        case EventType::Fire: {
            std::string arc = e.arc < trace.arcs.size() ? trace.arcs[e.arc] : "?";
            line = "Trigger " + arc + " fires from " + at(f, e.stage);
            if (!e.detail.empty()) line += " (" + e.detail + ")";
            break;
        }
        case EventType::Compute:
            if (e.detail.find(' ') == std::string::npos) {
                line = "ALU passes " + e.detail + " on, triggering creation of " + e.value;
            } else {
                line = "ALU processes " + e.detail + ", triggering creation of " + e.value;
            }
            break;
        case EventType::Compare: line = "ALU compares " + e.detail + ": " + e.value; break;
        case EventType::Store: line = capital(place(f)) + " stores " + e.value; break;
        case EventType::Display: line = "The screen shows " + shown(e.value); break;
        case EventType::Warning: line = "Warning: " + e.detail; break;
        }
        out += std::to_string(++n) + ". " + line + "\n";
    }
    return out;
}

}  // namespace

std::string narrate(const FmGraph& graph, const Trace* trace, NarrativeDetail detail) {
    return trace ? dynamic_narrative(graph, *trace) : static_narrative(graph, detail);
}

}  // namespace fm
