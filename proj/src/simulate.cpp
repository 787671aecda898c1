#include <charconv>
#include <deque>
#include <limits>
#include <unordered_map>

#include "fm/compile.hpp"
#include "fm/sim.hpp"

namespace fm {

const char* to_string(SimErrorKind k) noexcept {
    switch (k) {
    case SimErrorKind::InputExhausted: return "InputExhausted";
    case SimErrorKind::StepLimitExceeded: return "StepLimitExceeded";
    case SimErrorKind::Stuck: return "Stuck";
    case SimErrorKind::DivisionByZero: return "DivisionByZero";
    }
    return "?";
}

const char* to_string(EventType t) noexcept {
    static constexpr const char* kNames[] = {"spawn", "enter", "rest",    "fire",   "compute",
                                             "compare", "store", "display", "warning"};
    return kNames[static_cast<int>(t)];
}

InputScript InputScript::parse(std::string_view text) {
    InputScript s;
    std::size_t i = 0;
    auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',' ; };
    while (i < text.size()) {
        if (space(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && !space(text[j])) ++j;
        std::string_view word = text.substr(i, j - i);
        std::string_view digits = word.front() == '+' ? word.substr(1) : word;
        std::int64_t v = 0;
        auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (ec != std::errc{} || end != digits.data() + digits.size() || digits.empty()) {
            throw std::invalid_argument("not an integer in input script: '" + std::string(word) + "'");
        }
        s.values.push_back(v);
        i = j;
    }
    return s;
}

std::string Trace::screen_text() const {
    std::string out;
    for (const auto& s : screen) out += s;
    return out;
}

namespace {

constexpr std::size_t kStages = kAllStages.size();

std::size_t slot_of(std::uint32_t fs, StageKind s) { return fs * kStages + static_cast<std::size_t>(s); }

std::int64_t wrap_arith(const std::string& op, std::int64_t a, std::int64_t b) {
    auto ua = static_cast<std::uint64_t>(a);
    auto ub = static_cast<std::uint64_t>(b);
    if (op == "+") return static_cast<std::int64_t>(ua + ub);
    if (op == "-") return static_cast<std::int64_t>(ua - ub);
    if (op == "*") return static_cast<std::int64_t>(ua * ub);
    if (op == "/") {
        if (b == 0) throw SimError(SimErrorKind::DivisionByZero, "ALU division by zero");
        if (a == std::numeric_limits<std::int64_t>::min() && b == -1) return a;
        return a / b;
    }
    throw SimError(SimErrorKind::Stuck, "ALU has unknown operation '" + op + "'");
}

bool relation(const std::string& op, std::int64_t a, std::int64_t b) {
    if (op == "==") return a == b;
    if (op == "!=") return a != b;
    if (op == "<") return a < b;
    if (op == "<=") return a <= b;
    if (op == ">") return a > b;
    if (op == ">=") return a >= b;
    throw SimError(SimErrorKind::Stuck, "ALU has unknown comparison '" + op + "'");
}

std::string attr(const Flowsystem& f, const char* key) {
    auto it = f.attrs.find(key);
    return it == f.attrs.end() ? std::string{} : it->second;
}

std::int64_t to_int(const std::string& s) {
    std::int64_t v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

enum class Role : std::uint8_t {
    None, Os, Memory, Literal, Constant, Cout, Cin, Screen, User, Keyboard, AluOp, AluCompare, AluResult, Signal
};

Role parse_role(const std::string& r) {
    static const std::unordered_map<std::string, Role> kRoles = {
        {role::kOs, Role::Os},           {role::kMemory, Role::Memory},
        {role::kLiteral, Role::Literal}, {role::kConstant, Role::Constant},
        {role::kCout, Role::Cout},       {role::kCin, Role::Cin},
        {role::kScreen, Role::Screen},   {role::kUser, Role::User},
        {role::kKeyboard, Role::Keyboard}, {role::kAluOp, Role::AluOp},
        {role::kAluCompare, Role::AluCompare}, {role::kAluResult, Role::AluResult},
        {role::kSignal, Role::Signal},
    };
    auto it = kRoles.find(r);
    return it == kRoles.end() ? Role::None : it->second;
}

struct Node {
    const Flowsystem* fs = nullptr;
    Role role = Role::None;
    bool display = false;
    int arity = 2;
    std::string op;
    std::optional<std::int64_t> stored;
    std::int64_t last = 0;  // most recent ALU result
    std::map<std::string, std::int64_t> operands;
};

struct OutFlow {
    std::uint32_t arc;  // index into Trace::arcs
    std::uint32_t to_fs;
    StageKind to_stage;
};

struct OutTrigger {
    std::uint32_t arc;
    const TriggerArc* t;
    std::uint32_t to_fs;
    std::uint32_t scope;  // kNoIndex when unscoped
};

struct Token {
    std::uint64_t id = 0;
    std::uint32_t fs = 0;
    StageKind stage = StageKind::Create;
    std::string text;
    std::int64_t num = 0;
    std::uint32_t came_from = kNoIndex;
    std::uint32_t requester = kNoIndex;
    std::string slot;
    bool outgoing = false;  // at a Transfer stage: leaving rather than arriving
};

struct Work {
    bool is_move = false;
    Token token;                      // move
    std::uint32_t to_fs = kNoIndex;   // activation target
    StageKind to_stage = StageKind::Create;
    std::uint32_t source = kNoIndex;  // activating flowsystem
    std::string label;
};

class Simulator {
public:
    Simulator(const FmGraph& g, const InputScript& script, const Limits& limits)
        : g_(g), script_(script), limits_(limits) {
        const auto& fss = g.flowsystems();
        nodes_.resize(fss.size());
        for (std::uint32_t i = 0; i < fss.size(); ++i) {
            const Flowsystem& f = fss[i];
            index_[f.id] = i;
            trace_.names.push_back(f.id);
            Node& n = nodes_[i];
            n.fs = &f;
            n.role = parse_role(attr(f, "role"));
            n.display = attr(f, "display") == "true";
            n.op = attr(f, "op");
            n.arity = attr(f, "arity") == "1" ? 1 : 2;
        }
        intra_.resize(fss.size() * kStages);
        inter_.resize(fss.size() * kStages);
        triggers_.resize(fss.size() * kStages);
        std::uint32_t arc = 0;
        for (const auto& a : g.flow_arcs()) {
            trace_.arcs.push_back(a.id);
            std::uint32_t from = index_.at(a.from.flowsystem);
            std::uint32_t to = index_.at(a.to.flowsystem);
            auto& bucket = from == to ? intra_ : inter_;
            bucket[slot_of(from, a.from.stage)].push_back({arc++, to, a.to.stage});
        }
        for (const auto& t : g.trigger_arcs()) {
            trace_.arcs.push_back(t.id);
            std::uint32_t from = index_.at(t.from.flowsystem);
            std::uint32_t scope = kNoIndex;
            if (!t.scope.empty()) scope = index_.at(t.scope);
            triggers_[slot_of(from, t.from.stage)].push_back({arc++, &t, index_.at(t.to.flowsystem), scope});
        }
    }

    Trace run() {
        const StageRef& entry = g_.entry();
        auto it = index_.find(entry.flowsystem);
        if (it == index_.end()) throw SimError(SimErrorKind::Stuck, "entry does not resolve");
        queue_.push_back(Work{false, {}, it->second, entry.stage, kNoIndex, {}});
        while (!queue_.empty() && !trace_.os_return && !halted_) {
            if (trace_.steps >= limits_.max_steps) {
                throw SimError(SimErrorKind::StepLimitExceeded,
                               "step limit of " + std::to_string(limits_.max_steps) + " exceeded");
            }
            ++trace_.steps;
            Work w = std::move(queue_.front());
            queue_.pop_front();
            if (w.is_move) {
                move(std::move(w.token));
            } else {
                activate(w);
            }
        }
        if (!trace_.os_return && !halted_) {
            throw SimError(SimErrorKind::Stuck, "no token can move and no status reached the OS");
        }
        for (const auto& n : nodes_) {
            if (n.role != Role::Memory || !n.stored || attr(*n.fs, "temp") == "true") continue;
            trace_.memory_final[attr(*n.fs, "var")] = *n.stored;
        }
        return std::move(trace_);
    }

private:
    void event(EventType type, const Token* tok, std::uint32_t fs, StageKind stage,
               std::uint32_t arc = kNoIndex, std::string value = {}, std::string detail = {}) {
        trace_.events.push_back(Event{trace_.steps, tok ? tok->id : 0, type, fs, stage, arc, std::move(value),
                                      std::move(detail)});
    }

    void fire(const OutTrigger& t, std::uint32_t from_fs) {
        event(EventType::Fire, nullptr, from_fs, t.t->from.stage, t.arc, {}, t.t->label);
        queue_.push_back(Work{false, {}, t.to_fs, t.t->to.stage, from_fs, t.t->label});
    }

    void fire_from(std::uint32_t fs, StageKind stage, std::optional<bool> outcome, std::uint32_t came_from) {
        for (const auto& t : triggers_[slot_of(fs, stage)]) {
            if (t.scope != kNoIndex && t.scope != came_from) continue;
            if (t.t->condition != TriggerCondition::Always) {
                if (!outcome || *outcome != (t.t->condition == TriggerCondition::OnTrue)) continue;
            }
            fire(t, fs);
        }
    }

    void spawn(Token tok) {
        tok.id = ++next_token_;
        event(EventType::Spawn, &tok, tok.fs, tok.stage, kNoIndex, tok.text);
        queue_.push_back(Work{true, std::move(tok)});
    }

    std::int64_t read_input() {
        if (cursor_ >= script_.values.size()) {
            throw SimError(SimErrorKind::InputExhausted,
                           "input script exhausted after " + std::to_string(script_.values.size()) + " values");
        }
        return script_.values[cursor_++];
    }

    void activate(const Work& w) {
        Node& n = nodes_[w.to_fs];
        Token tok;
        tok.fs = w.to_fs;
        tok.stage = w.to_stage;
        tok.requester = w.source;
        tok.slot = w.label;
        auto set_int = [&](std::int64_t v) {
            tok.num = v;
            tok.text = std::to_string(v);
        };
        if (w.to_stage == StageKind::Create) {
            switch (n.role) {
            case Role::Keyboard: set_int(read_input()); break;
            case Role::AluResult: set_int(w.source == kNoIndex ? 0 : nodes_[w.source].last); break;
            case Role::Constant:
            case Role::Signal:
            case Role::Literal: {
                tok.text = attr(*n.fs, "value");
                tok.num = to_int(tok.text);
                break;
            }
            case Role::User: tok.text = "keypress"; break;
            default: break;
            }
            spawn(std::move(tok));
            return;
        }
        if (w.to_stage == StageKind::Release && (n.role == Role::Memory || n.role == Role::Literal)) {
            if (n.role == Role::Literal) {
                tok.text = attr(*n.fs, "value");
                tok.num = to_int(tok.text);
            } else {
                if (!n.stored) {
                    std::string msg = "read of uninitialized '" + attr(*n.fs, "var") + "'";
                    event(EventType::Warning, nullptr, w.to_fs, w.to_stage, kNoIndex, {}, msg);
                    trace_.warnings.push_back(msg);
                }
                set_int(n.stored.value_or(0));
            }
            spawn(std::move(tok));
            return;
        }
        bool receiving = w.to_stage == StageKind::Receive || w.to_stage == StageKind::Arrive ||
                         w.to_stage == StageKind::Accept;
        if (n.role == Role::Os && receiving) {
            // Control came back without a status value.
            halted_ = true;
            return;
        }
        // Relay: an activated Transfer starts a fresh round of fetches.
        if (n.role == Role::AluOp || n.role == Role::AluCompare) n.operands.clear();
        fire_from(w.to_fs, w.to_stage, std::nullopt, kNoIndex);
    }

    void enter(Token& tok, const OutFlow& f, bool crossing) {
        if (crossing) tok.came_from = tok.fs;
        tok.outgoing = !crossing && f.to_stage == StageKind::Transfer;
        tok.fs = f.to_fs;
        tok.stage = f.to_stage;
        event(EventType::Enter, &tok, tok.fs, tok.stage, f.arc, tok.text);
        Node& n = nodes_[tok.fs];
        bool store = tok.stage == StageKind::Receive || tok.stage == StageKind::Accept;
        if (store && n.role == Role::Memory) {
            n.stored = tok.num;
            event(EventType::Store, &tok, tok.fs, tok.stage, kNoIndex, tok.text, attr(*n.fs, "var"));
        } else if (store && n.role == Role::Os) {
            trace_.os_return = tok.num;
        } else if (tok.stage == StageKind::Process && n.display) {
            trace_.screen.push_back(tok.text);
            event(EventType::Display, &tok, tok.fs, tok.stage, kNoIndex, tok.text);
        }
    }

    const OutFlow* next_flow(const Token& tok, bool& crossing) {
        std::size_t s = slot_of(tok.fs, tok.stage);
        crossing = false;
        if (tok.stage == StageKind::Transfer && tok.outgoing) {
            const auto& out = inter_[s];
            if (out.empty()) return nullptr;
            crossing = true;
            for (const auto& f : out) {
                if (f.to_fs == tok.requester) return &f;
            }
            if (out.size() == 1) return &out.front();
            throw SimError(SimErrorKind::Stuck, "token at " + to_string(StageRef{g_.flowsystems()[tok.fs].id, tok.stage}) +
                                                    " has several destinations and no requester");
        }
        const auto& intra = intra_[s];
        return intra.empty() ? nullptr : &intra.front();
    }

    void move(Token tok) {
        bool crossing = false;
        if (const OutFlow* f = next_flow(tok, crossing)) {
            enter(tok, *f, crossing);
            queue_.push_back(Work{true, std::move(tok)});
            return;
        }
        event(EventType::Rest, &tok, tok.fs, tok.stage, kNoIndex, tok.text);
        Node& n = nodes_[tok.fs];
        if (tok.stage == StageKind::Process && (n.role == Role::AluOp || n.role == Role::AluCompare)) {
            absorb(tok, n);
            return;
        }
        fire_from(tok.fs, tok.stage, std::nullopt, tok.came_from);
    }

    void absorb(const Token& tok, Node& n) {
        n.operands[tok.slot.empty() ? "lhs" : tok.slot] = tok.num;
        if (static_cast<int>(n.operands.size()) < n.arity) return;
        std::int64_t a = n.operands["lhs"];
        std::int64_t b = n.arity == 2 ? n.operands["rhs"] : 0;
        n.operands.clear();
        if (n.role == Role::AluOp) {
            std::string detail = std::to_string(a);
            if (n.arity == 2) {
                detail += " " + n.op + " " + std::to_string(b);
                n.last = wrap_arith(n.op, a, b);
            } else {
                n.last = a;
            }
            event(EventType::Compute, nullptr, tok.fs, tok.stage, kNoIndex, std::to_string(n.last), detail);
            fire_from(tok.fs, tok.stage, std::nullopt, kNoIndex);
        } else {
            bool r = relation(n.op, a, b);
            event(EventType::Compare, nullptr, tok.fs, tok.stage, kNoIndex, r ? "true" : "false",
                  std::to_string(a) + " " + n.op + " " + std::to_string(b));
            fire_from(tok.fs, tok.stage, r, kNoIndex);
        }
    }

    const FmGraph& g_;
    const InputScript& script_;
    Limits limits_;
    Trace trace_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<Node> nodes_;
    std::vector<std::vector<OutFlow>> intra_;
    std::vector<std::vector<OutFlow>> inter_;
    std::vector<std::vector<OutTrigger>> triggers_;
    std::deque<Work> queue_;
    std::size_t cursor_ = 0;
    std::uint64_t next_token_ = 0;
    bool halted_ = false;
};

}  // namespace

Trace simulate(const FmGraph& graph, const InputScript& script, const Limits& limits) {
    return Simulator(graph, script, limits).run();
}

Equivalence equivalent(const Trace& a, const Trace& b) {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) out += c == '\n' ? std::string("\\n") : std::string(1, c);
        return out + "\"";
    };
    std::size_t n = std::min(a.screen.size(), b.screen.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.screen[i] != b.screen[i]) {
            return {false, "screen[" + std::to_string(i) + "]: " + quote(a.screen[i]) + " vs " + quote(b.screen[i])};
        }
    }
    if (a.screen.size() != b.screen.size()) {
        return {false, "screen length: " + std::to_string(a.screen.size()) + " vs " + std::to_string(b.screen.size())};
    }
    for (const auto& [name, v] : a.memory_final) {
        auto it = b.memory_final.find(name);
        if (it == b.memory_final.end()) return {false, "memory '" + name + "': " + std::to_string(v) + " vs unset"};
        if (it->second != v) {
            return {false, "memory '" + name + "': " + std::to_string(v) + " vs " + std::to_string(it->second)};
        }
    }
    for (const auto& [name, v] : b.memory_final) {
        if (!a.memory_final.count(name)) return {false, "memory '" + name + "': unset vs " + std::to_string(v)};
    }
    if (a.os_return != b.os_return) {
        auto show = [](const std::optional<std::int64_t>& r) { return r ? std::to_string(*r) : std::string("none"); };
        return {false, "os_return: " + show(a.os_return) + " vs " + show(b.os_return)};
    }
    return {};
}

}  // namespace fm
