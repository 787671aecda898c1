#pragma once

// Token simulation of compiled graphs and the tree-walking reference
// interpreter used as its behavioural oracle.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fm/ast.hpp"
#include "fm/graph.hpp"

namespace fm {

struct InputScript {
    std::vector<std::int64_t> values;

    /// Whitespace-separated integers. Throws std::invalid_argument on junk.
    static InputScript parse(std::string_view text);
};

struct Limits {
    std::uint64_t max_steps = 100000;
};

enum class SimErrorKind { InputExhausted, StepLimitExceeded, Stuck, DivisionByZero };

const char* to_string(SimErrorKind k) noexcept;

class SimError : public std::runtime_error {
public:
    SimError(SimErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    SimErrorKind kind() const noexcept { return kind_; }

private:
    SimErrorKind kind_;
};

enum class EventType : std::uint8_t {
    Spawn,    // token appears at a stage
    Enter,    // token moves along a flow arc
    Rest,     // token has no further move and is retired
    Fire,     // trigger arc fires
    Compute,  // ALU operation evaluated
    Compare,  // ALU comparison evaluated
    Store,    // memory location written
    Display,  // screen shows a value
    Warning,
};

const char* to_string(EventType t) noexcept;

inline constexpr std::uint32_t kNoIndex = 0xffffffffu;

struct Event {
    std::uint64_t step = 0;
    std::uint64_t token = 0;  // 0 for events not tied to a token
    EventType type = EventType::Spawn;
    std::uint32_t flowsystem = kNoIndex;  // index into Trace::names
    StageKind stage = StageKind::Create;
    std::uint32_t arc = kNoIndex;  // index into Trace::arcs
    std::string value;
    std::string detail;

    friend bool operator==(const Event&, const Event&) = default;
};

struct Trace {
    std::vector<std::string> screen;  // one item per << operand
    std::map<std::string, std::int64_t> memory_final;
    std::optional<std::int64_t> os_return;
    std::vector<Event> events;
    std::vector<std::string> names;  // flowsystem ids referenced by events
    std::vector<std::string> arcs;   // arc ids referenced by events
    std::vector<std::string> warnings;
    std::uint64_t steps = 0;

    std::string screen_text() const;

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// Runs a compiled graph. Throws SimError.
Trace simulate(const FmGraph& graph, const InputScript& script, const Limits& limits = {});

/// Reference semantics on the AST. `limits.max_steps` bounds executed statements.
Trace interpret(const ast::Program& program, const InputScript& script, const Limits& limits = {});

struct Equivalence {
    bool equal = true;
    std::string diff;  // first divergence, empty when equal
};

/// Compares observables only: screen, memory_final and os_return.
Equivalence equivalent(const Trace& a, const Trace& b);

/// Stage exclusivity and no-back-flow over the event log. Returns problems found.
std::vector<std::string> check_event_log(const FmGraph& graph, const Trace& trace);

}  // namespace fm
