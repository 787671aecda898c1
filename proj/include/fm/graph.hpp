#pragma once

// Flowthing graph model: spheres own flowsystems, flowsystems own stages,
// flow arcs move flowthings between stages and trigger arcs carry control.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fm {

enum class StageKind : std::uint8_t {
    Create,
    Process,
    Release,
    Transfer,
    Arrive,
    Accept,
    Receive,
};

inline constexpr std::array<StageKind, 7> kAllStages = {
    StageKind::Create,  StageKind::Process, StageKind::Release, StageKind::Transfer,
    StageKind::Arrive,  StageKind::Accept,  StageKind::Receive,
};

std::string_view to_string(StageKind s) noexcept;
std::optional<StageKind> stage_from_string(std::string_view s) noexcept;

enum class FlowthingKind : std::uint8_t { DataString, DataInt, Signal, Action };

std::string_view to_string(FlowthingKind k) noexcept;
std::optional<FlowthingKind> flowthing_kind_from_string(std::string_view s) noexcept;

/// Small bitset of stages, iterated in canonical `kAllStages` order.
class StageSet {
public:
    StageSet() = default;
    StageSet(std::initializer_list<StageKind> stages) {
        for (auto s : stages) insert(s);
    }

    bool contains(StageKind s) const noexcept { return (bits_ & bit(s)) != 0; }
    void insert(StageKind s) noexcept { bits_ |= bit(s); }
    void erase(StageKind s) noexcept { bits_ &= static_cast<std::uint8_t>(~bit(s)); }
    bool empty() const noexcept { return bits_ == 0; }
    std::size_t size() const noexcept;
    std::vector<StageKind> list() const;

    friend bool operator==(StageSet, StageSet) = default;

private:
    static constexpr std::uint8_t bit(StageKind s) noexcept {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(s));
    }
    std::uint8_t bits_ = 0;
};

struct StageRef {
    std::string flowsystem;
    StageKind stage = StageKind::Create;

    friend bool operator==(const StageRef&, const StageRef&) = default;
    friend auto operator<=>(const StageRef&, const StageRef&) = default;
};

/// "flowsystem-id:Stage"
std::string to_string(const StageRef& ref);

using Attrs = std::map<std::string, std::string>;

struct Sphere {
    std::string id;
    std::string name;
    std::vector<std::string> children;
    std::vector<std::string> flowsystems;
    Attrs attrs;

    friend bool operator==(const Sphere&, const Sphere&) = default;
};

struct Flowsystem {
    std::string id;
    std::string owner;
    std::string name;
    FlowthingKind kind = FlowthingKind::DataInt;
    StageSet stages;
    Attrs attrs;

    friend bool operator==(const Flowsystem&, const Flowsystem&) = default;
};

struct FlowArc {
    std::string id;
    StageRef from;
    StageRef to;
    std::string label;

    friend bool operator==(const FlowArc&, const FlowArc&) = default;
};

/// When a trigger leaves an ALU comparison it fires only on the matching outcome.
enum class TriggerCondition : std::uint8_t { Always, OnTrue, OnFalse };

std::string_view to_string(TriggerCondition c) noexcept;
std::optional<TriggerCondition> trigger_condition_from_string(std::string_view s) noexcept;

struct TriggerArc {
    std::string id;
    StageRef from;
    StageRef to;
    std::string label;
    TriggerCondition condition = TriggerCondition::Always;
    // Non-empty: fires on a resting token only if that token entered `from`'s
    // flowsystem from this flowsystem. Used on shared memory locations.
    std::string scope;

    friend bool operator==(const TriggerArc&, const TriggerArc&) = default;
};

enum class ArcKind : std::uint8_t { Flow, Trigger };

enum class ViolationCode : std::uint8_t {
    DanglingRef,
    IllegalAdjacency,
    NonTransferCrossing,
    FlowCycle,
    DuplicateId,
    MixedReceive,
    BadEntry,
};

std::string_view to_string(ViolationCode c) noexcept;

struct Violation {
    ViolationCode code;
    std::string subject;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Raised by the eager checks of the builder and by transform passes.
class FmError : public std::runtime_error {
public:
    FmError(ViolationCode code, std::string subject, const std::string& message)
        : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

    ViolationCode code() const noexcept { return code_; }
    const std::string& subject() const noexcept { return subject_; }

private:
    ViolationCode code_;
    std::string subject_;
};

struct NodeSpec {
    enum class Type : std::uint8_t { Sphere, Flowsystem };

    Type type = Type::Sphere;
    std::string name;
    std::optional<std::string> id;  // explicit id; derived from the name otherwise
    FlowthingKind kind = FlowthingKind::DataInt;
    StageSet stages;
    Attrs attrs;

    static NodeSpec sphere(std::string name, Attrs attrs = {});
    static NodeSpec flowsystem(std::string name, FlowthingKind kind, StageSet stages,
                               Attrs attrs = {});
};

/// Natural ordering used for every id-ordered list: digit runs compare numerically,
/// so "s2" < "s10".
bool natural_less(std::string_view a, std::string_view b) noexcept;

/// Lowercased name with every run of non-alphanumerics folded to '_'.
std::string sanitize_name(std::string_view name);

/// Legal flow-arc adjacency inside one flowsystem.
bool legal_adjacency(StageKind from, StageKind to) noexcept;

class FmGraph {
public:
    // Lists are kept sorted by natural_less on id.
    const std::vector<Sphere>& spheres() const noexcept { return spheres_; }
    const std::vector<Flowsystem>& flowsystems() const noexcept { return flowsystems_; }
    const std::vector<FlowArc>& flow_arcs() const noexcept { return flow_arcs_; }
    const std::vector<TriggerArc>& trigger_arcs() const noexcept { return trigger_arcs_; }
    const std::map<std::string, Attrs>& annotations() const noexcept { return annotations_; }
    std::map<std::string, Attrs>& annotations() noexcept { return annotations_; }

    /// Id of the sphere no other sphere lists as a child; empty when there is none.
    std::string root() const;
    const StageRef& entry() const noexcept { return entry_; }
    void set_entry(StageRef entry) { entry_ = std::move(entry); }

    const Sphere* find_sphere(std::string_view id) const;
    const Flowsystem* find_flowsystem(std::string_view id) const;
    Sphere* find_sphere(std::string_view id);
    Flowsystem* find_flowsystem(std::string_view id);
    bool resolves(const StageRef& ref) const;
    std::optional<std::string> parent_of(std::string_view sphere_id) const;
    bool empty() const noexcept { return spheres_.empty(); }

    /// Inserts a sphere or flowsystem under `parent_id`. An empty parent id is
    /// accepted only for the first sphere (the root).
    std::string add_node(std::string_view parent_id, const NodeSpec& spec);
    std::string add_sphere(std::string_view parent_id, std::string name, Attrs attrs = {});
    std::string add_flowsystem(std::string_view owner_id, std::string name, FlowthingKind kind,
                               StageSet stages, Attrs attrs = {});

    /// Adds an arc after checking endpoints, adjacency, Transfer crossing and
    /// intra-flowsystem acyclicity (flow arcs only). Returns the new arc id.
    std::string add_arc(const StageRef& from, const StageRef& to, ArcKind kind,
                        std::string label = {});
    std::string add_trigger(const StageRef& from, const StageRef& to, std::string label,
                            TriggerCondition condition, std::string scope = {});

    // Unchecked primitives for loaders and rewriting passes. Sorted order is kept.
    void insert_sphere(Sphere s);
    void insert_flowsystem(Flowsystem f);
    void insert_flow_arc(FlowArc a);
    void insert_trigger_arc(TriggerArc a);
    /// Endpoint rewrites only; ids must not change.
    std::vector<FlowArc>& flow_arcs_mut() noexcept { return flow_arcs_; }
    std::vector<TriggerArc>& trigger_arcs_mut() noexcept { return trigger_arcs_; }
    void remove_flow_arc(std::string_view id);

    /// Next id of the shared arc counter ("f<n>" / "t<n>").
    std::string next_arc_id(ArcKind kind) const;

    /// Structural equality; the arc counter is not part of it.
    friend bool operator==(const FmGraph& a, const FmGraph& b);

private:
    void recount_ordinals();
    bool id_in_use(std::string_view id) const;
    std::string derive_id(std::string_view parent_id, std::string_view name) const;
    void check_flow_arc(const StageRef& from, const StageRef& to) const;
    void check_endpoints(const StageRef& from, const StageRef& to, std::string_view what) const;

    std::vector<Sphere> spheres_;
    std::vector<Flowsystem> flowsystems_;
    std::vector<FlowArc> flow_arcs_;
    std::vector<TriggerArc> trigger_arcs_;
    StageRef entry_;
    std::map<std::string, Attrs> annotations_;
    std::uint64_t max_ordinal_ = 0;
};

// Free-function surface.
std::string add_node(FmGraph& graph, std::string_view parent_id, const NodeSpec& spec);
std::string add_arc(FmGraph& graph, const StageRef& from, const StageRef& to, ArcKind kind);

/// Every broken structural invariant, ordered by subject id then code. Total.
std::vector<Violation> validate(const FmGraph& graph);

/// Numeric suffix of an arc id ("t12" -> 12); the shared creation counter.
std::uint64_t arc_ordinal(std::string_view arc_id) noexcept;

}  // namespace fm
