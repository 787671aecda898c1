#include "fm/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace fm {

std::string_view to_string(StageKind s) noexcept {
    switch (s) {
    case StageKind::Create: return "Create";
    case StageKind::Process: return "Process";
    case StageKind::Release: return "Release";
    case StageKind::Transfer: return "Transfer";
    case StageKind::Arrive: return "Arrive";
    case StageKind::Accept: return "Accept";
    case StageKind::Receive: return "Receive";
    }
    return "?";
}

std::optional<StageKind> stage_from_string(std::string_view s) noexcept {
    for (auto k : kAllStages) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

std::string_view to_string(FlowthingKind k) noexcept {
    switch (k) {
    case FlowthingKind::DataString: return "DataString";
    case FlowthingKind::DataInt: return "DataInt";
    case FlowthingKind::Signal: return "Signal";
    case FlowthingKind::Action: return "Action";
    }
    return "?";
}

std::optional<FlowthingKind> flowthing_kind_from_string(std::string_view s) noexcept {
    for (auto k : {FlowthingKind::DataString, FlowthingKind::DataInt, FlowthingKind::Signal,
                   FlowthingKind::Action}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

std::string_view to_string(TriggerCondition c) noexcept {
    switch (c) {
    case TriggerCondition::Always: return "always";
    case TriggerCondition::OnTrue: return "true";
    case TriggerCondition::OnFalse: return "false";
    }
    return "?";
}

std::optional<TriggerCondition> trigger_condition_from_string(std::string_view s) noexcept {
    for (auto c : {TriggerCondition::Always, TriggerCondition::OnTrue, TriggerCondition::OnFalse}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

std::string_view to_string(ViolationCode c) noexcept {
    switch (c) {
    case ViolationCode::DanglingRef: return "DanglingRef";
    case ViolationCode::IllegalAdjacency: return "IllegalAdjacency";
    case ViolationCode::NonTransferCrossing: return "NonTransferCrossing";
    case ViolationCode::FlowCycle: return "FlowCycle";
    case ViolationCode::DuplicateId: return "DuplicateId";
    case ViolationCode::MixedReceive: return "MixedReceive";
    case ViolationCode::BadEntry: return "BadEntry";
    }
    return "?";
}

std::size_t StageSet::size() const noexcept {
    std::size_t n = 0;
    for (auto s : kAllStages) n += contains(s) ? 1 : 0;
    return n;
}

std::vector<StageKind> StageSet::list() const {
    std::vector<StageKind> out;
    for (auto s : kAllStages) {
        if (contains(s)) out.push_back(s);
    }
    return out;
}

std::string to_string(const StageRef& ref) {
    std::string out = ref.flowsystem;
    out += ':';
    out += to_string(ref.stage);
    return out;
}

NodeSpec NodeSpec::sphere(std::string name, Attrs attrs) {
    NodeSpec spec;
    spec.type = Type::Sphere;
    spec.name = std::move(name);
    spec.attrs = std::move(attrs);
    return spec;
}

NodeSpec NodeSpec::flowsystem(std::string name, FlowthingKind kind, StageSet stages, Attrs attrs) {
    NodeSpec spec;
    spec.type = Type::Flowsystem;
    spec.name = std::move(name);
    spec.kind = kind;
    spec.stages = stages;
    spec.attrs = std::move(attrs);
    return spec;
}

bool natural_less(std::string_view a, std::string_view b) noexcept {
    std::size_t i = 0;
    std::size_t j = 0;
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    while (i < a.size() && j < b.size()) {
        if (is_digit(a[i]) && is_digit(b[j])) {
            std::size_t ie = i;
            std::size_t je = j;
            while (ie < a.size() && is_digit(a[ie])) ++ie;
            while (je < b.size() && is_digit(b[je])) ++je;
            // compare ignoring leading zeros: longer run of significant digits wins
            std::size_t is = i;
            std::size_t js = j;
            while (is + 1 < ie && a[is] == '0') ++is;
            while (js + 1 < je && b[js] == '0') ++js;
            if (ie - is != je - js) return (ie - is) < (je - js);
            auto da = a.substr(is, ie - is);
            auto db = b.substr(js, je - js);
            if (da != db) return da < db;
            if (ie - i != je - j) return (ie - i) < (je - j);
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
            ++i;
            ++j;
        }
    }
    return (a.size() - i) < (b.size() - j);
}

std::string sanitize_name(std::string_view name) {
    std::string out;
    bool pending_sep = false;
    for (char c : name) {
        auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            if (pending_sep && !out.empty()) out += '_';
            pending_sep = false;
            out += static_cast<char>(std::tolower(uc));
        } else {
            pending_sep = true;
        }
    }
    if (out.empty()) out = "n";
    return out;
}

bool legal_adjacency(StageKind from, StageKind to) noexcept {
    using S = StageKind;
    switch (from) {
    case S::Create: return to == S::Process || to == S::Release;
    case S::Arrive: return to == S::Accept || to == S::Release;  // Release: rejection
    case S::Accept: return to == S::Process || to == S::Release;
    case S::Receive: return to == S::Process || to == S::Release;
    case S::Process: return to == S::Release;
    case S::Release: return to == S::Transfer;
    case S::Transfer: return to == S::Arrive || to == S::Receive;
    }
    return false;
}

std::uint64_t arc_ordinal(std::string_view arc_id) noexcept {
    std::size_t i = arc_id.size();
    while (i > 0 && arc_id[i - 1] >= '0' && arc_id[i - 1] <= '9') --i;
    std::uint64_t value = 0;
    std::from_chars(arc_id.data() + i, arc_id.data() + arc_id.size(), value);
    return value;
}

namespace {

template <typename T>
auto lower_by_id(std::vector<T>& v, std::string_view id) {
    return std::lower_bound(v.begin(), v.end(), id,
                            [](const T& x, std::string_view key) { return natural_less(x.id, key); });
}

template <typename T>
auto lower_by_id(const std::vector<T>& v, std::string_view id) {
    return std::lower_bound(v.begin(), v.end(), id,
                            [](const T& x, std::string_view key) { return natural_less(x.id, key); });
}

template <typename T>
void insert_sorted(std::vector<T>& v, T item) {
    auto it = std::upper_bound(v.begin(), v.end(), item,
                               [](const T& a, const T& b) { return natural_less(a.id, b.id); });
    v.insert(it, std::move(item));
}

template <typename V>
auto* find_in(V& v, std::string_view id) {
    auto it = lower_by_id(v, id);
    return (it != v.end() && it->id == id) ? &*it : nullptr;
}

}  // namespace

std::string FmGraph::root() const {
    std::set<std::string, std::less<>> listed;
    for (const auto& s : spheres_) {
        for (const auto& c : s.children) listed.insert(c);
    }
    for (const auto& s : spheres_) {
        if (!listed.contains(s.id)) return s.id;
    }
    return {};
}

const Sphere* FmGraph::find_sphere(std::string_view id) const { return find_in(spheres_, id); }
const Flowsystem* FmGraph::find_flowsystem(std::string_view id) const {
    return find_in(flowsystems_, id);
}
Sphere* FmGraph::find_sphere(std::string_view id) { return find_in(spheres_, id); }
Flowsystem* FmGraph::find_flowsystem(std::string_view id) { return find_in(flowsystems_, id); }

bool FmGraph::resolves(const StageRef& ref) const {
    const auto* fs = find_flowsystem(ref.flowsystem);
    return fs != nullptr && fs->stages.contains(ref.stage);
}

std::optional<std::string> FmGraph::parent_of(std::string_view sphere_id) const {
    for (const auto& s : spheres_) {
        if (std::find(s.children.begin(), s.children.end(), sphere_id) != s.children.end()) {
            return s.id;
        }
    }
    return std::nullopt;
}

bool FmGraph::id_in_use(std::string_view id) const {
    auto arc_has = [id](const auto& arcs) {
        return std::any_of(arcs.begin(), arcs.end(), [id](const auto& a) { return a.id == id; });
    };
    return find_sphere(id) != nullptr || find_flowsystem(id) != nullptr || arc_has(flow_arcs_) ||
           arc_has(trigger_arcs_);
}

std::string FmGraph::derive_id(std::string_view parent_id, std::string_view name) const {
    std::string base = parent_id.empty() ? sanitize_name(name)
                                         : std::string(parent_id) + "." + sanitize_name(name);
    if (!id_in_use(base)) return base;
    for (int n = 2;; ++n) {
        std::string candidate = base + "_" + std::to_string(n);
        if (!id_in_use(candidate)) return candidate;
    }
}

std::string FmGraph::add_node(std::string_view parent_id, const NodeSpec& spec) {
    if (spec.id && id_in_use(*spec.id)) {
        throw FmError(ViolationCode::DuplicateId, *spec.id, "id '" + *spec.id + "' is already in use");
    }
    Sphere* parent = parent_id.empty() ? nullptr : find_sphere(parent_id);
    if (parent_id.empty()) {
        if (spec.type != NodeSpec::Type::Sphere || !spheres_.empty()) {
            throw FmError(ViolationCode::DanglingRef, "",
                          "only the root sphere of an empty graph may omit its parent");
        }
    } else if (parent == nullptr) {
        throw FmError(ViolationCode::DanglingRef, std::string(parent_id),
                      "parent sphere '" + std::string(parent_id) + "' does not exist");
    }
    std::string id = spec.id ? *spec.id : derive_id(parent_id, spec.name);
    std::string parent_key(parent_id);

    if (spec.type == NodeSpec::Type::Sphere) {
        Sphere s;
        s.id = id;
        s.name = spec.name;
        s.attrs = spec.attrs;
        if (parent != nullptr) parent->children.push_back(id);
        insert_sphere(std::move(s));
    } else {
        if (spec.stages.empty()) {
            throw FmError(ViolationCode::DanglingRef, id, "flowsystem '" + id + "' has no stages");
        }
        bool receive = spec.stages.contains(StageKind::Receive);
        bool arrive = spec.stages.contains(StageKind::Arrive);
        bool accept = spec.stages.contains(StageKind::Accept);
        if ((receive && (arrive || accept)) || (arrive != accept)) {
            throw FmError(ViolationCode::MixedReceive, id,
                          "flowsystem '" + id + "' mixes Receive with Arrive/Accept");
        }
        Flowsystem f;
        f.id = id;
        f.owner = parent_key;
        f.name = spec.name;
        f.kind = spec.kind;
        f.stages = spec.stages;
        f.attrs = spec.attrs;
        parent->flowsystems.push_back(id);
        insert_flowsystem(std::move(f));
    }
    return id;
}

std::string FmGraph::add_sphere(std::string_view parent_id, std::string name, Attrs attrs) {
    return add_node(parent_id, NodeSpec::sphere(std::move(name), std::move(attrs)));
}

std::string FmGraph::add_flowsystem(std::string_view owner_id, std::string name, FlowthingKind kind,
                                    StageSet stages, Attrs attrs) {
    return add_node(owner_id, NodeSpec::flowsystem(std::move(name), kind, stages, std::move(attrs)));
}

void FmGraph::check_endpoints(const StageRef& from, const StageRef& to, std::string_view what) const {
    for (const auto* ref : {&from, &to}) {
        if (!resolves(*ref)) {
            throw FmError(ViolationCode::DanglingRef, to_string(*ref),
                          std::string(what) + " endpoint '" + to_string(*ref) + "' does not resolve");
        }
    }
}

namespace {

// Transfer is split into an inbound port (source of intra arcs) and an outbound
// port (target of intra arcs); stage ordinals 0..6 plus 7 for the outbound port.
constexpr int kTransferOut = 7;

int cycle_node(StageKind s, bool as_target) {
    if (s == StageKind::Transfer && as_target) return kTransferOut;
    return static_cast<int>(s);
}

bool has_cycle(const std::vector<std::pair<int, int>>& edges) {
    std::array<std::vector<int>, 8> adj;
    for (auto [a, b] : edges) adj[static_cast<std::size_t>(a)].push_back(b);
    std::array<int, 8> state{};  // 0 new, 1 on stack, 2 done
    auto visit = [&](auto&& self, int n) -> bool {
        state[static_cast<std::size_t>(n)] = 1;
        for (int m : adj[static_cast<std::size_t>(n)]) {
            if (state[static_cast<std::size_t>(m)] == 1) return true;
            if (state[static_cast<std::size_t>(m)] == 0 && self(self, m)) return true;
        }
        state[static_cast<std::size_t>(n)] = 2;
        return false;
    };
    for (int n = 0; n < 8; ++n) {
        if (state[static_cast<std::size_t>(n)] == 0 && visit(visit, n)) return true;
    }
    return false;
}

}  // namespace

bool intra_flow_cycle(const std::vector<FlowArc>& arcs, std::string_view flowsystem);

bool intra_flow_cycle(const std::vector<FlowArc>& arcs, std::string_view flowsystem) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& a : arcs) {
        if (a.from.flowsystem == flowsystem && a.to.flowsystem == flowsystem) {
            edges.emplace_back(cycle_node(a.from.stage, false), cycle_node(a.to.stage, true));
        }
    }
    return has_cycle(edges);
}

void FmGraph::check_flow_arc(const StageRef& from, const StageRef& to) const {
    check_endpoints(from, to, "flow arc");
    if (from.flowsystem != to.flowsystem) {
        if (from.stage != StageKind::Transfer || to.stage != StageKind::Transfer) {
            throw FmError(ViolationCode::NonTransferCrossing, to_string(from),
                          "flow between flowsystems must go Transfer -> Transfer, got " +
                              to_string(from) + " -> " + to_string(to));
        }
        return;
    }
    if (!legal_adjacency(from.stage, to.stage)) {
        throw FmError(ViolationCode::IllegalAdjacency, to_string(from),
                      "illegal stage adjacency " + to_string(from) + " -> " + to_string(to));
    }
    std::vector<FlowArc> trial;
    for (const auto& a : flow_arcs_) {
        if (a.from.flowsystem == from.flowsystem && a.to.flowsystem == from.flowsystem) trial.push_back(a);
    }
    trial.push_back(FlowArc{"", from, to, ""});
    if (intra_flow_cycle(trial, from.flowsystem)) {
        throw FmError(ViolationCode::FlowCycle, from.flowsystem,
                      "flow arc " + to_string(from) + " -> " + to_string(to) + " closes a cycle");
    }
}

std::string FmGraph::next_arc_id(ArcKind kind) const {
    return (kind == ArcKind::Flow ? "f" : "t") + std::to_string(max_ordinal_ + 1);
}

void FmGraph::recount_ordinals() {
    max_ordinal_ = 0;
    for (const auto& a : flow_arcs_) max_ordinal_ = std::max(max_ordinal_, arc_ordinal(a.id));
    for (const auto& a : trigger_arcs_) max_ordinal_ = std::max(max_ordinal_, arc_ordinal(a.id));
}

std::string FmGraph::add_arc(const StageRef& from, const StageRef& to, ArcKind kind, std::string label) {
    if (kind == ArcKind::Trigger) {
        return add_trigger(from, to, std::move(label), TriggerCondition::Always);
    }
    check_flow_arc(from, to);
    FlowArc arc{next_arc_id(ArcKind::Flow), from, to, std::move(label)};
    std::string id = arc.id;
    insert_flow_arc(std::move(arc));
    return id;
}

std::string FmGraph::add_trigger(const StageRef& from, const StageRef& to, std::string label,
                                 TriggerCondition condition, std::string scope) {
    check_endpoints(from, to, "trigger arc");
    if (!scope.empty() && find_flowsystem(scope) == nullptr) {
        throw FmError(ViolationCode::DanglingRef, scope, "trigger scope '" + scope + "' does not exist");
    }
    TriggerArc arc{next_arc_id(ArcKind::Trigger), from, to, std::move(label), condition, std::move(scope)};
    std::string id = arc.id;
    insert_trigger_arc(std::move(arc));
    return id;
}

void FmGraph::insert_sphere(Sphere s) { insert_sorted(spheres_, std::move(s)); }
void FmGraph::insert_flowsystem(Flowsystem f) { insert_sorted(flowsystems_, std::move(f)); }
void FmGraph::insert_flow_arc(FlowArc a) {
    max_ordinal_ = std::max(max_ordinal_, arc_ordinal(a.id));
    insert_sorted(flow_arcs_, std::move(a));
}

void FmGraph::insert_trigger_arc(TriggerArc a) {
    max_ordinal_ = std::max(max_ordinal_, arc_ordinal(a.id));
    insert_sorted(trigger_arcs_, std::move(a));
}

void FmGraph::remove_flow_arc(std::string_view id) {
    std::erase_if(flow_arcs_, [id](const FlowArc& a) { return a.id == id; });
    recount_ordinals();
}

bool operator==(const FmGraph& a, const FmGraph& b) {
    return a.spheres_ == b.spheres_ && a.flowsystems_ == b.flowsystems_ &&
           a.flow_arcs_ == b.flow_arcs_ && a.trigger_arcs_ == b.trigger_arcs_ &&
           a.entry_ == b.entry_ && a.annotations_ == b.annotations_;
}

std::string add_node(FmGraph& graph, std::string_view parent_id, const NodeSpec& spec) {
    return graph.add_node(parent_id, spec);
}

std::string add_arc(FmGraph& graph, const StageRef& from, const StageRef& to, ArcKind kind) {
    return graph.add_arc(from, to, kind);
}

}  // namespace fm
