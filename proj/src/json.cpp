#include "json.hpp"

#include "fm/emit.hpp"

namespace fm {

namespace {

using json = nlohmann::ordered_json;

json ref_json(const StageRef& r) { return json{{"flowsystem", r.flowsystem}, {"stage", to_string(r.stage)}}; }

json attrs_json(const Attrs& a) {
    json out = json::object();
    for (const auto& [k, v] : a) out[k] = v;
    return out;
}

// Shape checks against a JSON pointer path.
class Reader {
public:
    explicit Reader(const json& root) : root_(root) {}

    FmGraph load() {
        const json& doc = root_;
        if (!doc.is_object()) fail("", "document must be an object");
        const json& version = field(doc, "", "version");
        if (!version.is_string() || version.get<std::string>() != "1") fail("/version", "expected \"1\"");

        FmGraph g;
        const json& spheres = array(doc, "", "spheres");
        for (std::size_t i = 0; i < spheres.size(); ++i) {
            std::string p = "/spheres/" + std::to_string(i);
            const json& s = object(spheres[i], p);
            Sphere sp;
            sp.id = string(s, p, "id");
            sp.name = string(s, p, "name");
            sp.children = strings(s, p, "children");
            sp.flowsystems = strings(s, p, "flowsystems");
            sp.attrs = attrs(s, p);
            g.insert_sphere(std::move(sp));
        }
        const json& fss = array(doc, "", "flowsystems");
        for (std::size_t i = 0; i < fss.size(); ++i) {
            std::string p = "/flowsystems/" + std::to_string(i);
            const json& f = object(fss[i], p);
            Flowsystem fs;
            fs.id = string(f, p, "id");
            fs.owner = string(f, p, "owner");
            fs.name = string(f, p, "name");
            std::string kind = string(f, p, "kind");
            auto k = flowthing_kind_from_string(kind);
            if (!k) fail(p + "/kind", "unknown flowthing kind '" + kind + "'");
            fs.kind = *k;
            const json& stages = array(f, p, "stages");
            for (std::size_t j = 0; j < stages.size(); ++j) {
                fs.stages.insert(stage(stages[j], p + "/stages/" + std::to_string(j)));
            }
            fs.attrs = attrs(f, p);
            stages_[fs.id] = fs.stages;
            g.insert_flowsystem(std::move(fs));
        }
        const json& flows = array(doc, "", "flow_arcs");
        for (std::size_t i = 0; i < flows.size(); ++i) {
            std::string p = "/flow_arcs/" + std::to_string(i);
            const json& a = object(flows[i], p);
            g.insert_flow_arc(FlowArc{string(a, p, "id"), ref(a, p, "from"), ref(a, p, "to"), string(a, p, "label")});
        }
        const json& triggers = array(doc, "", "trigger_arcs");
        for (std::size_t i = 0; i < triggers.size(); ++i) {
            std::string p = "/trigger_arcs/" + std::to_string(i);
            const json& t = object(triggers[i], p);
            TriggerArc arc{string(t, p, "id"), ref(t, p, "from"), ref(t, p, "to"), string(t, p, "label")};
            std::string cond = string(t, p, "condition");
            auto c = trigger_condition_from_string(cond);
            if (!c) fail(p + "/condition", "unknown condition '" + cond + "'");
            arc.condition = *c;
            arc.scope = string(t, p, "scope");
            g.insert_trigger_arc(std::move(arc));
        }
        g.set_entry(ref(doc, "", "entry"));
        const json& notes = field(doc, "", "annotations");
        if (!notes.is_object()) fail("/annotations", "expected an object");
        for (const auto& [id, a] : notes.items()) {
            std::string p = "/annotations/" + escape(id);
            if (!a.is_object()) fail(p, "expected an object");
            Attrs out;
            for (const auto& [k, v] : a.items()) {
                if (!v.is_string()) fail(p + "/" + escape(k), "expected a string");
                out[k] = v.get<std::string>();
            }
            g.annotations()[id] = std::move(out);
        }
        return g;
    }

private:
    [[noreturn]] static void fail(const std::string& path, const std::string& reason) {
        throw SchemaError(path.empty() ? "/" : path, reason);
    }

    static std::string escape(const std::string& key) {
        std::string out;
        for (char c : key) {
            if (c == '~') out += "~0";
            else if (c == '/') out += "~1";
            else out += c;
        }
        return out;
    }

    static const json& field(const json& obj, const std::string& path, const char* key) {
        auto it = obj.find(key);
        if (it == obj.end()) fail(path + "/" + key, "missing field");
        return *it;
    }

    static const json& object(const json& v, const std::string& path) {
        if (!v.is_object()) fail(path, "expected an object");
        return v;
    }

    static const json& array(const json& obj, const std::string& path, const char* key) {
        const json& v = field(obj, path, key);
        if (!v.is_array()) fail(path + "/" + key, "expected an array");
        return v;
    }

    static std::string string(const json& obj, const std::string& path, const char* key) {
        const json& v = field(obj, path, key);
        if (!v.is_string()) fail(path + "/" + key, "expected a string");
        return v.get<std::string>();
    }

    static std::vector<std::string> strings(const json& obj, const std::string& path, const char* key) {
        const json& v = array(obj, path, key);
        std::vector<std::string> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_string()) fail(path + "/" + key + "/" + std::to_string(i), "expected a string");
            out.push_back(v[i].get<std::string>());
        }
        return out;
    }

    static Attrs attrs(const json& obj, const std::string& path) {
        const json& v = field(obj, path, "attrs");
        if (!v.is_object()) fail(path + "/attrs", "expected an object");
        Attrs out;
        for (const auto& [k, x] : v.items()) {
            if (!x.is_string()) fail(path + "/attrs/" + escape(k), "expected a string");
            out[k] = x.get<std::string>();
        }
        return out;
    }

    static StageKind stage(const json& v, const std::string& path) {
        if (!v.is_string()) fail(path, "expected a stage name");
        auto s = stage_from_string(v.get<std::string>());
        if (!s) fail(path, "unknown stage '" + v.get<std::string>() + "'");
        return *s;
    }

    StageRef ref(const json& obj, const std::string& path, const char* key) {
        std::string p = path + "/" + key;
        const json& v = object(field(obj, path, key), p);
        StageRef r{string(v, p, "flowsystem"), stage(field(v, p, "stage"), p + "/stage")};
        // A known flowsystem must own the stage; unknown ids are left for validate.
        auto it = stages_.find(r.flowsystem);
        if (it != stages_.end() && !it->second.contains(r.stage)) {
            fail(p + "/stage", "flowsystem '" + r.flowsystem + "' has no " + std::string(to_string(r.stage)) + " stage");
        }
        return r;
    }

    const json& root_;
    std::map<std::string, StageSet> stages_;
};

}  // namespace

std::string to_json(const FmGraph& g) {
    json doc;
    doc["version"] = "1";
    json spheres = json::array();
    for (const auto& s : g.spheres()) {
        spheres.push_back(json{{"id", s.id},
                               {"name", s.name},
                               {"children", s.children},
                               {"flowsystems", s.flowsystems},
                               {"attrs", attrs_json(s.attrs)}});
    }
    doc["spheres"] = std::move(spheres);
    json fss = json::array();
    for (const auto& f : g.flowsystems()) {
        json stages = json::array();
        for (auto st : f.stages.list()) stages.push_back(to_string(st));
        fss.push_back(json{{"id", f.id},
                           {"owner", f.owner},
                           {"name", f.name},
                           {"kind", to_string(f.kind)},
                           {"stages", std::move(stages)},
                           {"attrs", attrs_json(f.attrs)}});
    }
    doc["flowsystems"] = std::move(fss);
    json flows = json::array();
    for (const auto& a : g.flow_arcs()) {
        flows.push_back(json{{"id", a.id}, {"from", ref_json(a.from)}, {"to", ref_json(a.to)}, {"label", a.label}});
    }
    doc["flow_arcs"] = std::move(flows);
    json triggers = json::array();
    for (const auto& t : g.trigger_arcs()) {
        triggers.push_back(json{{"id", t.id},
                                {"from", ref_json(t.from)},
                                {"to", ref_json(t.to)},
                                {"label", t.label},
                                {"condition", to_string(t.condition)},
                                {"scope", t.scope}});
    }
    doc["trigger_arcs"] = std::move(triggers);
    doc["entry"] = ref_json(g.entry());
    json notes = json::object();
    for (const auto& [id, a] : g.annotations()) notes[id] = attrs_json(a);
    doc["annotations"] = std::move(notes);
    return doc.dump(2) + "\n";
}

FmGraph from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("/", std::string("not valid JSON: ") + e.what());
    }
    return Reader(doc).load();
}

}  // namespace fm
