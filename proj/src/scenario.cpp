#include "aodv/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace aodv {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ScenarioError(path + ": " + what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(path, "unknown key \"" + key + "\"");
    }
}

std::uint64_t unsigned_field(const json& v, const std::string& path) {
    if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

bool bool_field(const json& v, const std::string& path) {
    if (!v.is_boolean()) fail(path, "expected true or false");
    return v.get<bool>();
}

class Names {
public:
    explicit Names(const NodeNames& names) {
        for (std::size_t i = 0; i < names.size(); ++i) ids_[names[i]] = NodeId{static_cast<std::uint32_t>(i)};
    }
    NodeId operator()(const json& v, const std::string& path) const {
        if (!v.is_string()) fail(path, "expected a node name");
        auto it = ids_.find(v.get<std::string>());
        if (it == ids_.end()) fail(path, "unknown node \"" + v.get<std::string>() + "\"");
        return it->second;
    }

private:
    std::map<std::string, NodeId> ids_;
};

Link link_field(NodeId x, NodeId y, const std::string& path) {
    if (x == y) fail(path, "self-link");
    return make_link(x, y);
}

ScenarioEvent parse_event(const json& e, const std::string& path, const Names& id) {
    only_keys(e, path, {"at", "floating", "kind", "node", "dest", "a", "b"});
    ScenarioEvent ev;
    if (!e.contains("kind") || !e["kind"].is_string()) fail(path + ".kind", "missing event kind");
    std::string kind = e["kind"].get<std::string>();
    if (kind == "inject") {
        ev.kind = ScenarioEvent::Kind::inject;
        if (e.contains("a") || e.contains("b")) fail(path, "inject takes \"node\" and \"dest\"");
        if (!e.contains("node") || !e.contains("dest")) fail(path, "inject needs \"node\" and \"dest\"");
        ev.x = id(e["node"], path + ".node");
        ev.y = id(e["dest"], path + ".dest");
    } else if (kind == "link-up" || kind == "link-down") {
        ev.kind = kind == "link-up" ? ScenarioEvent::Kind::link_up : ScenarioEvent::Kind::link_down;
        if (e.contains("node") || e.contains("dest")) fail(path, kind + " takes \"a\" and \"b\"");
        if (!e.contains("a") || !e.contains("b")) fail(path, kind + " needs \"a\" and \"b\"");
        Link l = link_field(id(e["a"], path + ".a"), id(e["b"], path + ".b"), path);
        ev.x = l.a;
        ev.y = l.b;
    } else {
        fail(path + ".kind", "unknown event kind \"" + kind + "\"");
    }
    if (e.contains("floating")) ev.floating = bool_field(e["floating"], path + ".floating");
    if (e.contains("at")) ev.at = unsigned_field(e["at"], path + ".at");
    if (ev.floating == ev.at.has_value()) fail(path, "give exactly one of \"at\" or \"floating\": true");
    return ev;
}

Scheduler parse_scheduler(const json& s) {
    Scheduler out;
    if (s.is_string()) {
        std::string k = s.get<std::string>();
        if (k == "exhaustive") return out;
        if (k == "demo") {
            out.kind = Scheduler::Kind::demo;
            return out;
        }
        fail("scheduler", "unknown scheduler \"" + k + "\"");
    }
    only_keys(s, "scheduler", {"exhaustive", "demo", "seed"});
    if (s.size() != 1) fail("scheduler", "expected exactly one of exhaustive, demo or seed");
    if (s.contains("seed")) {
        out.kind = Scheduler::Kind::seeded;
        out.seed = unsigned_field(s["seed"], "scheduler.seed");
    } else if (s.contains("demo")) {
        if (!bool_field(s["demo"], "scheduler.demo")) fail("scheduler.demo", "must be true");
        out.kind = Scheduler::Kind::demo;
    } else if (!bool_field(s["exhaustive"], "scheduler.exhaustive")) {
        fail("scheduler.exhaustive", "must be true");
    }
    return out;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) +
                            ": malformed JSON (" + e.what() + ")");
    }
    only_keys(doc, "scenario", {"nodes", "links", "events", "bounds", "scheduler", "variant"});

    Scenario sc;
    if (!doc.contains("nodes") || !doc["nodes"].is_array() || doc["nodes"].empty())
        fail("nodes", "expected a non-empty array of node names");
    for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
        const json& n = doc["nodes"][i];
        std::string path = "nodes[" + std::to_string(i) + "]";
        if (!n.is_string() || n.get<std::string>().empty()) fail(path, "expected a non-empty name");
        if (std::find(sc.nodes.begin(), sc.nodes.end(), n.get<std::string>()) != sc.nodes.end())
            fail(path, "duplicate node \"" + n.get<std::string>() + "\"");
        sc.nodes.push_back(n.get<std::string>());
    }
    Names id(sc.nodes);

    if (doc.contains("links")) {
        if (!doc["links"].is_array()) fail("links", "expected an array of [a, b] pairs");
        for (std::size_t i = 0; i < doc["links"].size(); ++i) {
            const json& l = doc["links"][i];
            std::string path = "links[" + std::to_string(i) + "]";
            if (!l.is_array() || l.size() != 2) fail(path, "expected [a, b]");
            Link link = link_field(id(l[0], path + "[0]"), id(l[1], path + "[1]"), path);
            if (std::find(sc.links.begin(), sc.links.end(), link) == sc.links.end()) sc.links.push_back(link);
        }
    }

    if (doc.contains("events")) {
        if (!doc["events"].is_array()) fail("events", "expected an array");
        for (std::size_t i = 0; i < doc["events"].size(); ++i)
            sc.events.push_back(parse_event(doc["events"][i], "events[" + std::to_string(i) + "]", id));
    }

    if (doc.contains("bounds")) {
        const json& b = doc["bounds"];
        only_keys(b, "bounds", {"max_steps", "max_states"});
        if (b.contains("max_steps")) sc.bounds.max_steps = unsigned_field(b["max_steps"], "bounds.max_steps");
        if (b.contains("max_states"))
            sc.bounds.max_states = static_cast<std::size_t>(unsigned_field(b["max_states"], "bounds.max_states"));
    }

    if (doc.contains("scheduler")) sc.scheduler = parse_scheduler(doc["scheduler"]);

    if (doc.contains("variant")) {
        const json& v = doc["variant"];
        only_keys(v, "variant", {"precursor_fix", "rrep_reverse_precursor", "mutation"});
        if (v.contains("precursor_fix")) sc.variant.precursor_fix = bool_field(v["precursor_fix"], "variant.precursor_fix");
        if (v.contains("rrep_reverse_precursor"))
            sc.variant.rrep_reverse_precursor = bool_field(v["rrep_reverse_precursor"], "variant.rrep_reverse_precursor");
        if (v.contains("mutation") && !v["mutation"].is_null()) {
            if (!v["mutation"].is_string()) fail("variant.mutation", "expected a mutation identifier or null");
            try {
                sc.variant = apply_mutation(sc.variant, v["mutation"].get<std::string>());
            } catch (const std::invalid_argument& e) {
                fail("variant.mutation", e.what());
            }
        }
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path + ": " + e.what());
    }
}

}  // namespace aodv
