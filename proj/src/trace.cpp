#include "aodv/trace.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "aodv/render.hpp"

namespace aodv {

namespace {

using ojson = nlohmann::ordered_json;

std::string_view kind_name(TraceRecord::Kind k) {
    switch (k) {
        case TraceRecord::Kind::step: return "step";
        case TraceRecord::Kind::event: return "event";
        case TraceRecord::Kind::emission: return "emission";
        case TraceRecord::Kind::delivery: return "delivery";
        case TraceRecord::Kind::violation: return "violation";
    }
    return "step";
}

std::string_view cast_name(Cast c) {
    switch (c) {
        case Cast::broadcast: return "broadcast";
        case Cast::groupcast: return "groupcast";
        case Cast::unicast: return "unicast";
    }
    return "broadcast";
}

std::string_view choice_name(const StepChoice& c) {
    if (std::holds_alternative<HandleMessage>(c)) return "HandleMessage";
    if (std::holds_alternative<SendQueuedPacket>(c)) return "SendQueuedPacket";
    return "InitiateRouteRequest";
}

std::optional<NodeId> choice_dest(const StepChoice& c) {
    if (const auto* s = std::get_if<SendQueuedPacket>(&c)) return s->dip;
    if (const auto* i = std::get_if<InitiateRouteRequest>(&c)) return i->dip;
    return std::nullopt;
}

ojson names_of(const Scenario& sc, const std::vector<NodeId>& ids) {
    ojson arr = ojson::array();
    for (NodeId id : ids) arr.push_back(render(id, &sc.nodes));
    return arr;
}

struct ViolationKey {
    std::string monitor;
    std::uint64_t step;
    friend auto operator<=>(const ViolationKey&, const ViolationKey&) = default;
};

}  // namespace

std::string trace_line(const Scenario& sc, const TraceRecord& r) {
    const NodeNames* names = &sc.nodes;
    ojson j;
    j["seq"] = r.seq;
    j["step"] = r.step;
    j["kind"] = kind_name(r.kind);
    switch (r.kind) {
        case TraceRecord::Kind::step:
            j["node"] = render(r.action.node, names);
            j["choice"] = choice_name(r.action.choice);
            if (auto d = choice_dest(r.action.choice)) j["dip"] = render(*d, names);
            j["digest"] = r.digest;
            break;
        case TraceRecord::Kind::event:
            j["event"] = r.action.event;
            j["desc"] = describe(sc, r.action);
            j["digest"] = r.digest;
            break;
        case TraceRecord::Kind::emission:
            j["node"] = render(r.action.node, names);
            j["cast"] = cast_name(r.cast);
            j["message"] = r.message;
            j["receivers"] = names_of(sc, r.nodes);
            break;
        case TraceRecord::Kind::delivery:
            j["node"] = r.nodes.empty() ? std::string{} : render(r.nodes.front(), names);
            j["data"] = r.data.token;
            break;
        case TraceRecord::Kind::violation:
            j["monitor"] = monitor_name(r.monitor);
            j["nodes"] = names_of(sc, r.nodes);
            j["witness"] = r.witness;
            break;
    }
    return j.dump();
}

std::string render_trace(const Scenario& sc, const std::vector<TraceRecord>& trace) {
    std::string out;
    for (const TraceRecord& r : trace) {
        out += trace_line(sc, r);
        out += '\n';
    }
    return out;
}

ReplayReport replay_trace(const Scenario& sc, std::string_view jsonl, const MonitorSet& monitors) {
    ReplayReport rep;
    auto mismatch = [&rep](std::string what) {
        if (rep.consistent) rep.mismatch = std::move(what);
        rep.consistent = false;
    };
    auto node_id = [&sc](const ojson& v) -> std::optional<NodeId> {
        if (!v.is_string()) return std::nullopt;
        auto it = std::find(sc.nodes.begin(), sc.nodes.end(), v.get<std::string>());
        if (it == sc.nodes.end()) return std::nullopt;
        return NodeId{static_cast<std::uint32_t>(it - sc.nodes.begin())};
    };

    std::vector<ViolationKey> recorded, found;
    RunState cur = initial_run_state(sc);
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        ojson j;
        try {
            j = ojson::parse(line);
        } catch (const ojson::parse_error&) {
            mismatch("line " + std::to_string(lineno) + ": malformed JSON");
            break;
        }
        std::string kind = j.value("kind", "");
        if (kind == "violation") {
            recorded.push_back({j.value("monitor", ""), j.value("step", std::uint64_t{0})});
            continue;
        }
        if (kind != "step" && kind != "event") continue;

        Action a;
        if (kind == "event") {
            a.kind = Action::Kind::event;
            a.event = j.value("event", std::size_t{0});
        } else {
            auto node = node_id(j.value("node", ojson{}));
            if (!node) {
                mismatch("line " + std::to_string(lineno) + ": unknown node");
                break;
            }
            a.node = *node;
            std::string choice = j.value("choice", "");
            auto dip = node_id(j.value("dip", ojson{}));
            if (choice == "HandleMessage") {
                a.choice = HandleMessage{};
            } else if (choice == "SendQueuedPacket" && dip) {
                a.choice = SendQueuedPacket{*dip};
            } else if (choice == "InitiateRouteRequest" && dip) {
                a.choice = InitiateRouteRequest{*dip};
            } else {
                mismatch("line " + std::to_string(lineno) + ": bad choice");
                break;
            }
        }

        std::vector<Action> enabled = enabled_actions(sc, cur);
        bool ok = std::any_of(enabled.begin(), enabled.end(), [&](const Action& e) {
            return e.kind == a.kind && (a.kind == Action::Kind::event ? e.event == a.event
                                                                       : e.node == a.node && e.choice == a.choice);
        });
        if (!ok) {
            mismatch("line " + std::to_string(lineno) + ": action not enabled: " + describe(sc, a));
            break;
        }
        Transition t = apply_action(sc, cur, a, monitors);
        ++rep.actions;
        for (const Violation& v : t.violations) found.push_back({std::string(monitor_name(v.monitor)), v.step});
        for (auto& v : t.violations) rep.violations.push_back(std::move(v));
        if (t.fault) {
            rep.fault = t.fault;
            break;
        }
        cur = std::move(t.next);
        if (j.value("digest", "") != digest_hex(cur))
            mismatch("line " + std::to_string(lineno) + ": state digest differs");
    }
    rep.recorded_violations = recorded.size();
    std::sort(recorded.begin(), recorded.end());
    std::sort(found.begin(), found.end());
    if (rep.consistent && recorded != found) mismatch("violations differ from the recorded ones");
    return rep;
}

}  // namespace aodv
