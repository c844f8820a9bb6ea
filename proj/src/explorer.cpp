#include "aodv/explorer.hpp"

#include <chrono>
#include <cstdio>
#include <deque>
#include <random>
#include <unordered_map>

#include "aodv/render.hpp"

namespace aodv {

DataItem injected_item(std::size_t event_index) {
    return DataItem{static_cast<std::uint32_t>(event_index + 1)};
}

RunState initial_run_state(const Scenario& sc) {
    return RunState{make_network(sc.nodes, sc.links), std::vector<bool>(sc.events.size(), false)};
}

std::vector<Action> enabled_actions(const Scenario& sc, const RunState& rs) {
    std::optional<std::size_t> due, earliest;
    for (std::size_t i = 0; i < sc.events.size(); ++i) {
        const ScenarioEvent& e = sc.events[i];
        if (rs.fired[i] || e.floating || !e.at) continue;
        if (*e.at <= rs.net.step && (!due || *e.at < *sc.events[*due].at)) due = i;
        if (!earliest || *e.at < *sc.events[*earliest].at) earliest = i;
    }
    auto event = [](std::size_t i) { return Action{Action::Kind::event, {}, HandleMessage{}, i}; };
    if (due) return {event(*due)};

    std::vector<Action> out;
    for (const NodeState& s : rs.net.nodes)
        for (const StepChoice& c : enabled_choices(s)) out.push_back({Action::Kind::node_step, s.ip, c, 0});
    for (std::size_t i = 0; i < sc.events.size(); ++i)
        if (!rs.fired[i] && sc.events[i].floating) out.push_back(event(i));
    if (out.empty() && earliest) out.push_back(event(*earliest));
    return out;
}

namespace {

void check_state_into(const NetworkState& ns, const MonitorSet& on, std::vector<Violation>& out) {
    for (auto& v : check_state(ns, on)) out.push_back(std::move(v));
    for (auto& v : check_route_correctness(ns, on)) out.push_back(std::move(v));
}

NetworkState fire_event(const Scenario& sc, const NetworkState& ns, std::size_t i) {
    const ScenarioEvent& e = sc.events.at(i);
    switch (e.kind) {
        case ScenarioEvent::Kind::inject: return inject_newpkt(ns, e.x, injected_item(i), e.y);
        case ScenarioEvent::Kind::link_up: return link_up(ns, e.x, e.y);
        case ScenarioEvent::Kind::link_down: return link_down(ns, e.x, e.y);
    }
    return ns;
}

}  // namespace

Transition apply_action(const Scenario& sc, const RunState& rs, const Action& a,
                        const MonitorSet& monitors) {
    Transition t;
    if (a.kind == Action::Kind::event) {
        t.next.net = fire_event(sc, rs.net, a.event);
        t.next.fired = rs.fired;
        t.next.fired.at(a.event) = true;
        check_state_into(t.next.net, monitors, t.violations);
        return t;
    }
    try {
        t.next.net = node_step(rs.net, a.node, a.choice, sc.variant, &t.effects);
    } catch (const WellDefinednessFault& f) {
        t.next = rs;
        t.effects = {};
        t.fault = f.what();
        if (monitors.on(Monitor::WD))
            t.violations.push_back({Monitor::WD, rs.net.step + 1, {a.node}, f.what()});
        return t;
    }
    t.next.fired = rs.fired;
    const NodeNames* names = rs.net.names.get();
    for (const Emission& e : t.effects.emissions)
        for (auto& v : check_emission(e.sender, e.message, t.next.net.step, monitors, names))
            t.violations.push_back(std::move(v));
    for (auto& v : check_transition(rs.net, t.next.net, a.node, monitors)) t.violations.push_back(std::move(v));
    check_state_into(t.next.net, monitors, t.violations);
    return t;
}

std::string describe(const Scenario& sc, const Action& a) {
    const NodeNames* names = &sc.nodes;
    if (a.kind == Action::Kind::node_step) return render(a.node, names) + ": " + render(a.choice, names);
    const ScenarioEvent& e = sc.events.at(a.event);
    switch (e.kind) {
        case ScenarioEvent::Kind::inject:
            return "inject NEWPKT(" + std::to_string(injected_item(a.event).token) + "," + render(e.y, names) +
                   ") at " + render(e.x, names);
        case ScenarioEvent::Kind::link_up: return "link-up " + render(e.x, names) + "-" + render(e.y, names);
        case ScenarioEvent::Kind::link_down: return "link-down " + render(e.x, names) + "-" + render(e.y, names);
    }
    return "event";
}

// ---------------------------------------------------------------------------
// Digest

namespace {

class Encoder {
public:
    void u(std::uint64_t v) {
        do {
            std::uint8_t b = v & 0x7f;
            v >>= 7;
            out_.push_back(static_cast<char>(v ? b | 0x80 : b));
        } while (v);
    }
    void id(NodeId n) { u(n.value); }
    void ids(const NodeSet& s) {
        u(s.size());
        for (NodeId n : s) id(n);
    }
    void message(const Message& m) {
        u(m.index());
        std::visit(
            [&](const auto& msg) {
                using T = std::decay_t<decltype(msg)>;
                if constexpr (std::is_same_v<T, Rreq>) {
                    u(msg.hops), u(msg.rreqid), id(msg.dip), u(msg.dsn), u(static_cast<int>(msg.dsk));
                    id(msg.oip), u(msg.osn), id(msg.sip);
                } else if constexpr (std::is_same_v<T, Rrep>) {
                    u(msg.hops), id(msg.dip), u(msg.dsn), id(msg.oip), id(msg.sip);
                } else if constexpr (std::is_same_v<T, Rerr>) {
                    u(msg.dests.size());
                    for (const auto& [rip, rsn] : msg.dests) id(rip), u(rsn);
                    id(msg.sip);
                } else if constexpr (std::is_same_v<T, Newpkt>) {
                    u(msg.data.token), id(msg.dip);
                } else {
                    u(msg.data.token), id(msg.dip), id(msg.sip);
                }
            },
            m);
    }
    void node(const NodeState& s) {
        id(s.ip);
        u(s.sn);
        u(s.rt.size());
        for (const auto& [dip, e] : s.rt) {
            id(dip), u(e.dsn), u(static_cast<int>(e.dsk)), u(static_cast<int>(e.flag));
            u(e.hops), id(e.nhip), ids(e.pre);
        }
        u(s.rreqs.size());
        for (const auto& [oip, rid] : s.rreqs) id(oip), u(rid);
        u(s.store.size());
        for (const auto& [dip, q] : s.store) {
            id(dip), u(static_cast<int>(q.flag)), u(q.queue.size());
            for (DataItem d : q.queue) u(d.token);
        }
        u(s.msgs.size());
        for (const Message& m : s.msgs) message(m);
    }
    void links(const std::set<Link>& ls) {
        u(ls.size());
        for (const Link& l : ls) id(l.a), id(l.b);
    }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

}  // namespace

std::string canonical_bytes(const RunState& rs, bool include_step) {
    Encoder enc;
    enc.u(rs.net.size());
    for (const NodeState& s : rs.net.nodes) enc.node(s);
    enc.links(rs.net.topology.links());
    enc.links(rs.net.history.edges());
    enc.u(rs.fired.size());
    for (bool f : rs.fired) enc.u(f ? 1 : 0);
    enc.u(include_step ? 1 : 0);
    if (include_step) enc.u(rs.net.step);
    return enc.take();
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest_hex(const RunState& rs) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_bytes(rs, true))));
    return buf;
}

// ---------------------------------------------------------------------------
// Exhaustive exploration

namespace {

bool ordered_pending(const Scenario& sc, const RunState& rs) {
    for (std::size_t i = 0; i < sc.events.size(); ++i)
        if (!rs.fired[i] && !sc.events[i].floating) return true;
    return false;
}

bool data_queued(const NetworkState& ns) {
    for (const NodeState& s : ns.nodes)
        if (!s.store.empty()) return true;
    return false;
}

struct Visited {
    std::uint32_t parent;
    Action via;
};

}  // namespace

ExploreReport explore(const Scenario& sc, const ExploreOptions& opt) {
    auto start = std::chrono::steady_clock::now();
    ExploreReport rep;
    constexpr std::uint32_t kRoot = UINT32_MAX;

    std::unordered_map<std::string, std::uint32_t> seen;
    std::vector<Visited> tree;
    struct Frontier {
        RunState state;
        std::uint32_t index;
        std::size_t depth;
    };
    std::deque<Frontier> queue;

    // The root is tree[0]; its `via` is meaningless.
    auto path_to = [&](std::uint32_t idx) {
        std::vector<Action> path;
        for (; idx != 0; idx = tree[idx].parent) path.push_back(tree[idx].via);
        return std::vector<Action>(path.rbegin(), path.rend());
    };
    auto record = [&](std::vector<Violation>& vs, std::uint32_t parent, const Action* via) {
        for (auto& v : vs) {
            if (rep.violation_count == 0) {
                rep.counterexample = via ? path_to(parent) : std::vector<Action>{};
                if (via) rep.counterexample.push_back(*via);
            }
            ++rep.violation_count;
            ++rep.by_monitor[v.monitor];
            if (rep.violations.size() < opt.keep_violations) rep.violations.push_back(std::move(v));
        }
    };

    RunState init = initial_run_state(sc);
    {
        std::vector<Violation> vs;
        check_state_into(init.net, opt.monitors, vs);
        record(vs, kRoot, nullptr);
    }
    seen.emplace(canonical_bytes(init, ordered_pending(sc, init)), 0);
    tree.push_back({kRoot, {}});
    queue.push_back({std::move(init), 0, 0});

    while (!queue.empty()) {
        if (opt.stop_at_first_violation && rep.violation_count) break;
        Frontier cur = std::move(queue.front());
        queue.pop_front();
        rep.max_depth = std::max(rep.max_depth, cur.depth);

        std::vector<Action> actions = enabled_actions(sc, cur.state);
        if (actions.empty()) {
            ++rep.terminal_states;
            if (data_queued(cur.state.net)) ++rep.undelivered_terminal_states;
            continue;
        }
        if (cur.state.net.step >= sc.bounds.max_steps) {
            rep.truncated = true;
            continue;
        }
        for (const Action& a : actions) {
            Transition t = apply_action(sc, cur.state, a, opt.monitors);
            ++rep.transitions;
            record(t.violations, cur.index, &a);
            if (t.fault) continue;
            std::string key = canonical_bytes(t.next, ordered_pending(sc, t.next));
            if (seen.count(key)) continue;
            if (seen.size() >= sc.bounds.max_states) {
                rep.truncated = true;
                continue;
            }
            auto idx = static_cast<std::uint32_t>(tree.size());
            seen.emplace(std::move(key), idx);
            tree.push_back({cur.index, a});
            queue.push_back({std::move(t.next), idx, cur.depth + 1});
        }
    }
    if (!queue.empty()) rep.truncated = true;
    rep.states = seen.size();
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

// ---------------------------------------------------------------------------
// Single runs

void append_trace(const Scenario& sc, const Action& a, const Transition& t, std::vector<TraceRecord>& trace) {
    auto next_seq = [&] { return trace.empty() ? 0 : trace.back().seq + 1; };
    std::uint64_t step = t.next.net.step;

    TraceRecord head;
    head.kind = a.kind == Action::Kind::event ? TraceRecord::Kind::event : TraceRecord::Kind::step;
    head.seq = next_seq();
    head.step = step;
    head.action = a;
    head.digest = digest_hex(t.next);
    trace.push_back(std::move(head));

    const NodeNames* names = &sc.nodes;
    for (const Emission& e : t.effects.emissions) {
        TraceRecord r;
        r.kind = TraceRecord::Kind::emission;
        r.seq = next_seq();
        r.step = step;
        r.action = a;
        r.cast = e.cast;
        r.message = render(e.message, names);
        r.nodes.assign(e.receivers.begin(), e.receivers.end());
        trace.push_back(std::move(r));
    }
    for (const Delivery& d : t.effects.deliveries) {
        TraceRecord r;
        r.kind = TraceRecord::Kind::delivery;
        r.seq = next_seq();
        r.step = step;
        r.action = a;
        r.nodes = {d.at};
        r.data = d.data;
        trace.push_back(std::move(r));
    }
    for (const Violation& v : t.violations) {
        TraceRecord r;
        r.kind = TraceRecord::Kind::violation;
        r.seq = next_seq();
        r.step = step;
        r.action = a;
        r.nodes = v.nodes;
        r.monitor = v.monitor;
        r.witness = v.witness;
        trace.push_back(std::move(r));
    }
}

RunReport random_run(const Scenario& sc, const RunOptions& opt) {
    RunReport rep;
    std::mt19937_64 rng(sc.scheduler.seed);
    RunState cur = initial_run_state(sc);
    for (auto& v : check_state(cur.net, opt.monitors)) rep.violations.push_back(std::move(v));
    for (auto& v : check_route_correctness(cur.net, opt.monitors)) rep.violations.push_back(std::move(v));

    while (true) {
        std::vector<Action> actions = enabled_actions(sc, cur);
        if (actions.empty()) {
            rep.quiescent = true;
            break;
        }
        if (cur.net.step >= sc.bounds.max_steps) break;
        std::size_t pick = 0;
        if (sc.scheduler.kind != Scheduler::Kind::demo && actions.size() > 1)
            pick = static_cast<std::size_t>(rng() % actions.size());
        const Action& a = actions[pick];
        Transition t = apply_action(sc, cur, a, opt.monitors);
        ++rep.actions;
        if (opt.record_trace) append_trace(sc, a, t, rep.trace);
        for (auto& v : t.violations) rep.violations.push_back(std::move(v));
        if (t.fault) {
            rep.fault = t.fault;
            break;
        }
        cur = std::move(t.next);
    }
    rep.final_state = std::move(cur);
    return rep;
}

ProtocolVariant apply_mutation(ProtocolVariant base, std::string_view id) {
    base.mutation = parse_mutation(id);
    return base;
}

}  // namespace aodv
