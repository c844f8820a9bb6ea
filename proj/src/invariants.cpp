#include "aodv/invariants.hpp"

#include <sstream>

#include "aodv/render.hpp"

namespace aodv {

namespace {

constexpr std::string_view kNames[] = {
    "S1", "S2", "S3", "S4", "S5", "S6", "S6b", "S7", "S8", "RC", "T1",
    "T2", "T3", "T4", "M1", "M2", "M3", "M4", "M5", "M6", "M7", "WD",
};
static_assert(std::size(kNames) == static_cast<std::size_t>(Monitor::count_));

class Collector {
public:
    Collector(const MonitorSet& on, std::uint64_t step, const NodeNames* names)
        : on_(on), step_(step), names_(names) {}

    bool on(Monitor m) const { return on_.on(m); }
    std::string n(NodeId id) const { return render(id, names_); }
    std::string e(const RouteEntry& r) const { return render(r, names_); }
    std::string msg(const Message& m) const { return render(m, names_); }

    void add(Monitor m, std::vector<NodeId> nodes, std::string witness) {
        out_.push_back({m, step_, std::move(nodes), std::move(witness)});
    }

    std::vector<Violation> take() { return std::move(out_); }

private:
    const MonitorSet& on_;
    std::uint64_t step_;
    const NodeNames* names_;
    std::vector<Violation> out_;
};

void check_entries(const NetworkState& ns, Collector& c) {
    for (const NodeState& s : ns.nodes) {
        for (const auto& [dip, r] : s.rt) {
            std::string where = c.n(s.ip) + " holds " + c.e(r);
            if (c.on(Monitor::S2) && r.hops < 1) c.add(Monitor::S2, {s.ip, dip}, where);
            if (c.on(Monitor::S3) && r.dsn == 0 && r.dsk != SqnStatus::unknown)
                c.add(Monitor::S3, {s.ip, dip}, where);
            if (c.on(Monitor::S4) && r.dsk == SqnStatus::unknown && r.hops != 1)
                c.add(Monitor::S4, {s.ip, dip}, where);
            if (c.on(Monitor::S5) && r.hops == 1 && r.nhip != dip) c.add(Monitor::S5, {s.ip, dip}, where);

            bool has_next = r.nhip != dip && r.nhip.value < ns.size();
            if (!has_next) continue;
            const NodeState& next = ns.node(r.nhip);
            const RouteEntry* nr = next.rt.find(dip);
            if (c.on(Monitor::S6)) {
                if (!nr) {
                    c.add(Monitor::S6, {s.ip, r.nhip, dip}, where + " but " + c.n(r.nhip) + " has no entry");
                } else if (nsqn(r) > nsqn(*nr)) {
                    c.add(Monitor::S6, {s.ip, r.nhip, dip}, where + " but " + c.n(r.nhip) + " holds " + c.e(*nr));
                }
            }
            if (c.on(Monitor::S7) && nr && r.flag == RouteFlag::valid && nr->flag == RouteFlag::valid &&
                !quality_lt(s.rt, next.rt, dip)) {
                c.add(Monitor::S7, {s.ip, r.nhip, dip}, where + " but " + c.n(r.nhip) + " holds " + c.e(*nr));
            }
        }
    }
}

void check_acyclic(const NetworkState& ns, Collector& c) {
    for (std::uint32_t d = 0; d < ns.size(); ++d) {
        NodeId dip{d};
        std::map<NodeId, NodeId> arcs = routing_graph(ns, dip);
        std::set<NodeId> cleared;
        for (const auto& [start, ignored] : arcs) {
            std::vector<NodeId> path;
            std::set<NodeId> on_path;
            NodeId cur = start;
            while (!cleared.count(cur)) {
                if (on_path.count(cur)) {
                    std::string w = "cycle towards " + c.n(dip) + ":";
                    std::vector<NodeId> cyc;
                    bool in = false;
                    for (NodeId p : path) {
                        in = in || p == cur;
                        if (in) {
                            cyc.push_back(p);
                            w += " " + c.n(p) + " ->";
                        }
                    }
                    w += " " + c.n(cur);
                    c.add(Monitor::S1, cyc, w);
                    break;
                }
                auto it = arcs.find(cur);
                if (it == arcs.end()) break;
                path.push_back(cur);
                on_path.insert(cur);
                cur = it->second;
            }
            cleared.insert(path.begin(), path.end());
        }
    }
}

void check_chains(const NetworkState& ns, Collector& c) {
    for (const NodeState& s : ns.nodes) {
        for (const auto& [dip, r] : s.rt) {
            if (r.flag != RouteFlag::valid || s.ip == dip) continue;
            NodeId cur = r.nhip;
            for (std::size_t guard = 0; guard <= ns.size(); ++guard) {
                if (cur == dip || cur.value >= ns.size()) break;
                const RouteEntry* nr = ns.node(cur).rt.find(dip);
                if (!nr) {
                    c.add(Monitor::S6b, {s.ip, cur, dip},
                          "chain from " + c.n(s.ip) + " towards " + c.n(dip) + " stops at " + c.n(cur));
                    break;
                }
                if (nr->flag == RouteFlag::invalid) break;
                cur = nr->nhip;
            }
        }
    }
}

void check_structure(const NetworkState& ns, Collector& c) {
    for (std::uint32_t i = 0; i < ns.size(); ++i) {
        const NodeState& s = ns.nodes[i];
        if (s.ip.value != i) c.add(Monitor::S8, {s.ip}, "node stored under the wrong address");
        if (s.sn < 1) c.add(Monitor::S8, {s.ip}, c.n(s.ip) + " has sn 0");
        for (const auto& [dip, r] : s.rt)
            if (r.dip != dip) c.add(Monitor::S8, {s.ip, dip}, "entry keyed under a different destination");
        for (const auto& [dip, q] : s.store)
            if (q.queue.empty()) c.add(Monitor::S8, {s.ip, dip}, "empty queue in store");
    }
}

}  // namespace

std::string_view monitor_name(Monitor m) { return kNames[static_cast<std::size_t>(m)]; }

Monitor parse_monitor(std::string_view name) {
    for (std::size_t i = 0; i < std::size(kNames); ++i)
        if (kNames[i] == name) return static_cast<Monitor>(i);
    throw std::invalid_argument("unknown monitor: " + std::string(name));
}

MonitorSet MonitorSet::all() {
    MonitorSet s;
    s.bits_.set();
    return s;
}

MonitorSet MonitorSet::parse(std::string_view list) {
    MonitorSet s;
    bool first = true;
    while (!list.empty()) {
        auto comma = list.find(',');
        std::string_view item = list.substr(0, comma);
        list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
        if (item == "all") {
            s = all();
        } else if (item == "none") {
            s = none();
        } else if (!item.empty() && item.front() == '-') {
            if (first) s = all();
            s.disable(parse_monitor(item.substr(1)));
        } else {
            s.enable(parse_monitor(item));
        }
        first = false;
    }
    return s;
}

MonitorSet& MonitorSet::enable(Monitor m) {
    bits_.set(static_cast<std::size_t>(m));
    return *this;
}

MonitorSet& MonitorSet::disable(Monitor m) {
    bits_.reset(static_cast<std::size_t>(m));
    return *this;
}

std::map<NodeId, NodeId> routing_graph(const NetworkState& ns, NodeId dip) {
    std::map<NodeId, NodeId> arcs;
    for (const NodeState& s : ns.nodes) {
        if (s.ip == dip) continue;
        const RouteEntry* r = s.rt.find(dip);
        if (r && r->flag == RouteFlag::valid) arcs.emplace(s.ip, r->nhip);
    }
    return arcs;
}

std::vector<Violation> check_state(const NetworkState& ns, const MonitorSet& on) {
    Collector c(on, ns.step, ns.names.get());
    if (on.on(Monitor::S1)) check_acyclic(ns, c);
    check_entries(ns, c);
    if (on.on(Monitor::S6b)) check_chains(ns, c);
    if (on.on(Monitor::S8)) check_structure(ns, c);
    return c.take();
}

bool walk_exists(const ConnectivityHistory& h, std::size_t node_count, NodeId from, NodeId to,
                 std::size_t length) {
    std::vector<bool> layer(node_count, false);
    if (from.value >= node_count) return false;
    layer[from.value] = true;
    for (std::size_t k = 0; k < length; ++k) {
        std::vector<bool> next(node_count, false);
        for (const Link& l : h.edges()) {
            if (layer[l.a.value]) next[l.b.value] = true;
            if (layer[l.b.value]) next[l.a.value] = true;
        }
        layer = std::move(next);
    }
    return to.value < node_count && layer[to.value];
}

std::vector<Violation> check_route_correctness(const NetworkState& ns, const MonitorSet& on) {
    Collector c(on, ns.step, ns.names.get());
    if (!on.on(Monitor::RC)) return c.take();
    for (const NodeState& s : ns.nodes) {
        for (const auto& [dip, r] : s.rt) {
            bool ok;
            if (r.hops == 0) {
                ok = dip == s.ip;
            } else {
                ok = ns.history.contains(s.ip, r.nhip) &&
                     walk_exists(ns.history, ns.size(), r.nhip, dip, r.hops - 1);
            }
            if (!ok)
                c.add(Monitor::RC, {s.ip, dip},
                      c.n(s.ip) + " holds " + c.e(r) + " with no matching walk in the connectivity history");
        }
    }
    return c.take();
}

std::vector<Violation> check_transition(const NetworkState& before, const NetworkState& after,
                                        NodeId stepped, const MonitorSet& on) {
    Collector c(on, after.step, after.names.get());
    const NodeState& b = before.node(stepped);
    const NodeState& a = after.node(stepped);
    if (on.on(Monitor::T1) && a.sn < b.sn)
        c.add(Monitor::T1, {stepped},
              c.n(stepped) + " sn " + std::to_string(b.sn) + " -> " + std::to_string(a.sn));
    for (const auto& [dip, rb] : b.rt) {
        const RouteEntry* ra = a.rt.find(dip);
        if (!ra) {
            if (on.on(Monitor::T2)) c.add(Monitor::T2, {stepped, dip}, c.n(stepped) + " forgot " + c.e(rb));
            continue;
        }
        if (on.on(Monitor::T3) && ra->dsn < rb.dsn)
            c.add(Monitor::T3, {stepped, dip}, c.n(stepped) + " " + c.e(rb) + " -> " + c.e(*ra));
        if (on.on(Monitor::T4) && !quality_leq(b.rt, a.rt, dip))
            c.add(Monitor::T4, {stepped, dip}, c.n(stepped) + " " + c.e(rb) + " -> " + c.e(*ra));
    }
    return c.take();
}

std::vector<Violation> check_emission(const NodeState& sender, const Message& m, std::uint64_t step,
                                      const MonitorSet& on, const NodeNames* names) {
    Collector c(on, step, names);
    const RoutingTable& rt = sender.rt;
    std::string head = c.n(sender.ip) + " sent " + c.msg(m);

    if (auto sip = message_sender(m); on.on(Monitor::M1) && sip && *sip != sender.ip)
        c.add(Monitor::M1, {sender.ip}, head);

    if (const auto* q = std::get_if<Rreq>(&m)) {
        if (on.on(Monitor::M2) && q->hops == 0 && q->sip != q->oip) c.add(Monitor::M2, {sender.ip}, head);
        if (on.on(Monitor::M4) && q->osn < 1) c.add(Monitor::M4, {sender.ip}, head);
        if (on.on(Monitor::M5) && q->sip != q->oip) {
            const RouteEntry* r = rt.find(q->oip);
            bool ok = r && (r->dsn > q->osn ||
                            (r->dsn == q->osn && r->hops <= q->hops && r->flag == RouteFlag::valid));
            if (!ok) c.add(Monitor::M5, {sender.ip, q->oip}, head + (r ? " holding " + c.e(*r) : " with no route"));
        }
    } else if (const auto* p = std::get_if<Rrep>(&m)) {
        if (on.on(Monitor::M3) && p->hops == 0 && p->sip != p->dip) c.add(Monitor::M3, {sender.ip}, head);
        if (on.on(Monitor::M4) && p->dsn < 1) c.add(Monitor::M4, {sender.ip}, head);
        if (on.on(Monitor::M6) && p->sip != p->dip) {
            const RouteEntry* r = rt.find(p->dip);
            bool ok = r && r->dsn == p->dsn && r->hops == p->hops && r->flag == RouteFlag::valid;
            if (!ok) c.add(Monitor::M6, {sender.ip, p->dip}, head + (r ? " holding " + c.e(*r) : " with no route"));
        }
    } else if (const auto* e = std::get_if<Rerr>(&m)) {
        if (on.on(Monitor::M7)) {
            for (const auto& [rip, rsn] : e->dests) {
                const RouteEntry* r = rt.find(rip);
                bool ok = r && r->flag == RouteFlag::invalid && r->dsn == rsn;
                if (!ok) c.add(Monitor::M7, {sender.ip, rip}, head + (r ? " holding " + c.e(*r) : " with no route"));
            }
        }
    }
    return c.take();
}

}  // namespace aodv
