#include "aodv/core_model.hpp"

#include <algorithm>

namespace aodv {

RoutingTable RoutingTable::from_entries(const std::vector<RouteEntry>& entries) {
    RoutingTable rt;
    for (const auto& e : entries) {
        if (rt.contains(e.dip)) throw std::invalid_argument("duplicate routing table destination");
        rt.put(e);
    }
    return rt;
}

const RouteEntry* RoutingTable::find(NodeId dip) const {
    auto it = entries_.find(dip);
    return it == entries_.end() ? nullptr : &it->second;
}

void RoutingTable::put(RouteEntry entry) {
    NodeId key = entry.dip;
    entries_.insert_or_assign(key, std::move(entry));
}

const RouteEntry* select_route(const RoutingTable& rt, NodeId dip) { return rt.find(dip); }

Sqn inc(Sqn n) { return n == 0 ? 0 : n + 1; }

Sqn monus1(Sqn n) { return n == 0 ? 0 : n - 1; }

Sqn sqn(const RoutingTable& rt, NodeId dip) {
    const RouteEntry* e = rt.find(dip);
    return e ? e->dsn : 0;
}

SqnStatus sqnf(const RoutingTable& rt, NodeId dip) {
    const RouteEntry* e = rt.find(dip);
    return e ? e->dsk : SqnStatus::unknown;
}

std::optional<RouteFlag> status(const RoutingTable& rt, NodeId dip) {
    const RouteEntry* e = rt.find(dip);
    if (!e) return std::nullopt;
    return e->flag;
}

std::optional<HopCount> dhops(const RoutingTable& rt, NodeId dip) {
    const RouteEntry* e = rt.find(dip);
    if (!e) return std::nullopt;
    return e->hops;
}

std::optional<NodeId> nhop(const RoutingTable& rt, NodeId dip) {
    const RouteEntry* e = rt.find(dip);
    if (!e) return std::nullopt;
    return e->nhip;
}

std::optional<NodeSet> precs(const RoutingTable& rt, NodeId dip) {
    const RouteEntry* e = rt.find(dip);
    if (!e) return std::nullopt;
    return e->pre;
}

NodeSet kd(const RoutingTable& rt) {
    NodeSet out;
    for (const auto& [dip, e] : rt) out.insert(out.end(), dip);
    return out;
}

NodeSet akd(const RoutingTable& rt) {
    NodeSet out;
    for (const auto& [dip, e] : rt)
        if (e.flag == RouteFlag::valid) out.insert(out.end(), dip);
    return out;
}

NodeSet ikd(const RoutingTable& rt) {
    NodeSet out;
    for (const auto& [dip, e] : rt)
        if (e.flag == RouteFlag::invalid) out.insert(out.end(), dip);
    return out;
}

RouteEntry addprec(RouteEntry r, const NodeSet& npre) {
    r.pre.insert(npre.begin(), npre.end());
    return r;
}

RoutingTable addprec_rt(const RoutingTable& rt, NodeId dip, const NodeSet& npre) {
    const RouteEntry* e = rt.find(dip);
    if (!e) throw WellDefinednessFault("addprecRT: destination not in routing table");
    RoutingTable out = rt;
    out.put(addprec(*e, npre));
    return out;
}

RoutingTable update(const RoutingTable& rt, const RouteEntry& r, UpdateRule rule) {
    if (r.flag != RouteFlag::valid) throw WellDefinednessFault("update: route is not valid");
    if ((r.dsn == 0) != (r.dsk == SqnStatus::unknown))
        throw WellDefinednessFault("update: sqn 0 must coincide with unknown sqn");
    if (r.dsk == SqnStatus::unknown && r.hops != 1)
        throw WellDefinednessFault("update: unknown sqn requires hop count 1");

    RoutingTable out = rt;
    const RouteEntry* s = rt.find(r.dip);
    if (!s) {
        out.put(r);
        return out;
    }

    RouteEntry nr = addprec(r, s->pre);
    bool newer = rule == UpdateRule::accept_equal_sqn ? s->dsn <= r.dsn : s->dsn < r.dsn;
    bool shorter = s->dsn == r.dsn && s->hops > r.hops;
    bool repairs = s->dsn == r.dsn && s->flag == RouteFlag::invalid;
    if (newer || shorter || repairs) {
        out.put(std::move(nr));
    } else if (r.dsk == SqnStatus::unknown) {
        nr.dsn = s->dsn;
        out.put(std::move(nr));
    } else {
        out.put(addprec(*s, r.pre));
    }
    return out;
}

RoutingTable invalidate(const RoutingTable& rt, const DestMap& dests) {
    RoutingTable out = rt;
    for (const auto& [rip, rsn] : dests) {
        const RouteEntry* e = rt.find(rip);
        if (!e) continue;
        RouteEntry changed = *e;
        changed.dsn = rsn;
        changed.flag = RouteFlag::invalid;
        out.put(std::move(changed));
    }
    return out;
}

RreqId nrreqid(const RreqSet& rreqs, NodeId ip) {
    RreqId best = 0;
    for (auto it = rreqs.lower_bound({ip, 0}); it != rreqs.end() && it->first == ip; ++it)
        best = std::max(best, it->second);
    return best + 1;
}

const QueuedPackets* Store::find(NodeId dip) const {
    auto it = entries_.find(dip);
    return it == entries_.end() ? nullptr : &it->second;
}

void Store::put(NodeId dip, QueuedPackets q) {
    if (q.queue.empty()) throw std::invalid_argument("store triple with empty queue");
    entries_.insert_or_assign(dip, std::move(q));
}

std::vector<DataItem> sel_queue(const Store& store, NodeId dip) {
    const QueuedPackets* q = store.find(dip);
    return q ? q->queue : std::vector<DataItem>{};
}

NodeSet qd(const Store& store) {
    NodeSet out;
    for (const auto& [dip, q] : store) out.insert(out.end(), dip);
    return out;
}

std::optional<PendingFlag> pflag(const Store& store, NodeId dip) {
    const QueuedPackets* q = store.find(dip);
    if (!q) return std::nullopt;
    return q->flag;
}

Store store_add(const Store& store, DataItem d, NodeId dip) {
    Store out = store;
    QueuedPackets q;
    if (const QueuedPackets* old = store.find(dip)) q = *old;
    q.queue.push_back(d);
    out.put(dip, std::move(q));
    return out;
}

Store store_drop(const Store& store, NodeId dip) {
    const QueuedPackets* old = store.find(dip);
    if (!old) throw WellDefinednessFault("drop: nothing queued for destination");
    Store out = store;
    if (old->queue.size() == 1) {
        out.erase(dip);
    } else {
        QueuedPackets q = *old;
        q.queue.erase(q.queue.begin());
        out.put(dip, std::move(q));
    }
    return out;
}

Store mark_pending(const Store& store, NodeId dip) {
    const QueuedPackets* old = store.find(dip);
    if (!old) return store;
    Store out = store;
    QueuedPackets q = *old;
    q.flag = PendingFlag::pending;
    out.put(dip, std::move(q));
    return out;
}

Store clear_pending(const Store& store, const DestMap& dests) {
    Store out = store;
    for (const auto& [rip, rsn] : dests) {
        const QueuedPackets* old = store.find(rip);
        if (!old) continue;
        QueuedPackets q = *old;
        q.flag = PendingFlag::non_pending;
        out.put(rip, std::move(q));
    }
    return out;
}

Sqn nsqn(const RouteEntry& r) {
    if (r.flag == RouteFlag::valid || r.dsn == 0) return r.dsn;
    return r.dsn - 1;
}

Sqn nsqn(const RoutingTable& rt, NodeId dip) {
    const RouteEntry* e = rt.find(dip);
    return e ? nsqn(*e) : 0;
}

Quality quality_cmp(const RoutingTable& a, const RoutingTable& b, NodeId dip) {
    const RouteEntry* ea = a.find(dip);
    const RouteEntry* eb = b.find(dip);
    if (!ea || !eb) throw WellDefinednessFault("quality comparison on unknown destination");
    Sqn na = nsqn(*ea);
    Sqn nb = nsqn(*eb);
    if (na != nb) return na < nb ? Quality::better : Quality::worse;
    if (ea->hops == eb->hops) return Quality::equal;
    return ea->hops > eb->hops ? Quality::better : Quality::worse;
}

bool quality_leq(const RoutingTable& a, const RoutingTable& b, NodeId dip) {
    return quality_cmp(a, b, dip) != Quality::worse;
}

bool quality_lt(const RoutingTable& a, const RoutingTable& b, NodeId dip) {
    return quality_cmp(a, b, dip) == Quality::better;
}

std::optional<NodeId> message_sender(const Message& m) {
    return std::visit(
        [](const auto& msg) -> std::optional<NodeId> {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, Newpkt>) {
                return std::nullopt;
            } else {
                return msg.sip;
            }
        },
        m);
}

std::string to_string(SqnStatus k) { return k == SqnStatus::known ? "kno" : "unk"; }

std::string to_string(RouteFlag f) { return f == RouteFlag::valid ? "val" : "inv"; }

std::string to_string(PendingFlag f) { return f == PendingFlag::pending ? "req" : "no-req"; }

}  // namespace aodv
