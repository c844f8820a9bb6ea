#include "aodv/processes.hpp"

#include <algorithm>
#include <string>

namespace aodv {

namespace {

RouteEntry sender_route(NodeId sip) {
    return RouteEntry{sip, 0, SqnStatus::unknown, RouteFlag::valid, 1, sip, {}};
}

UpdateRule update_rule(const ProtocolVariant& v) {
    return v.mutation == Mutation::upd_geq ? UpdateRule::accept_equal_sqn : UpdateRule::standard;
}

// Shared tail of the error paths: invalidate, unblock queued data, and tell
// the precursors about the destinations they depend on.
NodeState invalidate_and_report(NodeState s, const DestMap& dests, Transport& net) {
    s.rt = invalidate(s.rt, dests);
    s.store = clear_pending(s.store, dests);
    NodeSet pre;
    DestMap reported;
    for (const auto& [rip, rsn] : dests) {
        NodeSet p = require_defined(precs(s.rt, rip), "precs of invalidated destination");
        if (p.empty()) continue;
        pre.insert(p.begin(), p.end());
        reported.emplace(rip, rsn);
    }
    if (!reported.empty()) net.groupcast(s, pre, Rerr{std::move(reported), s.ip});
    return s;
}

NodeState unicast_or_repair(NodeState s, NodeId dest, const Message& m, Transport& net) {
    if (net.unicast(s, dest, m)) return s;
    return route_error_procedure(std::move(s), dest, net);
}

}  // namespace

NodeState initial_node_state(NodeId ip) {
    NodeState s;
    s.ip = ip;
    return s;
}

Mutation parse_mutation(std::string_view id) {
    if (id.empty() || id == "none") return Mutation::none;
    if (id == "M-RERR-NOGUARD") return Mutation::rerr_no_guard;
    if (id == "M-INV-COPY") return Mutation::inv_copy;
    if (id == "M-UPD-GEQ") return Mutation::upd_geq;
    throw std::invalid_argument("unknown mutation: " + std::string(id));
}

std::string_view mutation_id(Mutation m) {
    switch (m) {
        case Mutation::none: return "none";
        case Mutation::rerr_no_guard: return "M-RERR-NOGUARD";
        case Mutation::inv_copy: return "M-INV-COPY";
        case Mutation::upd_geq: return "M-UPD-GEQ";
    }
    return "none";
}

std::vector<StepChoice> enabled_choices(const NodeState& s) {
    std::vector<StepChoice> out;
    if (!s.msgs.empty()) out.emplace_back(HandleMessage{});
    NodeSet valid = akd(s.rt);
    std::vector<NodeId> requests;
    for (const auto& [dip, q] : s.store) {
        if (valid.count(dip)) {
            out.emplace_back(SendQueuedPacket{dip});
        } else if (q.flag == PendingFlag::non_pending) {
            requests.push_back(dip);
        }
    }
    for (NodeId dip : requests) out.emplace_back(InitiateRouteRequest{dip});
    return out;
}

NodeState main_step(NodeState s, const StepChoice& choice, Transport& net,
                    const ProtocolVariant& variant) {
    if (std::holds_alternative<HandleMessage>(choice)) {
        if (s.msgs.empty()) throw std::invalid_argument("no message to handle");
        Message m = std::move(s.msgs.front());
        s.msgs.pop_front();
        if (auto sip = message_sender(m); sip && !std::holds_alternative<Pkt>(m))
            s.rt = update(s.rt, sender_route(*sip), update_rule(variant));
        return std::visit(
            [&](const auto& msg) -> NodeState {
                using T = std::decay_t<decltype(msg)>;
                if constexpr (std::is_same_v<T, Newpkt>) return handle_newpkt(std::move(s), msg, net);
                if constexpr (std::is_same_v<T, Pkt>) return handle_pkt(std::move(s), msg, net);
                if constexpr (std::is_same_v<T, Rreq>) return handle_rreq(std::move(s), msg, net, variant);
                if constexpr (std::is_same_v<T, Rrep>) return handle_rrep(std::move(s), msg, net, variant);
                if constexpr (std::is_same_v<T, Rerr>) return handle_rerr(std::move(s), msg, net, variant);
            },
            m);
    }

    if (const auto* send = std::get_if<SendQueuedPacket>(&choice)) {
        NodeId dip = send->dip;
        const QueuedPackets* q = s.store.find(dip);
        if (!q || !atom(status(s.rt, dip), [](RouteFlag f) { return f == RouteFlag::valid; }))
            throw std::invalid_argument("send choice not enabled");
        DataItem d = q->queue.front();
        NodeId next = require_defined(nhop(s.rt, dip), "nhop of valid destination");
        if (net.unicast(s, next, Pkt{d, dip, s.ip})) {
            s.store = store_drop(s.store, dip);
            return s;
        }
        return route_error_procedure(std::move(s), next, net);
    }

    NodeId dip = std::get<InitiateRouteRequest>(choice).dip;
    if (!atom(pflag(s.store, dip), [](PendingFlag f) { return f == PendingFlag::non_pending; }) ||
        akd(s.rt).count(dip))
        throw std::invalid_argument("route request choice not enabled");
    s.store = mark_pending(s.store, dip);
    s.sn = inc(s.sn);
    RreqId rid = nrreqid(s.rreqs, s.ip);
    s.rreqs.emplace(s.ip, rid);
    net.broadcast(s, Rreq{0, rid, dip, sqn(s.rt, dip), sqnf(s.rt, dip), s.ip, s.sn, s.ip});
    return s;
}

NodeState route_error_procedure(NodeState s, NodeId broken_nhip, Transport& net) {
    DestMap dests;
    for (const auto& [rip, e] : s.rt)
        if (e.flag == RouteFlag::valid && e.nhip == broken_nhip) dests.emplace(rip, inc(e.dsn));
    return invalidate_and_report(std::move(s), dests, net);
}

NodeState handle_newpkt(NodeState s, const Newpkt& m, Transport& net) {
    if (m.dip == s.ip) {
        net.deliver(s, m.data);
        return s;
    }
    s.store = store_add(s.store, m.data, m.dip);
    return s;
}

NodeState handle_pkt(NodeState s, const Pkt& m, Transport& net) {
    if (m.dip == s.ip) {
        net.deliver(s, m.data);
        return s;
    }
    const RouteEntry* e = s.rt.find(m.dip);
    if (!e) return s;
    if (e->flag == RouteFlag::valid) {
        NodeId next = e->nhip;
        return unicast_or_repair(std::move(s), next, Pkt{m.data, m.dip, s.ip}, net);
    }
    net.groupcast(s, e->pre, Rerr{DestMap{{m.dip, e->dsn}}, s.ip});
    return s;
}

NodeState handle_rreq(NodeState s, const Rreq& m, Transport& net, const ProtocolVariant& variant) {
    if (s.rreqs.count({m.oip, m.rreqid})) return s;

    s.rt = update(s.rt,
                  RouteEntry{m.oip, m.osn, SqnStatus::known, RouteFlag::valid, m.hops + 1, m.sip, {}},
                  update_rule(variant));
    s.rreqs.emplace(m.oip, m.rreqid);

    if (m.dip == s.ip) {
        s.sn = std::max(s.sn, m.dsn);
        NodeId back = require_defined(nhop(s.rt, m.oip), "nhop of request originator");
        return unicast_or_repair(std::move(s), back, Rrep{0, m.dip, s.sn, m.oip, s.ip}, net);
    }

    bool can_answer = atom(status(s.rt, m.dip), [](RouteFlag f) { return f == RouteFlag::valid; }) &&
                      sqn(s.rt, m.dip) >= m.dsn && sqnf(s.rt, m.dip) == SqnStatus::known;
    if (can_answer) {
        NodeId back = require_defined(nhop(s.rt, m.oip), "nhop of request originator");
        NodeId forward = require_defined(nhop(s.rt, m.dip), "nhop of requested destination");
        s.rt = addprec_rt(s.rt, m.dip, {variant.precursor_fix ? back : m.sip});
        s.rt = addprec_rt(s.rt, m.oip, {forward});
        Rrep reply{require_defined(dhops(s.rt, m.dip), "dhops of requested destination"), m.dip,
                   sqn(s.rt, m.dip), m.oip, s.ip};
        return unicast_or_repair(std::move(s), back, reply, net);
    }

    net.broadcast(s, Rreq{m.hops + 1, m.rreqid, m.dip, std::max(sqn(s.rt, m.dip), m.dsn), m.dsk,
                          m.oip, m.osn, s.ip});
    return s;
}

NodeState handle_rrep(NodeState s, const Rrep& m, Transport& net, const ProtocolVariant& variant) {
    const RouteEntry* e = s.rt.find(m.dip);
    bool fresh = !e || e->dsn < m.dsn ||
                 (e->dsn == m.dsn && (e->hops > m.hops + 1 || e->flag == RouteFlag::invalid));
    if (!fresh) return s;

    s.rt = update(s.rt,
                  RouteEntry{m.dip, m.dsn, SqnStatus::known, RouteFlag::valid, m.hops + 1, m.sip, {}},
                  update_rule(variant));
    if (m.oip == s.ip) return s;
    if (!atom(status(s.rt, m.oip), [](RouteFlag f) { return f == RouteFlag::valid; })) return s;

    NodeId back = require_defined(nhop(s.rt, m.oip), "nhop of reply originator");
    NodeId forward = require_defined(nhop(s.rt, m.dip), "nhop of reply destination");
    s.rt = addprec_rt(s.rt, m.dip, {back});
    s.rt = addprec_rt(s.rt, forward, {back});
    if (variant.rrep_reverse_precursor) s.rt = addprec_rt(s.rt, m.oip, {forward});
    return unicast_or_repair(std::move(s), back, Rrep{m.hops + 1, m.dip, m.dsn, m.oip, s.ip}, net);
}

NodeState handle_rerr(NodeState s, const Rerr& m, Transport& net, const ProtocolVariant& variant) {
    DestMap dests;
    for (const auto& [rip, rsn] : m.dests) {
        const RouteEntry* e = s.rt.find(rip);
        if (!e || e->flag != RouteFlag::valid) continue;
        bool via_sender = e->nhip == m.sip;
        bool newer = e->dsn < rsn;
        bool accept = false;
        switch (variant.mutation) {
            case Mutation::rerr_no_guard: accept = via_sender; break;
            case Mutation::inv_copy: accept = true; break;
            default: accept = via_sender && newer; break;
        }
        if (accept) dests.emplace(rip, rsn);
    }
    return invalidate_and_report(std::move(s), dests, net);
}

NodeState enqueue_message(NodeState s, Message m) {
    s.msgs.push_back(std::move(m));
    return s;
}

}  // namespace aodv
