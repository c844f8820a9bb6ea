#include "aodv/network.hpp"

namespace aodv {

Link make_link(NodeId x, NodeId y) {
    if (x == y) throw std::invalid_argument("self-link");
    return x < y ? Link{x, y} : Link{y, x};
}

bool Topology::linked(NodeId x, NodeId y) const {
    return x != y && links_.count(make_link(x, y)) != 0;
}

NodeSet Topology::neighbours(NodeId x) const {
    NodeSet out;
    for (const Link& l : links_) {
        if (l.a == x) out.insert(l.b);
        if (l.b == x) out.insert(l.a);
    }
    return out;
}

bool ConnectivityHistory::contains(NodeId x, NodeId y) const {
    return x != y && edges_.count(make_link(x, y)) != 0;
}

std::string NetworkState::name(NodeId id) const {
    if (names && id.value < names->size()) return (*names)[id.value];
    return "n" + std::to_string(id.value);
}

NetworkState make_network(const NodeNames& names, const std::vector<Link>& links) {
    std::set<std::string> seen;
    NetworkState ns;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!seen.insert(names[i]).second) throw std::invalid_argument("duplicate node name: " + names[i]);
        ns.nodes.push_back(initial_node_state(NodeId{static_cast<std::uint32_t>(i)}));
    }
    for (const Link& l : links) {
        Link n = make_link(l.a, l.b);
        if (n.b.value >= names.size()) throw std::invalid_argument("link names an unknown node");
        ns.topology.add(n);
        ns.history.add(n);
    }
    ns.names = std::make_shared<const NodeNames>(names);
    return ns;
}

NetworkState inject_newpkt(const NetworkState& ns, NodeId at, DataItem d, NodeId dip) {
    return inject_message(ns, at, Newpkt{d, dip});
}

NetworkState inject_message(const NetworkState& ns, NodeId at, const Message& m) {
    if (!std::holds_alternative<Newpkt>(m))
        throw EncapsulationError("only new data packets may be injected");
    if (at.value >= ns.size() || std::get<Newpkt>(m).dip.value >= ns.size())
        throw std::invalid_argument("injection names an unknown node");
    NetworkState out = ns;
    out.nodes[at.value] = enqueue_message(std::move(out.nodes[at.value]), m);
    return out;
}

NetworkState link_up(const NetworkState& ns, NodeId x, NodeId y) {
    Link l = make_link(x, y);
    if (l.b.value >= ns.size()) throw std::invalid_argument("link names an unknown node");
    NetworkState out = ns;
    out.topology.add(l);
    out.history.add(l);
    return out;
}

NetworkState link_down(const NetworkState& ns, NodeId x, NodeId y) {
    Link l = make_link(x, y);
    if (l.b.value >= ns.size()) throw std::invalid_argument("link names an unknown node");
    NetworkState out = ns;
    out.topology.remove(l);
    return out;
}

namespace {

class NetworkTransport final : public Transport {
public:
    NetworkTransport(NetworkState& ns, NodeId self, StepEffects& effects)
        : ns_(ns), self_(self), effects_(effects) {}

    void broadcast(const NodeState& sender, const Message& m) override {
        NodeSet to = ns_.topology.neighbours(self_);
        for (NodeId r : to) push(r, m);
        effects_.emissions.push_back({Cast::broadcast, m, std::move(to), true, sender});
    }

    void groupcast(const NodeState& sender, const NodeSet& dests, const Message& m) override {
        NodeSet to;
        for (NodeId r : dests)
            if (ns_.topology.linked(self_, r)) to.insert(r);
        for (NodeId r : to) push(r, m);
        effects_.emissions.push_back({Cast::groupcast, m, std::move(to), true, sender});
    }

    bool unicast(const NodeState& sender, NodeId dest, const Message& m) override {
        bool ok = ns_.topology.linked(self_, dest);
        NodeSet to;
        if (ok) {
            push(dest, m);
            to.insert(dest);
        }
        effects_.emissions.push_back({Cast::unicast, m, std::move(to), ok, sender});
        return ok;
    }

    void deliver(const NodeState& at, DataItem d) override {
        Delivery rec{ns_.step + 1, at.ip, d};
        ns_.deliveries.push_back(rec);
        effects_.deliveries.push_back(rec);
    }

private:
    void push(NodeId r, const Message& m) { ns_.nodes.at(r.value).msgs.push_back(m); }

    NetworkState& ns_;
    NodeId self_;
    StepEffects& effects_;
};

}  // namespace

NetworkState node_step(const NetworkState& ns, NodeId ip, const StepChoice& choice,
                       const ProtocolVariant& variant, StepEffects* effects) {
    NetworkState out = ns;
    StepEffects local;
    StepEffects& fx = effects ? *effects : local;
    NetworkTransport transport(out, ip, fx);
    NodeState self = out.nodes.at(ip.value);
    out.nodes[ip.value] = main_step(std::move(self), choice, transport, variant);
    ++out.step;
    return out;
}

}  // namespace aodv
