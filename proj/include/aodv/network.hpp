#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aodv/processes.hpp"

namespace aodv {

// Unordered pair of distinct nodes, stored with first < second.
struct Link {
    NodeId a;
    NodeId b;
    friend auto operator<=>(const Link&, const Link&) = default;
};

// Throws std::invalid_argument for a self-link.
Link make_link(NodeId x, NodeId y);

class Topology {
public:
    bool linked(NodeId x, NodeId y) const;
    NodeSet neighbours(NodeId x) const;
    void add(Link l) { links_.insert(l); }
    void remove(Link l) { links_.erase(l); }
    const std::set<Link>& links() const { return links_; }

    bool operator==(const Topology&) const = default;

private:
    std::set<Link> links_;
};

// Every link that has been up at some point. Only ever grows.
class ConnectivityHistory {
public:
    bool contains(NodeId x, NodeId y) const;
    void add(Link l) { edges_.insert(l); }
    const std::set<Link>& edges() const { return edges_; }

    bool operator==(const ConnectivityHistory&) const = default;

private:
    std::set<Link> edges_;
};

struct Delivery {
    std::uint64_t step = 0;
    NodeId at;
    DataItem data;
    bool operator==(const Delivery&) const = default;
};

enum class Cast : std::uint8_t { broadcast, groupcast, unicast };

struct Emission {
    Cast cast = Cast::broadcast;
    Message message;
    NodeSet receivers;      // nodes that actually got a copy
    bool delivered = true;  // false only for a failed unicast
    NodeState sender;       // sender state at the moment of sending
};

// Side effects of one node step, in emission order.
struct StepEffects {
    std::vector<Emission> emissions;
    std::vector<Delivery> deliveries;
};

using NodeNames = std::vector<std::string>;

struct NetworkState {
    std::vector<NodeState> nodes;  // indexed by NodeId::value
    Topology topology;
    ConnectivityHistory history;
    std::uint64_t step = 0;  // number of node steps taken
    std::vector<Delivery> deliveries;
    std::shared_ptr<const NodeNames> names;

    const NodeState& node(NodeId id) const { return nodes.at(id.value); }
    std::size_t size() const { return nodes.size(); }
    std::string name(NodeId id) const;
};

// Nodes are numbered in the order of `names`. Throws std::invalid_argument on
// duplicate names or bad links.
NetworkState make_network(const NodeNames& names, const std::vector<Link>& links);

// Thrown when anything other than a Newpkt is offered from outside.
class EncapsulationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The only way into a node from outside the protocol.
NetworkState inject_newpkt(const NetworkState& ns, NodeId at, DataItem d, NodeId dip);
NetworkState inject_message(const NetworkState& ns, NodeId at, const Message& m);

NetworkState link_up(const NetworkState& ns, NodeId x, NodeId y);
NetworkState link_down(const NetworkState& ns, NodeId x, NodeId y);

// One atomic node step. Only `ip` changes its own routing state; other nodes
// only receive messages. Propagates WellDefinednessFault.
NetworkState node_step(const NetworkState& ns, NodeId ip, const StepChoice& choice,
                       const ProtocolVariant& variant = {}, StepEffects* effects = nullptr);

}  // namespace aodv
