#pragma once

#include <deque>
#include <string_view>
#include <variant>
#include <vector>

#include "aodv/core_model.hpp"

namespace aodv {

struct NodeState {
    NodeId ip;
    Sqn sn = 1;
    RoutingTable rt;
    RreqSet rreqs;
    Store store;
    std::deque<Message> msgs;  // FIFO, head is next to be handled

    bool operator==(const NodeState&) const = default;
};

NodeState initial_node_state(NodeId ip);

// Outbound side of a node. Each call receives the sender's state as it is at
// the moment of sending, so emission checks see the right snapshot.
class Transport {
public:
    virtual ~Transport() = default;
    virtual void broadcast(const NodeState& sender, const Message& m) = 0;
    virtual void groupcast(const NodeState& sender, const NodeSet& dests, const Message& m) = 0;
    // True iff the receiver is currently a neighbour.
    virtual bool unicast(const NodeState& sender, NodeId dest, const Message& m) = 0;
    virtual void deliver(const NodeState& at, DataItem d) = 0;
};

enum class Mutation : std::uint8_t {
    none,
    rerr_no_guard,  // M-RERR-NOGUARD
    inv_copy,       // M-INV-COPY
    upd_geq,        // M-UPD-GEQ
};

// Throws std::invalid_argument on an unknown identifier.
Mutation parse_mutation(std::string_view id);
std::string_view mutation_id(Mutation m);

struct ProtocolVariant {
    // Intermediate replies record the reverse next hop instead of the
    // request's sender as precursor of the forward route.
    bool precursor_fix = false;
    // Reply forwarding also records the forward next hop as a precursor of
    // the reverse route.
    bool rrep_reverse_precursor = false;
    Mutation mutation = Mutation::none;

    bool operator==(const ProtocolVariant&) const = default;
};

struct HandleMessage {
    friend auto operator<=>(const HandleMessage&, const HandleMessage&) = default;
};
struct SendQueuedPacket {
    NodeId dip;
    friend auto operator<=>(const SendQueuedPacket&, const SendQueuedPacket&) = default;
};
struct InitiateRouteRequest {
    NodeId dip;
    friend auto operator<=>(const InitiateRouteRequest&, const InitiateRouteRequest&) = default;
};

// Ordered by alternative first, then destination.
using StepChoice = std::variant<HandleMessage, SendQueuedPacket, InitiateRouteRequest>;

// Sorted ascending; empty iff the node is quiescent.
std::vector<StepChoice> enabled_choices(const NodeState& s);

// Throws std::invalid_argument if the choice is not enabled.
NodeState main_step(NodeState s, const StepChoice& choice, Transport& net,
                    const ProtocolVariant& variant = {});

NodeState route_error_procedure(NodeState s, NodeId broken_nhip, Transport& net);

NodeState handle_newpkt(NodeState s, const Newpkt& m, Transport& net);
NodeState handle_pkt(NodeState s, const Pkt& m, Transport& net);
NodeState handle_rreq(NodeState s, const Rreq& m, Transport& net,
                      const ProtocolVariant& variant = {});
NodeState handle_rrep(NodeState s, const Rrep& m, Transport& net,
                      const ProtocolVariant& variant = {});
NodeState handle_rerr(NodeState s, const Rerr& m, Transport& net,
                      const ProtocolVariant& variant = {});

NodeState enqueue_message(NodeState s, Message m);

}  // namespace aodv
