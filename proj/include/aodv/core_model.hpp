#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace aodv {

struct NodeId {
    std::uint32_t value = 0;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct DataItem {
    std::uint32_t token = 0;
    friend auto operator<=>(const DataItem&, const DataItem&) = default;
};

using Sqn = std::uint32_t;
using HopCount = std::uint32_t;
using RreqId = std::uint32_t;

enum class SqnStatus : std::uint8_t { known, unknown };
enum class RouteFlag : std::uint8_t { valid, invalid };
enum class PendingFlag : std::uint8_t { pending, non_pending };

using NodeSet = std::set<NodeId>;

// Raised when a partial function is applied outside its domain in a
// non-guard position. Never raised by a reachable state of the protocol.
class WellDefinednessFault : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Atomic guard formula: false whenever its operand is undefined.
template <class T, class Pred>
bool atom(const std::optional<T>& value, Pred pred) {
    return value.has_value() && pred(*value);
}

template <class T>
T require_defined(std::optional<T> value, const char* what) {
    if (!value) throw WellDefinednessFault(what);
    return *std::move(value);
}

// ---------------------------------------------------------------------------
// Routing tables

struct RouteEntry {
    NodeId dip;
    Sqn dsn = 0;
    SqnStatus dsk = SqnStatus::unknown;
    RouteFlag flag = RouteFlag::valid;
    HopCount hops = 0;
    NodeId nhip;
    NodeSet pre;

    bool operator==(const RouteEntry&) const = default;
};

// At most one entry per destination, by construction.
class RoutingTable {
public:
    using container = std::map<NodeId, RouteEntry>;

    RoutingTable() = default;
    // Throws std::invalid_argument on a repeated destination.
    static RoutingTable from_entries(const std::vector<RouteEntry>& entries);

    const RouteEntry* find(NodeId dip) const;
    bool contains(NodeId dip) const { return entries_.count(dip) != 0; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    container::const_iterator begin() const { return entries_.begin(); }
    container::const_iterator end() const { return entries_.end(); }

    void put(RouteEntry entry);

    bool operator==(const RoutingTable&) const = default;

private:
    container entries_;
};

// Returned pointer is null iff dip is not a known destination.
const RouteEntry* select_route(const RoutingTable& rt, NodeId dip);

Sqn inc(Sqn n);
Sqn monus1(Sqn n);

Sqn sqn(const RoutingTable& rt, NodeId dip);
SqnStatus sqnf(const RoutingTable& rt, NodeId dip);
std::optional<RouteFlag> status(const RoutingTable& rt, NodeId dip);
std::optional<HopCount> dhops(const RoutingTable& rt, NodeId dip);
std::optional<NodeId> nhop(const RoutingTable& rt, NodeId dip);
std::optional<NodeSet> precs(const RoutingTable& rt, NodeId dip);

NodeSet kd(const RoutingTable& rt);
NodeSet akd(const RoutingTable& rt);
NodeSet ikd(const RoutingTable& rt);

RouteEntry addprec(RouteEntry r, const NodeSet& npre);
// Throws WellDefinednessFault if dip is unknown.
RoutingTable addprec_rt(const RoutingTable& rt, NodeId dip, const NodeSet& npre);

enum class UpdateRule : std::uint8_t {
    standard,
    // Second clause also fires for an equal sequence number at any hop count.
    accept_equal_sqn,
};

// Throws WellDefinednessFault unless r is valid, has sqn 0 exactly when the
// sqn is unknown, and has hop count 1 whenever the sqn is unknown.
RoutingTable update(const RoutingTable& rt, const RouteEntry& r,
                    UpdateRule rule = UpdateRule::standard);

using DestMap = std::map<NodeId, Sqn>;

RoutingTable invalidate(const RoutingTable& rt, const DestMap& dests);

// ---------------------------------------------------------------------------
// Request identifiers

using RreqSet = std::set<std::pair<NodeId, RreqId>>;

RreqId nrreqid(const RreqSet& rreqs, NodeId ip);

// ---------------------------------------------------------------------------
// Packet store

struct QueuedPackets {
    PendingFlag flag = PendingFlag::non_pending;
    std::vector<DataItem> queue;  // never empty inside a Store

    bool operator==(const QueuedPackets&) const = default;
};

class Store {
public:
    using container = std::map<NodeId, QueuedPackets>;

    const QueuedPackets* find(NodeId dip) const;
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    container::const_iterator begin() const { return entries_.begin(); }
    container::const_iterator end() const { return entries_.end(); }

    void put(NodeId dip, QueuedPackets q);
    void erase(NodeId dip) { entries_.erase(dip); }

    bool operator==(const Store&) const = default;

private:
    container entries_;
};

// Empty when nothing is queued for dip.
std::vector<DataItem> sel_queue(const Store& store, NodeId dip);
NodeSet qd(const Store& store);
std::optional<PendingFlag> pflag(const Store& store, NodeId dip);

Store store_add(const Store& store, DataItem d, NodeId dip);
// Drops the head of the queue for dip. Throws WellDefinednessFault when
// nothing is queued for dip.
Store store_drop(const Store& store, NodeId dip);
// No-op when nothing is queued for dip.
Store mark_pending(const Store& store, NodeId dip);
Store clear_pending(const Store& store, const DestMap& dests);

// ---------------------------------------------------------------------------
// Quality of routes

Sqn nsqn(const RouteEntry& r);
// 0 when dip is unknown.
Sqn nsqn(const RoutingTable& rt, NodeId dip);

enum class Quality : std::uint8_t { worse, equal, better };

// Where b stands relative to a for dip. Both tables must know dip;
// throws WellDefinednessFault otherwise.
Quality quality_cmp(const RoutingTable& a, const RoutingTable& b, NodeId dip);
bool quality_leq(const RoutingTable& a, const RoutingTable& b, NodeId dip);
bool quality_lt(const RoutingTable& a, const RoutingTable& b, NodeId dip);

// ---------------------------------------------------------------------------
// Messages

struct Rreq {
    HopCount hops = 0;
    RreqId rreqid = 0;
    NodeId dip;
    Sqn dsn = 0;
    SqnStatus dsk = SqnStatus::unknown;
    NodeId oip;
    Sqn osn = 0;
    NodeId sip;
    bool operator==(const Rreq&) const = default;
};

struct Rrep {
    HopCount hops = 0;
    NodeId dip;
    Sqn dsn = 0;
    NodeId oip;
    NodeId sip;
    bool operator==(const Rrep&) const = default;
};

struct Rerr {
    DestMap dests;
    NodeId sip;
    bool operator==(const Rerr&) const = default;
};

struct Newpkt {
    DataItem data;
    NodeId dip;
    bool operator==(const Newpkt&) const = default;
};

struct Pkt {
    DataItem data;
    NodeId dip;
    NodeId sip;
    bool operator==(const Pkt&) const = default;
};

using Message = std::variant<Rreq, Rrep, Rerr, Newpkt, Pkt>;

// Sender of a control or data message; undefined for Newpkt.
std::optional<NodeId> message_sender(const Message& m);

std::string to_string(SqnStatus k);
std::string to_string(RouteFlag f);
std::string to_string(PendingFlag f);

}  // namespace aodv
