#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "aodv/network.hpp"

namespace aodv::test {

inline NodeId n(std::uint32_t v) { return NodeId{v}; }

inline RouteEntry entry(NodeId dip, Sqn dsn, SqnStatus dsk, RouteFlag flag, HopCount hops, NodeId nhip,
                        NodeSet pre = {}) {
    return RouteEntry{dip, dsn, dsk, flag, hops, nhip, std::move(pre)};
}

constexpr auto kno = SqnStatus::known;
constexpr auto unk = SqnStatus::unknown;
constexpr auto val = RouteFlag::valid;
constexpr auto inv = RouteFlag::invalid;

// Net sequence number and quality written out from their definitions,
// independently of the library.
inline Sqn oracle_nsqn(const RouteEntry& r) {
    if (r.flag == RouteFlag::invalid && r.dsn > 0) return r.dsn - 1;
    return r.dsn;
}

inline bool oracle_leq(const RouteEntry& a, const RouteEntry& b) {
    Sqn na = oracle_nsqn(a), nb = oracle_nsqn(b);
    return na < nb || (na == nb && a.hops >= b.hops);
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::uint32_t below(std::uint32_t bound) { return static_cast<std::uint32_t>(rng_() % bound); }
    bool coin() { return below(2) == 1; }

    NodeSet node_set(std::uint32_t nodes) {
        NodeSet s;
        for (std::uint32_t i = 0; i < nodes; ++i)
            if (below(3) == 0) s.insert(NodeId{i});
        return s;
    }

    // Entries shaped like those of reachable tables: hop count at least 1,
    // sqn 0 only when unknown, unknown only with hop count 1.
    RouteEntry reachable_entry(NodeId dip, std::uint32_t nodes) {
        RouteEntry r;
        r.dip = dip;
        r.dsn = below(6);
        r.dsk = r.dsn == 0 || below(4) == 0 ? SqnStatus::unknown : SqnStatus::known;
        r.flag = coin() ? RouteFlag::valid : RouteFlag::invalid;
        r.hops = r.dsk == SqnStatus::unknown ? 1 : 1 + below(6);
        r.nhip = r.hops == 1 ? dip : NodeId{below(nodes)};
        r.pre = node_set(nodes);
        return r;
    }

    // Arguments satisfying the update precondition.
    RouteEntry update_argument(NodeId dip, std::uint32_t nodes) {
        RouteEntry r;
        r.dip = dip;
        r.dsn = below(6);
        r.dsk = r.dsn == 0 ? SqnStatus::unknown : SqnStatus::known;
        r.flag = RouteFlag::valid;
        r.hops = r.dsk == SqnStatus::unknown ? 1 : 1 + below(6);
        r.nhip = NodeId{below(nodes)};
        r.pre = node_set(nodes);
        return r;
    }

    RoutingTable table(std::uint32_t nodes) {
        RoutingTable rt;
        for (std::uint32_t i = 0; i < nodes; ++i)
            if (coin()) rt.put(reachable_entry(NodeId{i}, nodes));
        return rt;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

// Transport that records everything and lets tests decide unicast success.
class RecordingTransport final : public Transport {
public:
    struct Sent {
        Cast cast;
        Message message;
        NodeSet to;
        NodeState sender;
    };

    NodeSet reachable;  // unicast succeeds iff the target is in here
    std::vector<Sent> sent;
    std::vector<DataItem> delivered;

    void broadcast(const NodeState& s, const Message& m) override { sent.push_back({Cast::broadcast, m, {}, s}); }
    void groupcast(const NodeState& s, const NodeSet& d, const Message& m) override {
        sent.push_back({Cast::groupcast, m, d, s});
    }
    bool unicast(const NodeState& s, NodeId d, const Message& m) override {
        sent.push_back({Cast::unicast, m, {d}, s});
        return reachable.count(d) != 0;
    }
    void deliver(const NodeState&, DataItem d) override { delivered.push_back(d); }
};

}  // namespace aodv::test
