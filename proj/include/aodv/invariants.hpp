#pragma once

#include <bitset>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aodv/network.hpp"

namespace aodv {

enum class Monitor : std::uint8_t {
    S1,   // routing graph per destination is acyclic
    S2,   // hop counts are at least 1
    S3,   // sqn 0 implies unknown
    S4,   // unknown implies hop count 1
    S5,   // hop count 1 implies next hop is the destination
    S6,   // next hop knows the destination with at least the same net sqn
    S6b,  // valid next-hop chains end at the destination or an invalid entry
    S7,   // valid next hops are strictly better
    S8,   // own sqn at least 1, structural well-formedness
    RC,   // every route is realised by a walk in the connectivity history
    T1,   // own sqn never decreases
    T2,   // known destinations never disappear
    T3,   // per-destination sqn never decreases
    T4,   // route quality never decreases
    M1,   // sender field names the sender
    M2,   // fresh requests come from their originator
    M3,   // fresh replies come from their destination
    M4,   // originator / destination sqns are at least 1
    M5,   // forwarded request matches sender's route to the originator
    M6,   // forwarded reply matches sender's route to the destination
    M7,   // error entries match invalid routes of the sender
    WD,   // partial function applied outside its domain
    count_,
};

std::string_view monitor_name(Monitor m);
// Throws std::invalid_argument on an unknown name.
Monitor parse_monitor(std::string_view name);

class MonitorSet {
public:
    static MonitorSet all();
    static MonitorSet none() { return MonitorSet{}; }
    // Comma-separated items applied left to right: a monitor name enables it,
    // "-NAME" disables it, "all" and "none" reset. A list starting with a
    // removal starts from all. Throws std::invalid_argument.
    static MonitorSet parse(std::string_view list);

    bool on(Monitor m) const { return bits_.test(static_cast<std::size_t>(m)); }
    MonitorSet& enable(Monitor m);
    MonitorSet& disable(Monitor m);

private:
    std::bitset<static_cast<std::size_t>(Monitor::count_)> bits_;
};

struct Violation {
    Monitor monitor = Monitor::WD;
    std::uint64_t step = 0;
    std::vector<NodeId> nodes;
    std::string witness;
};

// Arcs ip -> nhip for valid entries towards dip held by nodes other than dip.
std::map<NodeId, NodeId> routing_graph(const NetworkState& ns, NodeId dip);

std::vector<Violation> check_state(const NetworkState& ns, const MonitorSet& on = MonitorSet::all());
std::vector<Violation> check_route_correctness(const NetworkState& ns,
                                               const MonitorSet& on = MonitorSet::all());
std::vector<Violation> check_transition(const NetworkState& before, const NetworkState& after,
                                        NodeId stepped, const MonitorSet& on = MonitorSet::all());
// `sender` is the sender's state at the moment of sending.
std::vector<Violation> check_emission(const NodeState& sender, const Message& m, std::uint64_t step,
                                      const MonitorSet& on = MonitorSet::all(),
                                      const NodeNames* names = nullptr);

// True iff there is a walk of exactly `length` edges from `from` to `to` in
// the history graph.
bool walk_exists(const ConnectivityHistory& h, std::size_t node_count, NodeId from, NodeId to,
                 std::size_t length);

}  // namespace aodv
