#include <doctest.h>

#include "aodv/network.hpp"
#include "support.hpp"

using namespace aodv;
using namespace aodv::test;

namespace {

const NodeId s = n(0), a = n(1), b = n(2), d = n(3);

NetworkState diamond() { return make_network({"s", "a", "b", "d"}, {{s, a}, {s, b}, {a, d}, {b, d}}); }

}  // namespace

TEST_CASE("links are unordered and never reflexive") {
    CHECK(make_link(b, a) == make_link(a, b));
    CHECK(make_link(b, a).a == a);
    CHECK_THROWS_AS(make_link(a, a), std::invalid_argument);
    Topology t;
    t.add(make_link(a, b));
    CHECK(t.linked(a, b));
    CHECK(t.linked(b, a));
    CHECK_FALSE(t.linked(a, a));
}

TEST_CASE("make_network") {
    NetworkState ns = diamond();
    CHECK(ns.size() == 4);
    for (std::uint32_t i = 0; i < 4; ++i) CHECK(ns.nodes[i] == initial_node_state(NodeId{i}));
    CHECK(ns.topology.neighbours(s) == NodeSet{a, b});
    CHECK(ns.history.edges() == ns.topology.links());
    CHECK(ns.name(d) == "d");
    CHECK(ns.step == 0);
    CHECK_THROWS_AS(make_network({"x", "x"}, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_network({"x", "y"}, {{n(0), n(5)}}), std::invalid_argument);
}

TEST_CASE("broadcast reaches exactly the current neighbours") {
    NetworkState ns = make_network({"s", "a", "b", "d"}, {{s, a}, {s, b}});
    ns = inject_newpkt(ns, s, DataItem{1}, d);
    ns = node_step(ns, s, HandleMessage{});
    StepEffects fx;
    ns = node_step(ns, s, InitiateRouteRequest{d}, {}, &fx);
    CHECK(ns.node(a).msgs.size() == 1);
    CHECK(ns.node(b).msgs.size() == 1);
    CHECK(ns.node(d).msgs.empty());
    CHECK(ns.node(s).msgs.empty());
    REQUIRE(fx.emissions.size() == 1);
    CHECK(fx.emissions[0].receivers == NodeSet{a, b});
    CHECK(fx.emissions[0].sender.sn == 2);
}

TEST_CASE("broadcast from an isolated node reaches nobody") {
    NetworkState ns = make_network({"s", "a"}, {});
    ns = inject_newpkt(ns, s, DataItem{1}, a);
    ns = node_step(ns, s, HandleMessage{});
    NetworkState after = node_step(ns, s, InitiateRouteRequest{a});
    CHECK(after.node(a).msgs.empty());
}

TEST_CASE("unicast follows the current topology") {
    NetworkState ns = make_network({"s", "a", "b", "d"}, {});
    ns.nodes[s.value].rt.put(entry(d, 1, kno, val, 1, d));
    ns.nodes[s.value].store = store_add({}, DataItem{1}, d);

    NetworkState up = link_up(ns, s, d);
    StepEffects fx;
    NetworkState sent = node_step(up, s, SendQueuedPacket{d}, {}, &fx);
    CHECK(sent.node(d).msgs.size() == 1);
    CHECK(fx.emissions.at(0).delivered);
    CHECK(sent.node(s).store.empty());

    NetworkState down = link_down(up, s, d);
    StepEffects fx2;
    NetworkState failed = node_step(down, s, SendQueuedPacket{d}, {}, &fx2);
    CHECK(failed.node(d).msgs.empty());
    CHECK_FALSE(fx2.emissions.at(0).delivered);
    CHECK(status(failed.node(s).rt, d) == inv);
    CHECK(down.history.contains(s, d));
    CHECK_FALSE(down.topology.linked(s, d));
}

TEST_CASE("groupcast reaches only linked members") {
    NetworkState ns = make_network({"s", "a", "b", "d"}, {{a, s}});
    // a holds an invalid route to d with precursors s and b; b is out of range.
    ns.nodes[a.value].rt.put(entry(d, 3, kno, inv, 1, d, {s, b}));
    ns.nodes[a.value].msgs.push_back(Pkt{DataItem{1}, d, s});
    StepEffects fx;
    NetworkState out = node_step(ns, a, HandleMessage{}, {}, &fx);
    CHECK(out.node(s).msgs.size() == 1);
    CHECK(out.node(b).msgs.empty());
    CHECK(fx.emissions.at(0).receivers == NodeSet{s});
}

TEST_CASE("deliveries are logged with their step") {
    NetworkState ns = diamond();
    ns = inject_newpkt(ns, d, DataItem{4}, d);
    StepEffects fx;
    ns = node_step(ns, d, HandleMessage{}, {}, &fx);
    REQUIRE(ns.deliveries.size() == 1);
    CHECK(ns.deliveries[0] == Delivery{1, d, DataItem{4}});
    CHECK(fx.deliveries == ns.deliveries);
}

TEST_CASE("injection boundary") {
    NetworkState ns = diamond();
    NetworkState in = inject_newpkt(ns, s, DataItem{1}, d);
    CHECK(in.node(s).msgs.back() == Message{Newpkt{DataItem{1}, d}});
    CHECK_THROWS_AS(inject_message(ns, s, Rreq{0, 1, d, 0, unk, a, 1, a}), EncapsulationError);
    CHECK_THROWS_AS(inject_message(ns, s, Pkt{DataItem{1}, d, a}), EncapsulationError);
    CHECK_THROWS_AS(inject_newpkt(ns, n(9), DataItem{1}, d), std::invalid_argument);
}

TEST_CASE("link events") {
    NetworkState ns = make_network({"a", "b"}, {});
    CHECK_THROWS_AS(link_up(ns, a, a), std::invalid_argument);
    NetworkState up = link_up(ns, n(0), n(1));
    NetworkState down = link_down(up, n(1), n(0));
    CHECK_FALSE(down.topology.linked(n(0), n(1)));
    CHECK(down.history.contains(n(1), n(0)));
}

TEST_CASE("a step changes only the stepping node's own state and others' queues") {
    NetworkState ns = diamond();
    ns.nodes[a.value].rt.put(entry(d, 2, kno, val, 1, d));
    ns = inject_newpkt(ns, s, DataItem{1}, d);
    ns = node_step(ns, s, HandleMessage{});
    std::uint64_t before_step = ns.step;
    NetworkState out = node_step(ns, s, InitiateRouteRequest{d});
    CHECK(out.step == before_step + 1);
    for (NodeId other : {a, b, d}) {
        CHECK(out.node(other).rt == ns.node(other).rt);
        CHECK(out.node(other).store == ns.node(other).store);
        CHECK(out.node(other).sn == ns.node(other).sn);
        CHECK(out.node(other).rreqs == ns.node(other).rreqs);
    }
}

TEST_CASE("stepping consumes exactly one message") {
    NetworkState ns = diamond();
    ns = inject_newpkt(ns, s, DataItem{1}, d);
    ns = inject_newpkt(ns, s, DataItem{2}, d);
    NetworkState out = node_step(ns, s, HandleMessage{});
    CHECK(out.node(s).msgs.size() == 1);
    CHECK_THROWS_AS(node_step(diamond(), s, HandleMessage{}), std::invalid_argument);
}
