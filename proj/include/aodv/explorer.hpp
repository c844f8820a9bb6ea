#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aodv/invariants.hpp"

namespace aodv {

struct ScenarioEvent {
    enum class Kind : std::uint8_t { inject, link_up, link_down };
    Kind kind = Kind::inject;
    // Ordered events fire once at least `at` node steps have been taken and
    // pre-empt everything else. Floating events may fire at any point.
    std::optional<std::uint64_t> at;
    bool floating = false;
    NodeId x;  // injection point, or one end of the link
    NodeId y;  // injected packet's destination, or the other end
};

struct Bounds {
    std::uint64_t max_steps = 1000;
    std::size_t max_states = 1'000'000;
};

struct Scheduler {
    enum class Kind : std::uint8_t { exhaustive, seeded, demo };
    Kind kind = Kind::exhaustive;
    std::uint64_t seed = 0;
};

struct Scenario {
    NodeNames nodes;
    std::vector<Link> links;
    std::vector<ScenarioEvent> events;
    Bounds bounds;
    Scheduler scheduler;
    ProtocolVariant variant;
};

// Data token carried by the packet of injection event `event_index`.
DataItem injected_item(std::size_t event_index);

struct Action {
    enum class Kind : std::uint8_t { node_step, event };
    Kind kind = Kind::node_step;
    NodeId node;
    StepChoice choice;
    std::size_t event = 0;
};

struct RunState {
    NetworkState net;
    std::vector<bool> fired;  // per scenario event
};

RunState initial_run_state(const Scenario& sc);

// Node steps ordered by node then choice, followed by pending floating
// events. A due ordered event pre-empts everything; when nothing else is
// enabled the earliest pending ordered event fires. Empty iff terminal.
std::vector<Action> enabled_actions(const Scenario& sc, const RunState& rs);

struct Transition {
    RunState next;
    StepEffects effects;
    std::vector<Violation> violations;
    std::optional<std::string> fault;  // set iff a WellDefinednessFault occurred
};

// Runs every enabled monitor against the step, its emissions and the
// resulting state. On a fault `next` is the unchanged state.
Transition apply_action(const Scenario& sc, const RunState& rs, const Action& a,
                        const MonitorSet& monitors);

std::string describe(const Scenario& sc, const Action& a);

// Canonical byte string: node states, topology, history, fired events, and
// the step counter when `include_step`. Independent of construction order.
std::string canonical_bytes(const RunState& rs, bool include_step);
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(const RunState& rs);

struct ExploreReport {
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t terminal_states = 0;
    std::size_t undelivered_terminal_states = 0;  // data still queued somewhere
    std::size_t max_depth = 0;
    std::size_t violation_count = 0;
    std::map<Monitor, std::size_t> by_monitor;
    std::vector<Violation> violations;  // first few, for reporting
    std::vector<Action> counterexample;  // path to the first violating transition
    bool truncated = false;
    double seconds = 0;
};

struct ExploreOptions {
    MonitorSet monitors = MonitorSet::all();
    bool stop_at_first_violation = false;
    std::size_t keep_violations = 32;
};

// Breadth-first over all interleavings, bounded by sc.bounds.
ExploreReport explore(const Scenario& sc, const ExploreOptions& opt = {});

struct TraceRecord {
    enum class Kind : std::uint8_t { step, event, emission, delivery, violation };
    Kind kind = Kind::step;
    std::uint64_t seq = 0;   // strictly increasing within a trace
    std::uint64_t step = 0;  // node steps taken so far
    Action action;           // step and event records
    std::string digest;      // step and event records: post-state
    Cast cast = Cast::broadcast;
    std::string message;
    std::vector<NodeId> nodes;  // emission receivers, delivery node, violation nodes
    DataItem data;
    Monitor monitor = Monitor::WD;
    std::string witness;
};

struct RunOptions {
    MonitorSet monitors = MonitorSet::all();
    bool record_trace = true;
};

struct RunReport {
    std::uint64_t actions = 0;
    std::vector<Violation> violations;
    std::optional<std::string> fault;
    bool quiescent = false;
    std::vector<TraceRecord> trace;
    RunState final_state;
};

// Follows sc.scheduler: seeded picks uniformly among enabled actions with a
// 64-bit Mersenne Twister; demo always takes the first enabled action.
RunReport random_run(const Scenario& sc, const RunOptions& opt = {});

// Appends records for one applied action to `trace`.
void append_trace(const Scenario& sc, const Action& a, const Transition& t,
                  std::vector<TraceRecord>& trace);

// Returns `base` with the named mutation selected. Throws
// std::invalid_argument on an unknown identifier.
ProtocolVariant apply_mutation(ProtocolVariant base, std::string_view id);

}  // namespace aodv
