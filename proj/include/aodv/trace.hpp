#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aodv/explorer.hpp"

namespace aodv {

// One JSON object per line with a fixed key order.
std::string trace_line(const Scenario& sc, const TraceRecord& r);
std::string render_trace(const Scenario& sc, const std::vector<TraceRecord>& trace);

struct ReplayReport {
    bool consistent = true;  // every action was enabled and every digest matched
    std::string mismatch;    // first inconsistency, if any
    std::size_t actions = 0;
    std::vector<Violation> violations;  // found by re-running the monitors
    std::size_t recorded_violations = 0;
    std::optional<std::string> fault;
};

// Re-executes the step and event records of a JSONL trace against `sc`.
// Violations found must agree with the recorded ones by monitor and step.
ReplayReport replay_trace(const Scenario& sc, std::string_view jsonl,
                          const MonitorSet& monitors = MonitorSet::all());

}  // namespace aodv
