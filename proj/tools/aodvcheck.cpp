// aodvcheck: run, explore, or replay AODV model scenarios.
//
// Exit status: 0 when no monitor fired and no fault occurred, 1 otherwise,
// 2 on usage, I/O or scenario errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "aodv/scenario.hpp"
#include "aodv/trace.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> max_steps;
    std::optional<std::size_t> max_states;
    std::string mutation;
    std::string monitors = "all";
    std::string trace_out;
    bool quiet = false;
};

aodv::Scenario prepare(const std::string& path, const Overrides& o) {
    aodv::Scenario sc = aodv::load_scenario(path);
    if (o.max_steps) sc.bounds.max_steps = *o.max_steps;
    if (o.max_states) sc.bounds.max_states = *o.max_states;
    if (!o.mutation.empty()) sc.variant = aodv::apply_mutation(sc.variant, o.mutation);
    return sc;
}

void print_violations(const std::vector<aodv::Violation>& vs) {
    for (const auto& v : vs) {
        std::cout << "violation " << aodv::monitor_name(v.monitor) << " at step " << v.step << ": "
                  << v.witness << "\n";
    }
}

int cmd_run(const std::string& path, const Overrides& o) {
    aodv::Scenario sc = prepare(path, o);
    if (o.seed) {
        sc.scheduler.kind = aodv::Scheduler::Kind::seeded;
        sc.scheduler.seed = *o.seed;
    } else if (sc.scheduler.kind == aodv::Scheduler::Kind::exhaustive) {
        sc.scheduler.kind = aodv::Scheduler::Kind::seeded;
    }
    aodv::RunOptions opt;
    opt.monitors = aodv::MonitorSet::parse(o.monitors);
    aodv::RunReport rep = aodv::random_run(sc, opt);

    if (!o.trace_out.empty()) {
        std::ofstream out(o.trace_out);
        if (!out) throw std::runtime_error(o.trace_out + ": cannot write");
        out << aodv::render_trace(sc, rep.trace);
    } else if (!o.quiet) {
        std::cout << aodv::render_trace(sc, rep.trace);
    }
    const auto& ns = rep.final_state.net;
    std::cout << "actions " << rep.actions << ", node steps " << ns.step << ", deliveries "
              << ns.deliveries.size() << (rep.quiescent ? ", quiescent" : ", step bound reached") << "\n";
    print_violations(rep.violations);
    if (rep.fault) std::cout << "fault: " << *rep.fault << "\n";
    std::cout << (rep.violations.empty() && !rep.fault ? "OK" : "FAILED") << "\n";
    return rep.violations.empty() && !rep.fault ? 0 : 1;
}

int cmd_explore(const std::string& path, const Overrides& o) {
    aodv::Scenario sc = prepare(path, o);
    aodv::ExploreOptions opt;
    opt.monitors = aodv::MonitorSet::parse(o.monitors);
    aodv::ExploreReport rep = aodv::explore(sc, opt);

    std::cout << "states " << rep.states << ", transitions " << rep.transitions << ", terminal "
              << rep.terminal_states << " (" << rep.undelivered_terminal_states << " with queued data)"
              << ", depth " << rep.max_depth << (rep.truncated ? ", TRUNCATED" : ", complete") << ", "
              << rep.seconds << " s\n";
    for (const auto& [m, n] : rep.by_monitor) std::cout << "  " << aodv::monitor_name(m) << ": " << n << "\n";
    if (!o.quiet) print_violations(rep.violations);
    if (!rep.counterexample.empty()) {
        std::cout << "counterexample:\n";
        for (const auto& a : rep.counterexample) std::cout << "  " << aodv::describe(sc, a) << "\n";
    }
    if (!o.trace_out.empty() && rep.violation_count) {
        aodv::RunState cur = aodv::initial_run_state(sc);
        std::vector<aodv::TraceRecord> trace;
        for (const auto& a : rep.counterexample) {
            aodv::Transition t = aodv::apply_action(sc, cur, a, opt.monitors);
            aodv::append_trace(sc, a, t, trace);
            if (t.fault) break;
            cur = std::move(t.next);
        }
        std::ofstream out(o.trace_out);
        if (!out) throw std::runtime_error(o.trace_out + ": cannot write");
        out << aodv::render_trace(sc, trace);
    }
    std::cout << (rep.violation_count == 0 ? "OK" : "FAILED") << "\n";
    return rep.violation_count == 0 ? 0 : 1;
}

int cmd_check(const std::string& path, const std::string& trace_path, const Overrides& o) {
    aodv::Scenario sc = prepare(path, o);
    std::ifstream in(trace_path);
    if (!in) throw std::runtime_error(trace_path + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    aodv::ReplayReport rep = aodv::replay_trace(sc, buf.str(), aodv::MonitorSet::parse(o.monitors));
    std::cout << "replayed " << rep.actions << " actions, " << rep.violations.size() << " violations ("
              << rep.recorded_violations << " recorded)\n";
    if (!rep.consistent) std::cout << "inconsistent: " << rep.mismatch << "\n";
    print_violations(rep.violations);
    if (rep.fault) std::cout << "fault: " << *rep.fault << "\n";
    bool ok = rep.consistent && rep.violations.empty() && !rep.fault;
    std::cout << (ok ? "OK" : "FAILED") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Executable AODV model: random runs, exhaustive exploration, trace replay"};
    app.require_subcommand(1);
    Overrides o;
    std::string scenario, trace_in;

    auto common = [&](CLI::App* sub) {
        sub->add_option("scenario", scenario, "Scenario JSON file")->required();
        sub->add_option("--max-steps", o.max_steps, "Node-step bound");
        sub->add_option("--max-states", o.max_states, "State bound for exploration");
        sub->add_option("--mutation", o.mutation, "M-RERR-NOGUARD, M-INV-COPY or M-UPD-GEQ");
        sub->add_option("--monitors", o.monitors, "Comma-separated monitor names, all, or none");
        sub->add_flag("--quiet", o.quiet, "Only print the summary");
    };
    CLI::App* run = app.add_subcommand("run", "One seeded (or demo) run");
    common(run);
    run->add_option("--seed", o.seed, "Scheduler seed");
    run->add_option("--trace-out", o.trace_out, "Write the JSONL trace here");

    CLI::App* exp = app.add_subcommand("explore", "Exhaustive bounded exploration");
    common(exp);
    exp->add_option("--trace-out", o.trace_out, "Write a counterexample trace here");

    CLI::App* chk = app.add_subcommand("check", "Replay a trace through the monitors");
    common(chk);
    chk->add_option("trace", trace_in, "JSONL trace file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(scenario, o);
        if (exp->parsed()) return cmd_explore(scenario, o);
        return cmd_check(scenario, trace_in, o);
    } catch (const std::exception& e) {
        std::cerr << "aodvcheck: " << e.what() << "\n";
        return 2;
    }
}
