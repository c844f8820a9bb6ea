#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "aodv/scenario.hpp"
#include "aodv/render.hpp"
#include "aodv/trace.hpp"

using namespace aodv;

namespace {

const std::string kDir = AODV_SCENARIO_DIR;

std::string error_of(std::string_view text) {
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& s, std::string_view part) { return s.find(part) != std::string::npos; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Cli {
    int status;
    std::string out;
};

Cli aodvcheck(const std::string& args) {
    std::string cmd = std::string(AODVCHECK_BIN) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::string out;
    char buf[4096];
    while (std::size_t k = std::fread(buf, 1, sizeof buf, p)) out.append(buf, k);
    int raw = pclose(p);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "aodv_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("minimal scenario") {
    Scenario sc = parse_scenario(R"({"nodes": ["x"]})");
    CHECK(sc.nodes == NodeNames{"x"});
    CHECK(sc.links.empty());
    CHECK(sc.events.empty());
    CHECK(sc.scheduler.kind == Scheduler::Kind::exhaustive);
    CHECK(sc.variant.mutation == Mutation::none);
    CHECK(sc.bounds.max_steps == Bounds{}.max_steps);
}

TEST_CASE("full scenario fields") {
    Scenario sc = parse_scenario(R"({
      "nodes": ["p", "q", "r"],
      "links": [["q", "p"]],
      "events": [
        {"at": 3, "kind": "inject", "node": "p", "dest": "r"},
        {"floating": true, "kind": "link-up", "a": "q", "b": "r"},
        {"at": 0, "kind": "link-down", "a": "p", "b": "q"}
      ],
      "bounds": {"max_steps": 9, "max_states": 10},
      "scheduler": {"seed": 17},
      "variant": {"precursor_fix": true, "rrep_reverse_precursor": true, "mutation": "M-UPD-GEQ"}
    })");
    CHECK(sc.links == std::vector<Link>{make_link(NodeId{0}, NodeId{1})});
    REQUIRE(sc.events.size() == 3);
    CHECK(sc.events[0].kind == ScenarioEvent::Kind::inject);
    CHECK(sc.events[0].at == 3u);
    CHECK(sc.events[0].x == NodeId{0});
    CHECK(sc.events[0].y == NodeId{2});
    CHECK(sc.events[1].floating);
    CHECK(sc.events[1].kind == ScenarioEvent::Kind::link_up);
    CHECK(sc.events[2].kind == ScenarioEvent::Kind::link_down);
    CHECK(sc.bounds.max_steps == 9);
    CHECK(sc.bounds.max_states == 10);
    CHECK(sc.scheduler.kind == Scheduler::Kind::seeded);
    CHECK(sc.scheduler.seed == 17);
    CHECK(sc.variant.precursor_fix);
    CHECK(sc.variant.rrep_reverse_precursor);
    CHECK(sc.variant.mutation == Mutation::upd_geq);
    CHECK(parse_scenario(R"({"nodes": ["x"], "variant": {"mutation": null}})").variant.mutation == Mutation::none);
    CHECK(parse_scenario(R"({"nodes": ["x"], "scheduler": "demo"})").scheduler.kind == Scheduler::Kind::demo);
}

TEST_CASE("scenario errors name the offending field") {
    CHECK(contains(error_of(R"({"nodes": ["x"], "links": [["x", "y"]]})"), "links[0]"));
    CHECK(contains(error_of(R"({"nodes": ["x"], "links": [["x", "y"]]})"), "unknown node \"y\""));
    CHECK(contains(error_of(R"({"nodes": ["x"], "colour": 1})"), "unknown key \"colour\""));
    CHECK(contains(error_of(R"({"nodes": ["x", "y"], "links": [["x", "x"]]})"), "self-link"));
    CHECK(contains(error_of(R"({"nodes": ["x", "x"]})"), "duplicate node"));
    CHECK(contains(error_of(R"({"nodes": []})"), "nodes"));
    CHECK(contains(error_of(R"({"nodes": ["x"], "variant": {"mutation": "M-FOO"}})"), "variant.mutation"));
    CHECK(contains(error_of(R"({"nodes": ["x"], "scheduler": "fastest"})"), "scheduler"));
    CHECK(contains(error_of(R"({"nodes": ["x","y"], "events": [{"kind": "inject", "node": "x", "dest": "y"}]})"),
                   "events[0]"));
    CHECK(contains(
        error_of(R"({"nodes": ["x","y"], "events": [{"at": 1, "floating": true, "kind": "link-up", "a": "x", "b": "y"}]})"),
        "exactly one"));
    CHECK(contains(error_of(R"({"nodes": ["x","y"], "events": [{"at": 1, "kind": "explode"}]})"), "events[0].kind"));
    CHECK(contains(error_of(R"({"nodes": ["x"], "bounds": {"max_steps": -1}})"), "bounds.max_steps"));
}

TEST_CASE("malformed JSON reports its line") {
    std::string e = error_of("{\n  \"nodes\": [\"x\"],\n  \"links\": [\n}\n");
    CHECK(contains(e, "line 4"));
    CHECK(contains(error_of(""), "line 1"));
}

TEST_CASE("bundled scenarios parse") {
    for (const auto& f : std::filesystem::directory_iterator(kDir)) {
        CAPTURE(f.path().string());
        CHECK_NOTHROW(load_scenario(f.path().string()));
    }
    CHECK_THROWS_AS(load_scenario(kDir + "/missing.json"), ScenarioError);
}

TEST_CASE("the demo scenario matches the hand-executed route discovery") {
    Scenario sc = load_scenario(kDir + "/diamond_demo.json");
    CHECK(sc.nodes == NodeNames{"s", "a", "b", "d"});
    CHECK(sc.scheduler.kind == Scheduler::Kind::demo);
    RunReport r = random_run(sc);
    CHECK(r.quiescent);
    CHECK(r.violations.empty());
    const NetworkState& ns = r.final_state.net;
    const RouteEntry* sd = ns.node(NodeId{0}).rt.find(NodeId{3});
    const RouteEntry* ds = ns.node(NodeId{3}).rt.find(NodeId{0});
    REQUIRE(sd);
    REQUIRE(ds);
    CHECK(render(*sd, ns.names.get()) == "(d,1,kno,val,2,a,{})");
    CHECK(render(*ds, ns.names.get()) == "(s,2,kno,val,2,a,{})");
}

TEST_CASE("trace lines are well-formed JSON with increasing seq") {
    Scenario sc = load_scenario(kDir + "/triangle_linkdown.json");
    sc.scheduler = {Scheduler::Kind::seeded, 5};
    RunReport r = random_run(sc);
    std::istringstream in(render_trace(sc, r.trace));
    std::string line;
    std::uint64_t last_seq = 0, last_step = 0;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::ordered_json::parse(line);
        CHECK(j.begin().key() == "seq");
        std::uint64_t seq = j["seq"], step = j["step"];
        if (count++) CHECK(seq > last_seq);
        CHECK(step >= last_step);
        last_seq = seq;
        last_step = step;
    }
    CHECK(count == r.trace.size());
}

TEST_CASE("traces replay consistently") {
    Scenario sc = load_scenario(kDir + "/triangle_linkdown.json");
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        sc.scheduler = {Scheduler::Kind::seeded, seed};
        RunReport r = random_run(sc);
        ReplayReport rep = replay_trace(sc, render_trace(sc, r.trace));
        CAPTURE(seed);
        CHECK(rep.consistent);
        CHECK(rep.violations.empty());
        CHECK(rep.actions == r.actions);
    }
}

TEST_CASE("replay catches tampering") {
    Scenario sc = load_scenario(kDir + "/diamond_demo.json");
    std::string text = render_trace(sc, random_run(sc).trace);
    auto at = text.find("\"digest\":\"") + 10;
    text[at] = text[at] == '0' ? '1' : '0';
    ReplayReport rep = replay_trace(sc, text);
    CHECK_FALSE(rep.consistent);
    CHECK(contains(rep.mismatch, "digest"));

    ReplayReport bad = replay_trace(sc, "{\"seq\":0}\nnot json\n");
    CHECK_FALSE(bad.consistent);
}

TEST_CASE("violations survive a trace round trip") {
    Scenario sc = load_scenario(kDir + "/a4_inv_copy.json");
    sc.variant = apply_mutation(sc.variant, "M-INV-COPY");
    RunReport r = random_run(sc);
    REQUIRE_FALSE(r.violations.empty());
    std::string text = render_trace(sc, r.trace);
    CHECK(contains(text, "\"monitor\":\"T3\""));
    ReplayReport rep = replay_trace(sc, text);
    CHECK(rep.consistent);
    CHECK(rep.recorded_violations == r.violations.size());
    CHECK(rep.violations.size() == r.violations.size());
}

TEST_CASE("command line exit status") {
    CHECK(aodvcheck("run " + kDir + "/diamond_demo.json --quiet").status == 0);
    CHECK(aodvcheck("explore " + kDir + "/chain3.json").status == 0);

    Cli bad = aodvcheck("run " + kDir + "/a4_inv_copy.json --quiet --mutation M-INV-COPY");
    CHECK(bad.status == 1);
    CHECK(contains(bad.out, "violation T3"));
    CHECK(aodvcheck("run " + kDir + "/a4_inv_copy.json --quiet --mutation M-INV-COPY --monitors -T3,-T4,-S3")
              .status == 0);

    CHECK(aodvcheck("").status == 2);
    CHECK(aodvcheck("run").status == 2);
    CHECK(aodvcheck("run " + kDir + "/missing.json").status == 2);
    CHECK(aodvcheck("run " + kDir + "/chain3.json --mutation M-FOO").status == 2);
    CHECK(aodvcheck("run " + kDir + "/chain3.json --monitors S42").status == 2);
}

TEST_CASE("command line traces are byte-identical and checkable") {
    auto t1 = scratch("t1.jsonl"), t2 = scratch("t2.jsonl");
    std::string base = "run " + kDir + "/triangle_linkdown.json --seed 11 --trace-out ";
    REQUIRE(aodvcheck(base + t1.string()).status == 0);
    REQUIRE(aodvcheck(base + t2.string()).status == 0);
    CHECK(slurp(t1) == slurp(t2));
    CHECK_FALSE(slurp(t1).empty());

    Cli chk = aodvcheck("check " + kDir + "/triangle_linkdown.json " + t1.string());
    CHECK(chk.status == 0);
    CHECK(contains(chk.out, "OK"));

    auto cx = scratch("cx.jsonl");
    Cli ex = aodvcheck("explore " + kDir + "/a4_inv_copy.json --mutation M-INV-COPY --quiet --trace-out " +
                       cx.string());
    CHECK(ex.status == 1);
    Cli rechk = aodvcheck("check " + kDir + "/a4_inv_copy.json " + cx.string() + " --mutation M-INV-COPY");
    CHECK(rechk.status == 1);
    CHECK(contains(rechk.out, "violation"));
    CHECK_FALSE(contains(rechk.out, "inconsistent"));
}
