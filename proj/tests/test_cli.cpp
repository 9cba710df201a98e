#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "ergoalloc/cli.hpp"

using namespace ergoalloc;
namespace fs = std::filesystem;

namespace {

const std::string kData = ERGOALLOC_DATA_DIR "/scenarios/";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "ergoalloc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("ergoalloc_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("graph statistics and DOT") {
  auto r = run({"graph", "--sequential", "20"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("nodes: 210, arcs: 2660") != std::string::npos);
  r = run({"graph", "--scarce", "20"});
  CHECK(r.out.find("nodes: 39, arcs: 38") != std::string::npos);
  r = run({"graph", "--scenario", kData + "corner_joint_multi_subject.json", "--dot"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("digraph", 0) == 0);
  CHECK(r.out.find("dashed") != std::string::npos);
}

TEST_CASE("plan output formats") {
  auto r = run({"plan", "--sequential", "4", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["total_cost"].get<double>() == 3.0);
  CHECK(j["steps"].size() == 3);

  auto csv = run({"plan", "--sequential", "4", "--format", "csv"});
  CHECK(csv.out.rfind("# ergoalloc schema 1\n", 0) == 0);

  auto a = run({"plan", "--sequential", "6", "--agents", "3", "--seed", "9"});
  auto b = run({"plan", "--sequential", "6", "--agents", "3", "--seed", "9"});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
}

TEST_CASE("cost overrides") {
  auto dir = scratch("costs");
  std::ofstream(dir / "costs.json") << R"({"costs": {"a_1/robot": 50, "a_2/robot": 50, "a_3/robot": 50, "a_4/robot": 50,
                                            "a_5/robot": 50, "a_2/human": 105}})";
  auto r = run({"plan", "--scenario", kData + "corner_joint_validation.json", "--format", "json", "--costs",
                (dir / "costs.json").string()});
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  for (const auto& s : j["steps"])
    CHECK(s["agent"].get<std::string>() == (s["action"].get<std::string>() == "a_2" ? "robot" : "human"));
}

TEST_CASE("failure exit codes") {
  auto r = run({"plan", "--scenario", kData + "over_pruned.json"});
  CHECK(r.code == kExitFailure);
  CHECK(r.err.find("no feasible plan") != std::string::npos);
  CHECK(run({"plan"}).code == kExitFailure);
  CHECK(run({"frobnicate"}).code == kExitFailure);
  CHECK(run({"plan", "--scenario", "/nonexistent.json"}).code == kExitMissing);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("simulate needs a profile") {
  auto dir = scratch("noprofile");
  auto r = run({"simulate", "--scenario", kData + "corner_joint_validation.json", "--out", dir.string()});
  CHECK(r.code == kExitMissing);
  CHECK(r.err.find("calibrate") != std::string::npos);
}

TEST_CASE("calibrate then simulate") {
  auto dir = scratch("sim");
  const auto scenario = kData + "corner_joint_validation.json";
  auto cal = run({"calibrate", "--scenario", scenario, "--out", (dir / "profile.json").string()});
  REQUIRE(cal.code == kExitOk);
  CHECK(fs::exists(dir / "profile.json"));

  auto zero = run({"simulate", "--scenario", scenario, "--out", dir.string(), "--repetitions", "0"});
  CHECK(zero.code == kExitOk);
  CHECK(slurp(dir / "trace.csv").find("repetition,step") != std::string::npos);

  auto first = run({"simulate", "--scenario", scenario, "--out", dir.string(), "--repetitions", "2"});
  REQUIRE(first.code == kExitOk);
  CHECK(first.out.find("rp_1") != std::string::npos);
  CHECK(first.out.find("rula") != std::string::npos);
  const auto trace = slurp(dir / "trace.csv"), wear = slurp(dir / "wear.csv"), summary = slurp(dir / "summary.json");
  auto again = run({"simulate", "--scenario", scenario, "--out", dir.string(), "--repetitions", "2"});
  CHECK(again.out == first.out);
  CHECK(slurp(dir / "trace.csv") == trace);
  CHECK(slurp(dir / "wear.csv") == wear);
  CHECK(slurp(dir / "summary.json") == summary);
  CHECK(trace.find("search_seconds") == std::string::npos);

  auto timed = run({"simulate", "--scenario", scenario, "--out", dir.string(), "--repetitions", "1", "--timing"});
  CHECK(timed.code == kExitOk);
  CHECK(slurp(dir / "trace.csv").find("search_seconds") != std::string::npos);
}

TEST_CASE("calibration that does not converge") {
  auto dir = scratch("diverge");
  const std::string text = R"({"schema": 1, "pieces": ["p", "q"],
    "agents": [{"name": "human", "kind": "human"}, {"name": "robot", "kind": "robot", "cost": 1}],
    "operations": [{"action": "join", "father": ["p", "q"], "children": [["p"], ["q"]], "durations": {"robot": 2}}],
    "trajectories": {"join": [{"synth": {"dominant": "shoulder", "levels": [1], "duration": 30}},
                              {"synth": {"dominant": "shoulder", "levels": [4], "duration": 30}}]}})";
  std::ofstream(dir / "scenario.json") << text;
  auto r = run({"calibrate", "--scenario", (dir / "scenario.json").string(), "--out", (dir / "p.json").string()});
  CHECK(r.code == kExitNotConverged);
  CHECK(fs::exists(dir / "p.json"));

  auto few = run({"calibrate", "--scenario", (dir / "scenario.json").string(), "--out", (dir / "p.json").string(),
                  "--eta0", "3"});
  CHECK(few.code == kExitMissing);
}

TEST_CASE("bench writes CSV") {
  auto r = run({"bench", "--family", "scarce", "--pieces-max", "5", "--no-agent-sweep", "--seeds", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("# ergoalloc schema 1\n", 0) == 0);
  CHECK(r.out.find("pieces,scarce,5") != std::string::npos);
  CHECK(run({"bench", "--pieces-min", "9", "--pieces-max", "3"}).code == kExitFailure);
}
