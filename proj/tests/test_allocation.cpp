#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ergoalloc/allocation.hpp"
#include "ergoalloc/errors.hpp"

using namespace ergoalloc;

namespace {

CalibrationProfile uniform_profile(const std::vector<std::string>& actions, double alpha) {
  CalibrationProfile p;
  CalibrationEntry e;
  e.alpha.fill(alpha);
  for (const auto& a : actions) p.set(a, e);
  return p;
}

// Four-piece chain with synthetic human executions and a configurable robot.
LoadedScenario chain(double robot_cost, const std::string& extra = "") {
  std::string ops = "[";
  const char* names[] = {"p0", "p1", "p2", "p3"};
  auto part = [&](int i, int j) {
    std::string s = "[";
    for (int k = i; k <= j; ++k) s += std::string(k > i ? ", " : "") + "\"" + names[k] + "\"";
    return s + "]";
  };
  bool first = true;
  for (int len = 2; len <= 4; ++len)
    for (int i = 0; i + len <= 4; ++i)
      for (int cut = i; cut < i + len - 1; ++cut) {
        ops += std::string(first ? "" : ",") + R"({"action": "join)" + std::to_string(cut) + R"(", "father": )" +
               part(i, i + len - 1) + R"(, "children": [)" + part(i, cut) + ", " + part(cut + 1, i + len - 1) +
               R"(], "durations": {"robot": 5}})";
        first = false;
      }
  ops += "]";
  std::string traj = R"(, "trajectories": {)";
  for (int c = 0; c < 3; ++c)
    traj += std::string(c ? "," : "") + R"("join)" + std::to_string(c) +
            R"(": {"synth": {"dominant": "shoulder", "levels": [)" + std::to_string(2 + c) +
            R"(], "duration": 20}, "executions": 3})";
  traj += "}";
  const std::string text = R"({"schema": 1, "seed": 5, "pieces": ["p0", "p1", "p2", "p3"],
    "agents": [{"name": "human", "kind": "human"}, {"name": "robot", "kind": "robot", "cost": )" +
                           std::to_string(robot_cost) + "}], \"operations\": " + ops + traj + extra + "}";
  return parse_scenario(text);
}

std::string allocation_string(const AllocationTrace& t) {
  std::string s;
  for (const auto& r : t.records) s += r.action + (r.kind == WorkerKind::human ? "H" : "R") + ";";
  return s;
}

}  // namespace

TEST_CASE("human action cost") {
  CostPolicy policy;
  auto profile = uniform_profile({"a"}, 1.0);
  KWearState s;
  s.v.fill(0.1);
  CHECK(human_action_cost(s, "a", profile, policy).cost == doctest::Approx(0.5));
  s.v[index(Joint::shoulder)] = 0.85;
  CHECK(human_action_cost(s, "a", profile, policy).cost == doctest::Approx(101.25));
  CHECK(human_action_cost(KWearState{}, "a", profile, policy).cost == 0.0);

  auto half = uniform_profile({"b"}, 0.5);
  auto c = human_action_cost(KWearState{}, "b", half, policy);
  CHECK(c.cost == doctest::Approx(2.5));
  for (double v : c.vhat) CHECK(v == doctest::Approx(0.5));
  CHECK_THROWS_AS(human_action_cost(s, "missing", profile, policy), CalibrationMissing);

  // Exactly at the threshold counts as over it.
  auto edge = uniform_profile({"e"}, 0.2);
  CHECK(human_action_cost(KWearState{}, "e", edge, policy).cost == doctest::Approx(5 * 0.8 + 5 * 100.0));
}

TEST_CASE("policy validation") {
  CostPolicy p;
  p.robot_cost = {0.0, 50.0};
  CHECK_NOTHROW(p.validate());
  CHECK(p.guards_threshold());
  p.robot_cost = {0.0, 96.5};
  CHECK_FALSE(p.guards_threshold());
  p.robot_cost = {0.0, -1.0};
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.robot_cost = {0.0, 1.0};
  p.v_th[2] = 1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.v_th[2] = 0.8;
  p.gamma = 0.5;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("refresh_costs writes every active arc") {
  auto s = chain(7.0);
  auto& g = s.graph;
  auto profile = uniform_profile(human_actions(g), 0.9);
  KWearState state;
  state.v.fill(0.2);
  auto snap = refresh_costs(g, state, profile, s.scenario.policy);
  const double expected_human = 5 * (1.0 - 0.9 * 0.8);
  for (const auto& a : g.arcs()) {
    CHECK(snap[a.id] == g.cost(a.id));
    CHECK(g.cost(a.id) == doctest::Approx(a.agent == g.human() ? expected_human : 7.0));
  }
  CHECK_THROWS_AS(refresh_costs(g, state, CalibrationProfile{}, s.scenario.policy), CalibrationMissing);
}

TEST_CASE("fresh worker stays on the human when the robot is expensive") {
  auto s = chain(50.0);
  auto profile = uniform_profile(human_actions(s.graph), 0.99);
  auto t = run_collaboration(s.graph, s.scenario, profile, {});
  REQUIRE(t.records.size() == 3);
  for (const auto& r : t.records) {
    CHECK(r.kind == WorkerKind::human);
    CHECK(r.human_cost);
    CHECK(r.robot_cost == 50.0);
    CHECK(r.chosen_cost == *r.human_cost);
    CHECK(r.vhat);
  }
  CHECK(t.repetitions.size() == 1);
  CHECK(t.final_state.v[index(Joint::shoulder)] > 0.0);
}

TEST_CASE("free robot takes every action") {
  auto s = chain(0.0);
  auto profile = uniform_profile(human_actions(s.graph), 0.99);
  CollaborationOptions opt;
  opt.repetitions = 3;
  auto t = run_collaboration(s.graph, s.scenario, profile, opt);
  REQUIRE(t.records.size() == 9);
  for (const auto& r : t.records) {
    CHECK(r.kind == WorkerKind::robot);
    CHECK(r.elapsed == doctest::Approx(5.0));
  }
  for (double v : t.final_state.v) CHECK(v == 0.0);
  CHECK(t.records.back().clock == doctest::Approx(45.0));
}

TEST_CASE("heavy wear moves actions to the robot and rest brings them back") {
  auto s = chain(2.5);
  auto profile = calibrate_scenario(s.graph, s.scenario, 2, 3, 1.0);
  CollaborationOptions opt;
  opt.repetitions = 12;
  auto t = run_collaboration(s.graph, s.scenario, profile, opt);
  bool robot = false, human_after_robot = false;
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    if (r.kind == WorkerKind::robot) {
      robot = true;
      if (i > 0) CHECK(r.wear_after[index(Joint::shoulder)] < t.records[i - 1].wear_after[index(Joint::shoulder)]);
    } else if (robot) {
      human_after_robot = true;
    }
    if (r.vhat && r.kind == WorkerKind::human)
      for (Joint j : kJoints) CHECK((*r.vhat)[index(j)] < s.scenario.policy.v_th[index(j)]);
  }
  CHECK(robot);
  CHECK(human_after_robot);
  for (std::size_t k = 1; k < t.wear.size(); ++k) CHECK(t.wear[k].t >= t.wear[k - 1].t);
}

TEST_CASE("runs replay identically") {
  auto a = chain(2.5);
  auto b = chain(2.5);
  auto pa = calibrate_scenario(a.graph, a.scenario, 2, 3, 1.0);
  auto pb = calibrate_scenario(b.graph, b.scenario, 2, 3, 1.0);
  CollaborationOptions opt;
  opt.repetitions = 6;
  auto ta = run_collaboration(a.graph, a.scenario, pa, opt);
  auto tb = run_collaboration(b.graph, b.scenario, pb, opt);
  CHECK(allocation_string(ta) == allocation_string(tb));
  CHECK(ta.final_state.v == tb.final_state.v);
  CHECK(ta.wear.size() == tb.wear.size());
}

TEST_CASE("scaling every cost keeps the plan") {
  auto s = chain(3.0);
  auto& g = s.graph;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto costs = g.snapshot();
    for (double& c : costs) c = d(rng);
    g.apply(costs);
    auto plan = ao_star(g, Configuration::assembled(4), Configuration::separated(4));
    for (double& c : costs) c *= 7.5;
    g.apply(costs);
    auto scaled = ao_star(g, Configuration::assembled(4), Configuration::separated(4));
    std::vector<ArcId> before, after;
    for (const auto& st : plan.steps) before.push_back(st.arc);
    for (const auto& st : scaled.steps) after.push_back(st.arc);
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    CHECK(before == after);
    CHECK(scaled.total_cost == doctest::Approx(7.5 * plan.total_cost));
  }
}

TEST_CASE("missing calibration and durations") {
  auto s = chain(50.0);
  CHECK_THROWS_AS(run_collaboration(s.graph, s.scenario, CalibrationProfile{}, {}), CalibrationMissing);
  CollaborationOptions none;
  none.repetitions = 0;
  auto t = run_collaboration(s.graph, s.scenario, CalibrationProfile{}, none);
  CHECK(t.records.empty());
  CHECK(t.wear.size() == 1);
  none.repetitions = -1;
  CHECK_THROWS_AS(run_collaboration(s.graph, s.scenario, CalibrationProfile{}, none), DomainError);
}

TEST_CASE("takt pauses and overruns") {
  auto s = chain(50.0, R"(, "takt": 100)");
  auto profile = uniform_profile(human_actions(s.graph), 0.99);
  CollaborationOptions opt;
  opt.repetitions = 2;
  auto t = run_collaboration(s.graph, s.scenario, profile, opt);
  REQUIRE(t.repetitions.size() == 2);
  CHECK(t.repetitions[0].elapsed == doctest::Approx(100.0));
  CHECK(t.repetitions[0].paused > 0.0);
  CHECK_FALSE(t.repetitions[0].takt_violated);

  auto tight = chain(50.0, R"(, "takt": 10)");
  auto t2 = run_collaboration(tight.graph, tight.scenario, profile, {});
  CHECK(t2.repetitions[0].takt_violated);
  CHECK(t2.records.back().note.find("takt overrun") != std::string::npos);
}

TEST_CASE("baseline RULA allocation") {
  BaselineRulaPolicy p;
  CHECK(p.g_th == doctest::Approx(7.2));
  p.action_scores = {{"low", 7}, {"high", 8}, {"max", 9}, {"min", 1}};
  auto out = baseline_rula_allocate(p, {"low", "high", "max", "min"});
  CHECK(out["low"] == WorkerKind::human);
  CHECK(out["high"] == WorkerKind::robot);
  CHECK(out["max"] == WorkerKind::robot);
  CHECK(out["min"] == WorkerKind::human);
  CHECK_THROWS_AS(baseline_rula_allocate(p, {"other"}), DomainError);

  BaselineRulaPolicy edge;
  edge.g_th = 7.0;
  edge.action_scores = {{"x", 7}};
  CHECK(baseline_rula_allocate(edge, {"x"})["x"] == WorkerKind::human);
}
