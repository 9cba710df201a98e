#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ergoalloc/aog.hpp"
#include "ergoalloc/errors.hpp"

using namespace ergoalloc;

namespace {

// Counts by direct enumeration of contiguous ranges and their cut points.
std::pair<std::size_t, std::size_t> sequential_counts_by_enumeration(int m, int agents) {
  std::size_t nodes = 0, arcs = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      ++nodes;
      for (int cut = i; cut < j; ++cut) arcs += agents;
    }
  return {nodes, arcs};
}

Operation op(std::uint64_t father, std::uint64_t left, std::uint64_t right, ActionId a) {
  return {SubAssembly{father}, SubAssembly{left}, SubAssembly{right}, a};
}

}  // namespace

TEST_CASE("sub-assembly bit operations") {
  auto a = SubAssembly::range(1, 3);
  CHECK(a.bits() == 0b1110);
  CHECK(a.size() == 3);
  CHECK(a.lowest() == 1);
  CHECK(a.contains(2));
  CHECK_FALSE(a.contains(0));
  CHECK(a.contains(SubAssembly::single(3)));
  CHECK(SubAssembly::all(64).size() == 64);
  CHECK(SubAssembly::single(0).is_leaf());
  CHECK(a.pieces() == std::vector<PieceId>{1, 2, 3});
}

TEST_CASE("configuration is canonical and validated") {
  Configuration x({SubAssembly{0b100}, SubAssembly{0b011}});
  Configuration y({SubAssembly{0b011}, SubAssembly{0b100}});
  CHECK(x == y);
  CHECK(x.hash() == y.hash());
  CHECK(x.parts()[0].bits() == 0b011);
  CHECK_THROWS_AS(Configuration({SubAssembly{0b011}, SubAssembly{0b010}}), InvariantViolation);
  CHECK_THROWS_AS(Configuration({SubAssembly{0}}), InvariantViolation);

  SUBCASE("random permutations give one value") {
    std::mt19937 rng(3);
    std::vector<SubAssembly> parts{SubAssembly{0b1}, SubAssembly{0b110}, SubAssembly{0b11000}, SubAssembly{0b100000}};
    Configuration ref(parts);
    for (int i = 0; i < 20; ++i) {
      std::shuffle(parts.begin(), parts.end(), rng);
      Configuration c(parts);
      CHECK(c == ref);
      CHECK(c.hash() == ref.hash());
    }
  }

  SUBCASE("split and join are inverse") {
    auto full = Configuration::assembled(4);
    auto s = full.split(SubAssembly::all(4), SubAssembly::range(0, 1), SubAssembly::range(2, 3));
    CHECK(s.size() == 2);
    CHECK(s.join(SubAssembly::range(0, 1), SubAssembly::range(2, 3)) == full);
    CHECK_THROWS_AS(s.join(SubAssembly::range(0, 1), SubAssembly::range(0, 1)), LookupError);
    CHECK_THROWS_AS(full.split(SubAssembly::all(4), SubAssembly::range(0, 1), SubAssembly::range(1, 3)),
                    InvariantViolation);
  }
}

TEST_CASE("sequential generator matches enumeration") {
  for (int m = 2; m <= 20; ++m)
    for (int a = 1; a <= 4; ++a) {
      auto g = build_sequential(m, make_team(a));
      auto [nodes, arcs] = sequential_counts_by_enumeration(m, a);
      CHECK(g.nodes().size() == nodes);
      CHECK(g.arcs().size() == arcs);
      CHECK(g.nodes().size() == static_cast<std::size_t>(m * (m + 1) / 2));
      CHECK(g.arcs().size() == static_cast<std::size_t>(a * (m * m * m - m) / 6));
    }
  auto g20 = build_sequential(20, make_team(2));
  CHECK(g20.nodes().size() == 210);
  CHECK(g20.arcs().size() == 2660);
  auto g2 = build_sequential(2, make_team(1));
  CHECK(g2.nodes().size() == 3);
  CHECK(g2.arcs().size() == 1);
  auto g4 = build_sequential(4, make_team(2));
  CHECK(g4.nodes().size() == 10);
  CHECK(g4.arcs().size() == 20);
}

TEST_CASE("scarce generator counts") {
  for (int m = 2; m <= 20; ++m)
    for (int a = 1; a <= 4; ++a) {
      auto g = build_scarce(m, make_team(a));
      CHECK(g.nodes().size() == static_cast<std::size_t>(2 * m - 1));
      CHECK(g.arcs().size() == static_cast<std::size_t>(a * (m - 1)));
    }
  CHECK(build_scarce(20, make_team(2)).nodes().size() == 39);
  CHECK(build_scarce(20, make_team(2)).arcs().size() == 38);
  CHECK(build_scarce(5, make_team(1)).arcs().size() == 4);
  CHECK(build_scarce(2, make_team(2)).arcs().size() == 2);
}

TEST_CASE("generators reject degenerate sizes") {
  CHECK_THROWS_AS(build_sequential(1, make_team(2)), InvalidAssembly);
  CHECK_THROWS_AS(build_scarce(1, make_team(2)), InvalidAssembly);
  CHECK_THROWS_AS(build_sequential(65, make_team(2)), InvalidAssembly);
  CHECK_THROWS_AS(make_team(0), InvalidAssembly);
}

TEST_CASE("every hyper-arc tiles its father") {
  for (int m = 2; m <= 8; ++m) {
    for (const auto& g : {build_sequential(m, make_team(3)), build_scarce(m, make_team(3))}) {
      std::set<std::uint64_t> nodes;
      for (auto n : g.nodes()) nodes.insert(n.bits());
      for (const auto& a : g.arcs()) {
        CHECK_FALSE(a.left.overlaps(a.right));
        CHECK((a.left | a.right) == a.father);
        CHECK(nodes.contains(a.left.bits()));
        CHECK(nodes.contains(a.right.bits()));
      }
      // one arc per (operation, agent)
      for (std::size_t op = 0; op < g.operations().size(); ++op) CHECK(g.arcs_of_operation(op).size() == 3);
      CHECK(g.leaves().size() == static_cast<std::size_t>(m));
    }
  }
}

TEST_CASE("constructor rejects malformed operations") {
  const std::vector<std::string> labels{"a", "b"};
  SUBCASE("overlapping children") {
    CHECK_THROWS_AS(AndOrGraph(2, {}, labels, make_team(1), {op(0b11, 0b11, 0b01, 0)}), InvariantViolation);
  }
  SUBCASE("children that do not cover the father") {
    CHECK_THROWS_AS(AndOrGraph(3, {}, labels, make_team(1), {op(0b111, 0b001, 0b010, 0)}), InvariantViolation);
  }
  SUBCASE("no operation builds the root") {
    CHECK_THROWS_AS(AndOrGraph(3, {}, labels, make_team(1), {op(0b011, 0b001, 0b010, 0)}), InvalidAssembly);
  }
  SUBCASE("empty operation list") {
    CHECK_THROWS_AS(AndOrGraph(2, {}, labels, make_team(1), {}), InvalidAssembly);
  }
  SUBCASE("inner node without a builder") {
    CHECK_THROWS_AS(AndOrGraph(3, {}, labels, make_team(1), {op(0b111, 0b011, 0b100, 0)}), InvariantViolation);
  }
  SUBCASE("node not reachable from the root") {
    CHECK_THROWS_AS(AndOrGraph(3, {}, labels, make_team(1),
                               {op(0b111, 0b011, 0b100, 0), op(0b011, 0b001, 0b010, 1), op(0b110, 0b010, 0b100, 1)}),
                    InvariantViolation);
  }
  SUBCASE("two humans") {
    std::vector<Worker> team{{"h1", WorkerKind::human}, {"h2", WorkerKind::human}};
    CHECK_THROWS_AS(AndOrGraph(2, {}, labels, team, {op(0b11, 0b01, 0b10, 0)}), InvalidAssembly);
  }
  SUBCASE("duplicate operation") {
    CHECK_THROWS_AS(AndOrGraph(2, {}, labels, make_team(1), {op(0b11, 0b01, 0b10, 0), op(0b11, 0b10, 0b01, 0)}),
                    InvariantViolation);
  }
}

TEST_CASE("pruning is a reversible flag") {
  auto g = build_sequential(3, make_team(2));
  const auto before = g.topology_hash();
  const ActionId a = g.action_id("j1_1_3");
  g.prune(a, 0);
  const auto after = g.topology_hash();
  CHECK(after != before);
  g.prune(a, 0);
  CHECK(g.topology_hash() == after);
  CHECK(g.active_arc_count() == g.arcs().size() - 1);
  g.restore(a, 0);
  CHECK(g.topology_hash() == before);
  CHECK(g.feasible());
}

TEST_CASE("pruning the last way down is refused") {
  auto g = build_sequential(2, make_team(2));
  g.prune(0, 0);
  CHECK_THROWS_AS(g.prune(0, 1), Infeasible);
  CHECK(g.active(g.arcs_of_operation(0)[1]));
  CHECK(g.feasible());

  auto s = build_scarce(4, make_team(1));
  CHECK_THROWS_AS(s.prune(s.action_id("attach3"), 0), Infeasible);
  CHECK(s.active_arc_count() == 3);
}

TEST_CASE("set_cost round trip and errors") {
  auto g = build_sequential(3, make_team(2));
  const auto topo = g.topology_hash();
  const ActionId a = g.action_id("j1_2_3");
  g.set_cost(a, 0, 2.7);
  for (const auto& arc : g.arcs())
    if (arc.action == a && arc.agent == 0) CHECK(g.cost(arc.id) == 2.7);
  CHECK(g.topology_hash() == topo);
  CHECK_THROWS_AS(g.set_cost(a, 0, -1.0), DomainError);
  CHECK_THROWS_AS(g.set_cost(a, 7, 1.0), LookupError);
  CHECK_THROWS_AS(g.action_id("nope"), LookupError);
  g.prune(a, 1);
  CHECK_THROWS_AS(g.set_cost(a, 1, 1.0), LookupError);

  const auto pruned_topo = g.topology_hash();
  auto snap = g.snapshot();
  snap[0] = 42.0;
  g.apply(snap);
  CHECK(g.cost(0) == 42.0);
  CHECK(g.topology_hash() == pruned_topo);
}

TEST_CASE("part names use piece names") {
  AndOrGraph g(2, {"cap", "body"}, {"close"}, make_team(2), {op(0b11, 0b01, 0b10, 0)});
  CHECK(g.part_name(g.root()) == "cap+body");
  CHECK(g.worker_id("robot1") == 1);
  CHECK(g.human() == 0);
  CHECK_THROWS_AS(g.worker_id("robot9"), LookupError);
}
