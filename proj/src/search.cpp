#include "ergoalloc/search.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <unordered_map>

#include "ergoalloc/errors.hpp"

namespace ergoalloc {

namespace {

thread_local SearchStats last_stats;

struct Node {
  Configuration config;
  double score = 0.0;
  int father = -1;
  ArcId via = -1;
  bool open = false;
};

struct OpenKey {
  double score;
  int node;
  ArcId via;
};

// A part may be split only if every goal part lies inside one of its halves.
bool respects_goal(SubAssembly part, const Configuration& goal) {
  for (auto g : goal.parts())
    if (part.overlaps(g) && !part.contains(g)) return false;
  return true;
}

}  // namespace

double plan_cost(const std::vector<PlanStep>& steps) {
  std::vector<double> costs;
  costs.reserve(steps.size());
  for (const auto& s : steps) costs.push_back(s.cost);
  std::sort(costs.begin(), costs.end());
  double total = 0.0;
  for (double c : costs) total += c;
  return total;
}

AllocationPlan ao_star(const AndOrGraph& graph, const Configuration& start, const Configuration& goal,
                       SearchStats* stats, const SearchLimits& limits) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const SubAssembly all = graph.root();
  if (start.covered() != all || goal.covered() != all)
    throw InvariantViolation("search configurations must cover every piece exactly once");

  SearchStats st;
  std::vector<Node> nodes;
  std::unordered_map<Configuration, int, ConfigurationHash> index;

  auto less = [&nodes](const OpenKey& a, const OpenKey& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.node != b.node) {
      const auto& ca = nodes[a.node].config;
      const auto& cb = nodes[b.node].config;
      if (ca < cb) return true;
      if (cb < ca) return false;
    }
    return a.via < b.via;
  };
  std::set<OpenKey, decltype(less)> open(less);

  nodes.push_back({start, 0.0, -1, -1, true});
  index.emplace(start, 0);
  open.insert({0.0, 0, -1});
  st.stored = 1;

  auto finish = [&]() {
    st.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    last_stats = st;
    if (stats) *stats = st;
  };

  int reached = -1;
  while (!open.empty()) {
    if (limits.time_budget_seconds && (st.expanded & 0xff) == 0 &&
        std::chrono::duration<double>(clock::now() - t0).count() > *limits.time_budget_seconds) {
      finish();
      throw SearchTimeout("search exceeded its time budget");
    }
    const OpenKey top = *open.begin();
    open.erase(open.begin());
    nodes[top.node].open = false;
    if (nodes[top.node].config == goal) {
      reached = top.node;
      break;
    }
    ++st.expanded;

    const Configuration current = nodes[top.node].config;
    const double score = nodes[top.node].score;
    for (auto part : current.parts()) {
      if (part.is_leaf() || goal.contains_part(part)) continue;
      for (ArcId id : graph.arcs_from(part)) {
        if (!graph.active(id)) continue;
        const HyperArc& arc = graph.arc(id);
        if (!respects_goal(arc.left, goal) || !respects_goal(arc.right, goal)) continue;
        ++st.generated;
        Configuration next = current.split(part, arc.left, arc.right);
        const double s = score + graph.cost(id);
        auto it = index.find(next);
        if (it == index.end()) {
          const int n = static_cast<int>(nodes.size());
          nodes.push_back({std::move(next), s, top.node, id, true});
          index.emplace(nodes[n].config, n);
          open.insert({s, n, id});
          ++st.stored;
          continue;
        }
        Node& node = nodes[it->second];
        if (s < node.score) {
          if (node.open) open.erase({node.score, it->second, node.via});
          node.score = s;
          node.father = top.node;
          node.via = id;
          node.open = true;
          open.insert({s, it->second, id});
        }
      }
    }
  }
  finish();
  if (reached < 0) throw NoFeasiblePlan("no feasible plan reaches the requested configuration");

  AllocationPlan plan;
  for (int n = reached; nodes[n].father >= 0; n = nodes[n].father) {
    const HyperArc& arc = graph.arc(nodes[n].via);
    plan.steps.push_back({arc.action, arc.agent, arc.id, graph.cost(arc.id), nodes[nodes[n].father].config});
  }
  plan.total_cost = plan_cost(plan.steps);
  return plan;
}

SearchStats search_stats() { return last_stats; }

NextAction recursive_ao_star(AndOrGraph& graph, const Configuration& current, const CostRefresh& cost_refresh,
                             const SearchLimits& limits) {
  const Configuration assembled = Configuration::assembled(graph.piece_count());
  if (current == assembled) throw TerminalState("the assembly is already complete");
  if (cost_refresh) graph.apply(cost_refresh(graph));
  NextAction next;
  next.plan = ao_star(graph, assembled, current, &next.stats, limits);
  const PlanStep& first = next.plan.steps.front();
  next.action = first.action;
  next.agent = first.agent;
  next.arc = first.arc;
  return next;
}

}  // namespace ergoalloc
