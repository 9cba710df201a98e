#include <algorithm>
#include <unordered_map>

#include "ergoalloc/errors.hpp"
#include "ergoalloc/search.hpp"

namespace ergoalloc {

namespace {

class Enumerator {
 public:
  Enumerator(const AndOrGraph& graph, const Configuration& goal, std::size_t limit)
      : graph_(graph), goal_(goal), limit_(static_cast<double>(limit)) {}

  // Number of decomposition trees of `part`, saturating above the limit.
  double count(SubAssembly part) {
    if (goal_.contains_part(part)) return 1.0;
    if (part.is_leaf()) return 0.0;
    if (auto it = counts_.find(part.bits()); it != counts_.end()) return it->second;
    double total = 0.0;
    for (ArcId id : usable(part)) {
      const auto& a = graph_.arc(id);
      total += count(a.left) * count(a.right);
      if (total > limit_) break;
    }
    counts_[part.bits()] = total;
    return total;
  }

  // Arc ids of every tree of `part`, root-most arc first.
  std::vector<std::vector<ArcId>> trees(SubAssembly part) {
    if (goal_.contains_part(part)) return {{}};
    std::vector<std::vector<ArcId>> out;
    for (ArcId id : usable(part)) {
      const auto& a = graph_.arc(id);
      auto left = trees(a.left);
      if (left.empty()) continue;
      auto right = trees(a.right);
      for (const auto& l : left)
        for (const auto& r : right) {
          std::vector<ArcId> t{id};
          t.insert(t.end(), l.begin(), l.end());
          t.insert(t.end(), r.begin(), r.end());
          out.push_back(std::move(t));
        }
    }
    return out;
  }

 private:
  std::vector<ArcId> usable(SubAssembly part) const {
    std::vector<ArcId> out;
    for (ArcId id : graph_.arcs_from(part)) {
      if (!graph_.active(id)) continue;
      const auto& a = graph_.arc(id);
      bool ok = true;
      for (auto g : goal_.parts()) {
        if (a.left.overlaps(g) && !a.left.contains(g)) ok = false;
        if (a.right.overlaps(g) && !a.right.contains(g)) ok = false;
      }
      if (ok) out.push_back(id);
    }
    return out;
  }

  const AndOrGraph& graph_;
  const Configuration& goal_;
  double limit_;
  std::unordered_map<std::uint64_t, double> counts_;
};

}  // namespace

std::vector<AllocationPlan> enumerate_plans(const AndOrGraph& graph, const Configuration& goal, std::size_t limit) {
  if (goal.covered() != graph.root()) throw InvariantViolation("goal configuration must cover every piece");
  Enumerator e(graph, goal, limit);
  const double n = e.count(graph.root());
  if (n > static_cast<double>(limit))
    throw TooLarge("more than " + std::to_string(limit) + " plans; refusing to enumerate");

  std::vector<AllocationPlan> plans;
  for (const auto& tree : e.trees(graph.root())) {
    // Children always come after their father in `tree`, so the reverse is a
    // valid assembly order.
    AllocationPlan plan;
    Configuration config = goal;
    for (auto it = tree.rbegin(); it != tree.rend(); ++it) {
      const auto& a = graph.arc(*it);
      config = config.join(a.left, a.right);
      plan.steps.push_back({a.action, a.agent, a.id, graph.cost(a.id), config});
    }
    plan.total_cost = plan_cost(plan.steps);
    plans.push_back(std::move(plan));
  }
  return plans;
}

}  // namespace ergoalloc
