#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ergoalloc/aog.hpp"

namespace ergoalloc {

struct PlanStep {
  ActionId action = 0;
  WorkerId agent = 0;
  ArcId arc = 0;
  double cost = 0.0;
  Configuration result;  // configuration after this step
};

/// Steps in execution order: the first one applies to the goal configuration
/// and the last one yields the complete assembly.
struct AllocationPlan {
  std::vector<PlanStep> steps;
  double total_cost = 0.0;
};

struct SearchStats {
  std::size_t expanded = 0;   // states popped and expanded
  std::size_t generated = 0;  // successor evaluations, duplicates included
  std::size_t stored = 0;     // distinct configurations created
  double wall_seconds = 0.0;
};

struct SearchLimits {
  /// Throws SearchTimeout once exceeded.
  std::optional<double> time_budget_seconds;
};

/// Sum of step costs, added in ascending order so that equal cost multisets
/// give bit-identical totals.
double plan_cost(const std::vector<PlanStep>& steps);

/// Uniform-cost AO* over configurations, from the complete assembly `start`
/// down to `goal`. Ties are broken by the lexicographically smallest
/// configuration and then the lowest arc id. Throws NoFeasiblePlan when the
/// goal cannot be reached over active arcs.
AllocationPlan ao_star(const AndOrGraph& graph, const Configuration& start, const Configuration& goal,
                       SearchStats* stats = nullptr, const SearchLimits& limits = {});

/// Counters of the most recent ao_star call on this thread.
SearchStats search_stats();

using CostRefresh = std::function<CostSnapshot(const AndOrGraph&)>;

struct NextAction {
  ActionId action = 0;
  WorkerId agent = 0;
  ArcId arc = 0;
  AllocationPlan plan;  // full plan from `current`
  SearchStats stats;
};

/// Refreshes the cost table, plans from the complete assembly to `current`
/// and returns the step executable from `current`. Throws TerminalState when
/// `current` is already assembled.
NextAction recursive_ao_star(AndOrGraph& graph, const Configuration& current, const CostRefresh& cost_refresh,
                             const SearchLimits& limits = {});

/// Every distinct decomposition tree from the complete assembly down to
/// `goal`, with its cost. Throws TooLarge above `limit` plans.
std::vector<AllocationPlan> enumerate_plans(const AndOrGraph& graph, const Configuration& goal,
                                            std::size_t limit = 1'000'000);

}  // namespace ergoalloc
