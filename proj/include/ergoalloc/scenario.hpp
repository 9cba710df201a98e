#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergoalloc/aog.hpp"
#include "ergoalloc/kwear.hpp"
#include "ergoalloc/policy.hpp"
#include "ergoalloc/rula.hpp"
#include "ergoalloc/sim.hpp"

namespace ergoalloc {

/// Everything besides the graph that a collaboration run needs.
struct Scenario {
  static constexpr int kSchema = 1;

  std::string name;
  std::uint64_t seed = 0;
  std::string base_dir;  // trajectory paths are relative to this
  KWearParams kwear;
  CostPolicy policy;
  TaktConfig takt;
  ScoringTable scoring = ScoringTable::defaults();
  /// Human executions per action label.
  std::map<std::string, ActionExecutionSpec> actions;
  /// Nominal seconds per [graph operation][worker]; negative when unset.
  std::vector<std::vector<double>> durations;
  /// Offline whole-action RULA scores for the baseline allocator.
  std::map<std::string, int> baseline_scores;
  std::vector<std::pair<std::string, std::string>> precedence;

  double duration(int operation, WorkerId worker) const;
  /// Execution used when the human performs `action` in `repetition`.
  ScoreTrace human_execution(const std::string& action, int repetition) const;
  /// Calibration recording `execution` of `action`.
  ScoreTrace calibration_execution(const std::string& action, int execution) const;
  int executions_available(const std::string& action) const;
};

struct LoadedScenario {
  AndOrGraph graph;
  Scenario scenario;
};

/// Parses the versioned scenario document. Throws ParseError with the line or
/// field path, InvalidAssembly or InvariantViolation naming the operation.
LoadedScenario parse_scenario(std::string_view text, const std::string& base_dir = {},
                              const std::string& source = "<scenario>");
LoadedScenario load_scenario(const std::string& path);

/// Removes operations that violate precedence pairs (an operation of action b
/// is kept only if one of its inputs can contain a completed operation of
/// every action a with (a, b)), then operations left without a way down to
/// single pieces or up to the root. Returns the indices of kept operations.
std::vector<int> apply_precedence(int piece_count, std::vector<Operation>& ops,
                                  const std::vector<std::pair<ActionId, ActionId>>& precedence);

}  // namespace ergoalloc
