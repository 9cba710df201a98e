#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergoalloc/aog.hpp"
#include "ergoalloc/calibration.hpp"
#include "ergoalloc/kwear.hpp"
#include "ergoalloc/policy.hpp"
#include "ergoalloc/scenario.hpp"
#include "ergoalloc/search.hpp"
#include "ergoalloc/sim.hpp"

namespace ergoalloc {

struct HumanCost {
  double cost = 0.0;
  PerJoint<double> vhat{};
};

/// Sum over joints of the predicted wear after `action`, plus gamma for every
/// joint whose prediction reaches its threshold. Throws CalibrationMissing.
HumanCost human_action_cost(const KWearState& state, const std::string& action, const CalibrationProfile& profile,
                            const CostPolicy& policy);

/// Sets every active human arc from the predicted wear and every active robot
/// arc to its constant, then returns the resulting cost table.
CostSnapshot refresh_costs(AndOrGraph& graph, const KWearState& state, const CalibrationProfile& profile,
                           const CostPolicy& policy);

struct TraceRecord {
  int repetition = 0;
  int step = 0;
  std::string action;
  std::string agent;
  WorkerKind kind = WorkerKind::human;
  std::optional<PerJoint<double>> vhat;  // absent for uncalibrated actions
  std::optional<double> human_cost;      // absent when the human arc is pruned
  std::optional<double> robot_cost;      // cheapest active robot arc
  double chosen_cost = 0.0;
  PerJoint<double> wear_after{};
  double elapsed = 0.0;
  double clock = 0.0;  // simulated time at completion
  std::size_t expanded = 0;
  std::size_t generated = 0;
  double search_seconds = 0.0;
  std::string note;
};

struct RepetitionRecord {
  int repetition = 0;
  double elapsed = 0.0;  // actions plus takt pause
  double paused = 0.0;
  bool takt_violated = false;
};

struct WearSample {
  double t = 0.0;
  PerJoint<double> v{};
};

struct AllocationTrace {
  std::vector<TraceRecord> records;
  std::vector<RepetitionRecord> repetitions;
  std::vector<WearSample> wear;  // every simulated tick
  KWearState final_state;
};

struct CollaborationOptions {
  int repetitions = 1;
  bool record_wear = true;
  SearchLimits limits;
};

/// Runs the allocate-execute loop. KWear persists across repetitions. If a
/// search fails, the error propagates; `partial` (when given) keeps what was
/// executed until then.
AllocationTrace run_collaboration(AndOrGraph& graph, const Scenario& scenario, const CalibrationProfile& profile,
                                  const CollaborationOptions& options, AllocationTrace* partial = nullptr);

/// Labels of actions the human can be assigned to in `graph`.
std::vector<std::string> human_actions(const AndOrGraph& graph);

struct ActionCalibration {
  std::string action;
  CalibrationResult result;
};

/// Calibrates every human-assignable action from the scenario's recorded
/// executions and returns the profile (non-converged entries included).
CalibrationProfile calibrate_scenario(const AndOrGraph& graph, const Scenario& scenario, int eta0, int eta_max,
                                      double err_target, std::vector<ActionCalibration>* details = nullptr);

/// Robot iff the offline score exceeds g_th. Throws DomainError when an
/// action has no score.
std::map<std::string, WorkerKind> baseline_rula_allocate(const BaselineRulaPolicy& policy,
                                                         const std::vector<std::string>& actions);

}  // namespace ergoalloc
