#pragma once

#include <map>
#include <string>
#include <vector>

#include "ergoalloc/aog.hpp"
#include "ergoalloc/rula.hpp"

namespace ergoalloc {

/// Maps predicted wear to human arc costs and fixes robot arc costs.
struct CostPolicy {
  PerJoint<double> v_th{0.8, 0.8, 0.8, 0.8, 0.8};
  double gamma = 100.0;
  double v_max = 0.993;
  /// Constant cost per worker; entries for the human are ignored.
  std::vector<double> robot_cost;

  /// Throws DomainError unless every threshold is in (0, 1), gamma > v_max
  /// and robot costs are non-negative.
  void validate() const;
  /// robot_cost + (m - 1) < gamma for every robot: an over-threshold human
  /// arc always loses to the robot alternative.
  bool guards_threshold() const;
};

/// Static allocation from offline whole-action RULA scores.
struct BaselineRulaPolicy {
  static constexpr double kGMax = 9.0;
  std::map<std::string, int> action_scores;
  double g_max = kGMax;
  double g_th = 0.8 * kGMax;
};

}  // namespace ergoalloc
