#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ergoalloc/rula.hpp"

namespace ergoalloc {

/// Constants of the Kinematic Wear model.
///
/// The capacity C is chosen so that a joint held at the average score G_avg
/// charges from 0 to V_max in T_max seconds; the recovery rate r discharges
/// V_max back to 1 - V_max in the same T_max.
class KWearParams {
 public:
  KWearParams() : KWearParams(240.0, 0.993, 3.0) {}
  /// Throws DomainError unless t_max > 0, 0.5 < v_max < 1 and g_avg > 0.
  KWearParams(double t_max, double v_max, double g_avg);

  double t_max() const { return t_max_; }
  double v_max() const { return v_max_; }
  double g_avg() const { return g_avg_; }
  /// C = -G_avg * T_max / ln(1 - V_max)
  double capacity() const { return capacity_; }
  /// r = -(C / T_max) * ln((1 - V_max) / V_max)
  double recovery_rate() const { return recovery_rate_; }

 private:
  double t_max_;
  double v_max_;
  double g_avg_;
  double capacity_;
  double recovery_rate_;
};

/// Wear after holding score `g` for `dt` seconds, starting from `v`:
/// 1 - (1 - v) exp(-g dt / C). Throws DomainError for dt < 0 or v outside [0, 1).
double charge_step(double v, RulaScore g, double dt, const KWearParams& params);

/// Wear after resting for `dt` seconds: v exp(-r dt / C).
double recovery_step(double v, double dt, const KWearParams& params);

struct KWearState {
  PerJoint<double> v{};
  double t = 0.0;
};

/// Per-joint scores sampled at time t. Scores hold until the next sample.
struct ScoreSample {
  double t = 0.0;
  PerJoint<int> g{1, 1, 1, 1, 1};
};
using ScoreTrace = std::vector<ScoreSample>;

enum class WearMode { charge, recovery };

/// Called after every sample interval with the updated state.
using WearObserver = std::function<void(const KWearState&)>;

/// Integrates the trace interval by interval, each with the score of its left
/// sample. Throws DataError if timestamps decrease.
KWearState integrate_trajectory(KWearState state, std::span<const ScoreSample> samples, WearMode mode,
                                const KWearParams& params, const WearObserver& observer = {});

/// Duration covered by the trace (last minus first timestamp).
double trace_duration(std::span<const ScoreSample> samples);

/// Left-endpoint Riemann sum of one joint's score over the trace.
double score_integral(std::span<const ScoreSample> samples, Joint joint);

/// Predicted wear after an action with parameter alpha: 1 - alpha (1 - v).
double predict(double v, double alpha);

/// exp(-integral(G)/C) for one execution.
double execution_alpha(std::span<const ScoreSample> execution, Joint joint, const KWearParams& params);

/// Mean of execution_alpha over the executions. Throws DataError for an
/// empty execution list or an empty execution.
double compute_alpha(std::span<const ScoreTrace> executions, Joint joint, const KWearParams& params);

}  // namespace ergoalloc
