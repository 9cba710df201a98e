#include "ergoalloc/kwear.hpp"

#include <cmath>
#include <string>

#include "ergoalloc/errors.hpp"

namespace ergoalloc {

namespace {

// Largest double below 1; wear never reaches the asymptote.
const double kBelowOne = std::nextafter(1.0, 0.0);

void check_level(double v) {
  if (!(v >= 0.0 && v < 1.0)) throw DomainError("wear level " + std::to_string(v) + " outside [0, 1)");
}

void check_dt(double dt) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw DomainError("time step must be finite and non-negative");
}

}  // namespace

KWearParams::KWearParams(double t_max, double v_max, double g_avg) : t_max_(t_max), v_max_(v_max), g_avg_(g_avg) {
  if (!(t_max > 0.0) || !(v_max > 0.5 && v_max < 1.0) || !(g_avg > 0.0))
    throw DomainError("KWear parameters require T_max > 0, 0.5 < V_max < 1 and G_avg > 0");
  capacity_ = -g_avg_ * t_max_ / std::log(1.0 - v_max_);
  recovery_rate_ = -(capacity_ / t_max_) * std::log((1.0 - v_max_) / v_max_);
}

double charge_step(double v, RulaScore g, double dt, const KWearParams& params) {
  check_level(v);
  check_dt(dt);
  double out = 1.0 - (1.0 - v) * std::exp(-g.value() * dt / params.capacity());
  return out < kBelowOne ? out : kBelowOne;
}

double recovery_step(double v, double dt, const KWearParams& params) {
  check_level(v);
  check_dt(dt);
  return v * std::exp(-params.recovery_rate() * dt / params.capacity());
}

KWearState integrate_trajectory(KWearState state, std::span<const ScoreSample> samples, WearMode mode,
                                const KWearParams& params, const WearObserver& observer) {
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const double dt = samples[k + 1].t - samples[k].t;
    if (!(dt >= 0.0)) throw DataError("trajectory timestamps are not ordered at sample " + std::to_string(k + 1));
    for (Joint j : kJoints) {
      double& v = state.v[index(j)];
      v = mode == WearMode::charge ? charge_step(v, RulaScore(samples[k].g[index(j)]), dt, params)
                                   : recovery_step(v, dt, params);
    }
    state.t += dt;
    if (observer) observer(state);
  }
  return state;
}

double trace_duration(std::span<const ScoreSample> samples) {
  return samples.size() < 2 ? 0.0 : samples.back().t - samples.front().t;
}

double score_integral(std::span<const ScoreSample> samples, Joint joint) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const double dt = samples[k + 1].t - samples[k].t;
    if (!(dt >= 0.0)) throw DataError("trajectory timestamps are not ordered at sample " + std::to_string(k + 1));
    sum += samples[k].g[index(joint)] * dt;
  }
  return sum;
}

double predict(double v, double alpha) {
  check_level(v);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  return 1.0 - alpha * (1.0 - v);
}

double execution_alpha(std::span<const ScoreSample> execution, Joint joint, const KWearParams& params) {
  if (execution.empty()) throw DataError("empty execution");
  return std::exp(-score_integral(execution, joint) / params.capacity());
}

double compute_alpha(std::span<const ScoreTrace> executions, Joint joint, const KWearParams& params) {
  if (executions.empty()) throw DataError("no executions to estimate alpha from");
  double sum = 0.0;
  for (const auto& e : executions) sum += execution_alpha(e, joint, params);
  return sum / static_cast<double>(executions.size());
}

}  // namespace ergoalloc
