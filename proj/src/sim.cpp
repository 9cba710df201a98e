#include "ergoalloc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "ergoalloc/errors.hpp"

namespace ergoalloc {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

/// Uniform in [0, 1), a pure function of its inputs.
double unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0, std::uint64_t d = 0) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ a);
  h = splitmix(h ^ b);
  h = splitmix(h ^ c);
  h = splitmix(h ^ d);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

int primary_axis(Axis a) {
  switch (a) {
    case Axis::x: return 0;
    case Axis::z: return 2;
    default: return 1;
  }
}

// Posture in the middle of `score`'s band, jittered by less than a quarter of
// the band half-width so the score never changes.
JointPosture posture_in_band(const ScoringTable& table, Joint j, int score, double u_primary, double u_a,
                             double u_b) {
  const double mid = table.band_midpoint(j, score);
  const double hw = table.band_half_width(j, score);
  const double amp = std::min(2.0, 0.25 * hw);
  JointPosture p;
  const int axis = primary_axis(table.table(j).axis);
  int slot = 0;
  for (int a = 0; a < 3; ++a) {
    if (a == axis) {
      p.q[a] = mid + amp * (2.0 * u_primary - 1.0);
    } else {
      p.q[a] = std::min(1.0, amp) * (2.0 * (slot++ == 0 ? u_a : u_b) - 1.0);
    }
  }
  return p;
}

}  // namespace

void SimClock::advance(double dt) {
  if (!(dt >= 0.0)) throw DomainError("the simulated clock cannot move backwards");
  now_ += dt;
}

double SimClock::quantize(double seconds) { return std::round(seconds / kTick) * kTick; }

Trajectory synthesize_trajectory(const SynthTemplate& tmpl, const ScoringTable& table, std::uint64_t seed,
                                 std::string_view key, int execution) {
  if (!(tmpl.duration > 0.0)) throw DomainError("synthetic trajectory duration must be positive");
  if (tmpl.levels.empty()) throw DomainError("synthetic trajectory needs at least one score level");
  if (tmpl.others_low > tmpl.others_high) throw DomainError("others_low must not exceed others_high");
  if (!(tmpl.segment > 0.0)) throw DomainError("segment length must be positive");
  if (execution < 0 || tmpl.jitter_ticks < 0) throw DomainError("execution index and jitter must be non-negative");
  for (int level : tmpl.levels) {
    RulaScore{level};
    table.band_midpoint(tmpl.dominant, level);
  }
  for (Joint j : kJoints) {
    if (j == tmpl.dominant) continue;
    for (int b = tmpl.others_low; b <= tmpl.others_high; ++b) {
      RulaScore{b};
      table.band_midpoint(j, b);
    }
  }

  const std::uint64_t k = fnv1a(key);
  const long base_ticks = std::max(1L, std::lround(tmpl.duration / SimClock::kTick));
  const long ticks = base_ticks + execution % (tmpl.jitter_ticks + 1);
  const int n_levels = static_cast<int>(tmpl.levels.size());
  const int others_span = tmpl.others_high - tmpl.others_low + 1;

  Trajectory out;
  out.reserve(ticks + 1);
  for (long s = 0; s <= ticks; ++s) {
    PostureSample sample;
    sample.t = static_cast<double>(s) * SimClock::kTick;
    const auto segment = static_cast<std::uint64_t>(std::floor(sample.t / tmpl.segment));
    for (Joint j : kJoints) {
      int band;
      if (j == tmpl.dominant) {
        band = tmpl.levels[std::min<long>(n_levels - 1, s * n_levels / base_ticks)];
      } else {
        band = tmpl.others_low +
               static_cast<int>(unit(seed, k, 1 + index(j), segment) * others_span) % others_span;
      }
      const auto ex = static_cast<std::uint64_t>(execution);
      sample.q[index(j)] = posture_in_band(table, j, band, unit(seed, k, ex, s, 10 + index(j)),
                                           unit(seed, k, ex, s, 20 + index(j)), unit(seed, k, ex, s, 30 + index(j)));
    }
    out.push_back(sample);
  }
  return out;
}

ScoreTrace load_execution(const TrajectorySource& source, const ScoringTable& table, std::uint64_t seed,
                          std::string_view key, int execution, const std::string& base_dir) {
  if (const auto* tmpl = std::get_if<SynthTemplate>(&source))
    return score_trajectory(synthesize_trajectory(*tmpl, table, seed, key, execution), table);
  std::filesystem::path path = std::get<std::string>(source);
  if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
  return read_trace_file(path.string(), table);
}

ExecutionOutcome execute_human_action(SimClock& clock, KWearState state, const ScoreTrace& trajectory,
                                      const KWearParams& params, const TickObserver& observer) {
  state.t = clock.now();
  state = integrate_trajectory(state, trajectory, WearMode::charge, params, observer);
  const double elapsed = trace_duration(trajectory);
  clock.advance(elapsed);
  state.t = clock.now();
  return {state, elapsed};
}

ExecutionOutcome execute_robot_action(SimClock& clock, KWearState state, double duration, const KWearParams& params,
                                      const TickObserver& observer) {
  if (!(duration >= 0.0)) throw DomainError("robot duration must be non-negative");
  const double d = SimClock::quantize(duration);
  const double t0 = clock.now();
  const KWearState start = state;
  if (observer) {
    const long ticks = std::lround(d / SimClock::kTick);
    for (long k = 1; k <= ticks; ++k) {
      KWearState s = start;
      for (double& v : s.v) v = recovery_step(v, k * SimClock::kTick, params);
      s.t = t0 + k * SimClock::kTick;
      observer(s);
    }
  }
  for (double& v : state.v) v = recovery_step(v, d, params);
  clock.advance(d);
  state.t = clock.now();
  return {state, d};
}

TaktOutcome takt_pause(SimClock& clock, KWearState state, double repetition_elapsed, const TaktConfig& cfg,
                       const KWearParams& params, const TickObserver& observer) {
  TaktOutcome out;
  out.state = state;
  if (!cfg.t_takt) return out;
  out.skipped = false;
  const double remainder = SimClock::quantize(*cfg.t_takt - repetition_elapsed);
  if (remainder <= 0.0) {
    out.violated = repetition_elapsed > *cfg.t_takt;
    return out;
  }
  auto rest = execute_robot_action(clock, state, remainder, params, observer);
  out.state = rest.state;
  out.paused = rest.elapsed;
  return out;
}

}  // namespace ergoalloc
