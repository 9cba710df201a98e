#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ergoalloc/kwear.hpp"
#include "ergoalloc/rula.hpp"
#include "ergoalloc/trajectory.hpp"

namespace ergoalloc {

/// Simulated 20 Hz clock. Time never decreases.
class SimClock {
 public:
  static constexpr double kTick = 0.05;

  double now() const { return now_; }
  /// Throws DomainError for negative dt.
  void advance(double dt);
  static double quantize(double seconds);

 private:
  double now_ = 0.0;
};

/// Recipe for a synthetic posture stream: the dominant joint runs through
/// `levels` (equal-length segments, RULA score per segment) while every
/// other joint sits in a band between others_low and others_high, redrawn
/// every `segment` seconds.
struct SynthTemplate {
  Joint dominant = Joint::shoulder;
  std::vector<int> levels{3};
  double duration = 10.0;
  int others_low = 1;
  int others_high = 2;
  double segment = 1.0;
  /// Execution l lasts (l mod (jitter_ticks + 1)) ticks longer.
  int jitter_ticks = 1;
};

/// Deterministic in (tmpl, seed, key, execution). The band layout depends on
/// (seed, key) only; `execution` varies duration and angle jitter. Throws
/// DomainError for bands the scoring table cannot produce.
Trajectory synthesize_trajectory(const SynthTemplate& tmpl, const ScoringTable& table, std::uint64_t seed,
                                 std::string_view key = {}, int execution = 0);

/// Where one recorded execution comes from.
using TrajectorySource = std::variant<std::string, SynthTemplate>;

/// Loads a file (resolved against base_dir) or synthesizes. Throws DataError
/// for missing files.
ScoreTrace load_execution(const TrajectorySource& source, const ScoringTable& table, std::uint64_t seed,
                          std::string_view key, int execution, const std::string& base_dir = {});

struct ActionExecutionSpec {
  std::string action;
  std::vector<TrajectorySource> executions;  // human recordings, cycled per repetition
};

/// Invoked with the wear state at every tick/sample while the clock moves.
using TickObserver = std::function<void(const KWearState&)>;

struct ExecutionOutcome {
  KWearState state;
  double elapsed = 0.0;
};

/// Charges wear along the human trajectory and advances the clock by its
/// duration.
ExecutionOutcome execute_human_action(SimClock& clock, KWearState state, const ScoreTrace& trajectory,
                                      const KWearParams& params, const TickObserver& observer = {});

/// The human rests while the robot works: recovery over the (tick-quantized)
/// duration. Throws DomainError for a negative duration.
ExecutionOutcome execute_robot_action(SimClock& clock, KWearState state, double duration, const KWearParams& params,
                                      const TickObserver& observer = {});

struct TaktConfig {
  std::optional<double> t_takt;
};

struct TaktOutcome {
  KWearState state;
  double paused = 0.0;
  bool skipped = true;    // no takt configured
  bool violated = false;  // repetition overran the takt time
};

/// Rests for the remainder of the takt period, if any.
TaktOutcome takt_pause(SimClock& clock, KWearState state, double repetition_elapsed, const TaktConfig& cfg,
                       const KWearParams& params, const TickObserver& observer = {});

}  // namespace ergoalloc
