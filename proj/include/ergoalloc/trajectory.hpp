#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ergoalloc/kwear.hpp"
#include "ergoalloc/rula.hpp"

namespace ergoalloc {

struct PostureSample {
  double t = 0.0;
  PerJoint<JointPosture> q{};
};
using Trajectory = std::vector<PostureSample>;

ScoreTrace score_trajectory(const Trajectory& trajectory, const ScoringTable& table);

// Tabular text with a header row. Posture files carry `t_seconds` plus
// `<joint>_<axis>` columns for all five joints and three axes; pre-scored
// files carry `t_seconds` plus `<joint>_score`. Lines starting with '#' are
// comments.

/// Reads either variant and returns per-sample scores. Throws ParseError on
/// malformed content and DataError on unordered timestamps.
ScoreTrace read_trace(std::istream& in, const ScoringTable& table, const std::string& source = "<stream>");
ScoreTrace read_trace_file(const std::string& path, const ScoringTable& table);

/// Posture variant only; throws ParseError for pre-scored input.
Trajectory read_trajectory(std::istream& in, const std::string& source = "<stream>");

void write_trajectory(std::ostream& out, const Trajectory& trajectory);
void write_scores(std::ostream& out, const ScoreTrace& trace);

}  // namespace ergoalloc
