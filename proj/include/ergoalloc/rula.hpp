#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace ergoalloc {

/// Upper-body joints scored by RULA tables.
enum class Joint { shoulder, elbow, wrist, trunk, neck };

inline constexpr int kJointCount = 5;
inline constexpr std::array<Joint, kJointCount> kJoints{Joint::shoulder, Joint::elbow, Joint::wrist,
                                                        Joint::trunk, Joint::neck};

template <class T>
using PerJoint = std::array<T, kJointCount>;

constexpr int index(Joint j) { return static_cast<int>(j); }
std::string_view to_string(Joint j);
/// Throws DomainError for names outside the five joints.
Joint parse_joint(std::string_view name);

/// Rotation angles about x, y, z in degrees.
struct JointPosture {
  std::array<double, 3> q{0.0, 0.0, 0.0};
};

/// Per-joint RULA risk score in [1, 6].
class RulaScore {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 6;
  /// Throws DomainError outside [1, 6].
  explicit RulaScore(int value);
  int value() const { return value_; }
  bool operator==(const RulaScore&) const = default;

 private:
  int value_;
};

enum class Axis { x, y, z, max_abs };

/// Angles in [lower, upper) score `score`. The last band is open-ended.
struct AngleBand {
  double lower = 0.0;
  double upper = 0.0;
  int score = 1;
};

struct JointTable {
  Axis axis = Axis::y;
  std::vector<AngleBand> bands;  // ascending, contiguous, starting at 0
};

/// Piecewise-constant angle-to-score lookup per joint. The measured angle is
/// the absolute value of the configured axis (or the largest absolute angle).
class ScoringTable {
 public:
  ScoringTable() = default;
  static ScoringTable defaults();

  void set(Joint j, JointTable table);
  bool has(Joint j) const { return present_[index(j)]; }
  const JointTable& table(Joint j) const;

  /// Angle (degrees, non-negative) at the middle of the first band scoring
  /// `score`; open-ended bands use lower + 15. Throws DomainError if no band
  /// of `joint` yields `score`.
  double band_midpoint(Joint j, int score) const;
  /// Half-width of that band, 15 for the open-ended one.
  double band_half_width(Joint j, int score) const;
  int max_score(Joint j) const;

 private:
  const AngleBand& band_for(Joint j, int score) const;
  PerJoint<JointTable> tables_{};
  PerJoint<bool> present_{};
};

double measured_angle(const JointTable& table, const JointPosture& posture);

/// Throws DomainError for non-finite angles or joints missing from `table`.
RulaScore rula_score(const ScoringTable& table, Joint joint, const JointPosture& posture);

}  // namespace ergoalloc
