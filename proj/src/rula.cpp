#include "ergoalloc/rula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergoalloc/errors.hpp"

namespace ergoalloc {

namespace {
constexpr double kOpen = std::numeric_limits<double>::infinity();
}

std::string_view to_string(Joint j) {
  switch (j) {
    case Joint::shoulder: return "shoulder";
    case Joint::elbow: return "elbow";
    case Joint::wrist: return "wrist";
    case Joint::trunk: return "trunk";
    case Joint::neck: return "neck";
  }
  return "?";
}

Joint parse_joint(std::string_view name) {
  for (Joint j : kJoints)
    if (to_string(j) == name) return j;
  throw DomainError("unknown joint '" + std::string(name) + "'");
}

RulaScore::RulaScore(int value) : value_(value) {
  if (value < kMin || value > kMax) throw DomainError("RULA score " + std::to_string(value) + " outside [1, 6]");
}

ScoringTable ScoringTable::defaults() {
  ScoringTable t;
  // Upper arm flexion.
  t.set(Joint::shoulder, {Axis::y, {{0, 20, 1}, {20, 45, 2}, {45, 90, 3}, {90, kOpen, 4}}});
  // Lower arm: 60-100 deg of flexion is the neutral band.
  t.set(Joint::elbow, {Axis::y, {{0, 60, 2}, {60, 100, 1}, {100, kOpen, 2}}});
  t.set(Joint::wrist, {Axis::y, {{0, 5, 1}, {5, 15, 2}, {15, kOpen, 3}}});
  // Scored on the largest absolute rotation: bending and twisting alike.
  t.set(Joint::trunk, {Axis::max_abs, {{0, 5, 1}, {5, 20, 2}, {20, 60, 3}, {60, kOpen, 4}}});
  t.set(Joint::neck, {Axis::y, {{0, 10, 1}, {10, 20, 2}, {20, kOpen, 3}}});
  return t;
}

void ScoringTable::set(Joint j, JointTable table) {
  if (table.bands.empty()) throw DomainError("scoring table for " + std::string(to_string(j)) + " has no bands");
  double expect = 0.0;
  for (std::size_t i = 0; i < table.bands.size(); ++i) {
    auto& b = table.bands[i];
    if (i + 1 == table.bands.size()) b.upper = kOpen;
    if (b.lower != expect || !(b.upper > b.lower))
      throw DomainError("scoring bands for " + std::string(to_string(j)) + " must be ascending and contiguous from 0");
    b.score = std::clamp(b.score, RulaScore::kMin, RulaScore::kMax);
    expect = b.upper;
  }
  tables_[index(j)] = std::move(table);
  present_[index(j)] = true;
}

const JointTable& ScoringTable::table(Joint j) const {
  if (!has(j)) throw DomainError("no scoring table for joint " + std::string(to_string(j)));
  return tables_[index(j)];
}

const AngleBand& ScoringTable::band_for(Joint j, int score) const {
  for (const auto& b : table(j).bands)
    if (b.score == score) return b;
  throw DomainError("joint " + std::string(to_string(j)) + " has no band scoring " + std::to_string(score));
}

double ScoringTable::band_midpoint(Joint j, int score) const {
  const auto& b = band_for(j, score);
  return std::isinf(b.upper) ? b.lower + 15.0 : 0.5 * (b.lower + b.upper);
}

double ScoringTable::band_half_width(Joint j, int score) const {
  const auto& b = band_for(j, score);
  return std::isinf(b.upper) ? 15.0 : 0.5 * (b.upper - b.lower);
}

int ScoringTable::max_score(Joint j) const {
  int m = RulaScore::kMin;
  for (const auto& b : table(j).bands) m = std::max(m, b.score);
  return m;
}

double measured_angle(const JointTable& table, const JointPosture& posture) {
  switch (table.axis) {
    case Axis::x: return std::abs(posture.q[0]);
    case Axis::y: return std::abs(posture.q[1]);
    case Axis::z: return std::abs(posture.q[2]);
    case Axis::max_abs:
      return std::max({std::abs(posture.q[0]), std::abs(posture.q[1]), std::abs(posture.q[2])});
  }
  return 0.0;
}

RulaScore rula_score(const ScoringTable& table, Joint joint, const JointPosture& posture) {
  for (double a : posture.q)
    if (!std::isfinite(a)) throw DomainError("posture angles must be finite");
  const auto& t = table.table(joint);
  const double angle = measured_angle(t, posture);
  for (const auto& b : t.bands)
    if (angle < b.upper) return RulaScore(b.score);
  return RulaScore(t.bands.back().score);
}

}  // namespace ergoalloc
