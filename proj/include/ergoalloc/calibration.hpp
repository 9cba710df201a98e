#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>

#include "ergoalloc/kwear.hpp"

namespace ergoalloc {

/// Prediction parameters of one action. beta is always 1 - alpha.
struct CalibrationEntry {
  PerJoint<double> alpha{1.0, 1.0, 1.0, 1.0, 1.0};
  int eta = 0;
  double max_error = 0.0;
  bool converged = true;

  double beta(Joint j) const { return 1.0 - alpha[index(j)]; }
};

/// Calibrated alpha per (action label, joint).
class CalibrationProfile {
 public:
  static constexpr int kSchema = 1;

  void set(const std::string& action, CalibrationEntry entry);
  bool has(const std::string& action) const { return entries_.contains(action); }
  /// Throws CalibrationMissing.
  const CalibrationEntry& entry(const std::string& action) const;
  double alpha(const std::string& action, Joint j) const { return entry(action).alpha[index(j)]; }
  const std::map<std::string, CalibrationEntry>& entries() const { return entries_; }

  void save(std::ostream& out) const;
  /// Throws ParseError.
  static CalibrationProfile load(std::istream& in);
  static CalibrationProfile load_file(const std::string& path);

 private:
  std::map<std::string, CalibrationEntry> entries_;
};

/// Supplies recorded executions of one action, each from rest.
class ExecutionSource {
 public:
  virtual ~ExecutionSource() = default;
  virtual int available() const = 0;
  virtual ScoreTrace record(int execution) const = 0;
};

struct CalibrationResult {
  CalibrationEntry entry;  // best profile seen; entry.converged tells success
  int eta = 0;
  double max_error = 0.0;
  bool converged = false;
};

/// Adds executions, starting from eta0, until every recorded terminal wear is
/// predicted within err_target or eta_max executions are used. Executions
/// beyond source.available() are never requested.
///
/// Throws DomainError for eta0 < 2, eta_max < eta0 or err_target <= 0, and
/// DataError if fewer than eta0 executions are available.
CalibrationResult calibrate(const ExecutionSource& source, int eta0, int eta_max, double err_target,
                            const KWearParams& params);

}  // namespace ergoalloc
