#include "ergoalloc/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>

#include "ergoalloc/errors.hpp"

namespace ergoalloc {

using nlohmann::json;

void CalibrationProfile::set(const std::string& action, CalibrationEntry entry) {
  for (double a : entry.alpha)
    if (!(a > 0.0 && a <= 1.0)) throw DomainError("alpha for '" + action + "' outside (0, 1]");
  entries_[action] = entry;
}

const CalibrationEntry& CalibrationProfile::entry(const std::string& action) const {
  auto it = entries_.find(action);
  if (it == entries_.end()) throw CalibrationMissing("no calibration for action '" + action + "'");
  return it->second;
}

void CalibrationProfile::save(std::ostream& out) const {
  json doc;
  doc["schema"] = kSchema;
  json actions = json::object();
  for (const auto& [label, e] : entries_) {
    json alpha = json::object();
    for (Joint j : kJoints) alpha[std::string(to_string(j))] = e.alpha[index(j)];
    actions[label] = {{"alpha", alpha}, {"eta", e.eta}, {"max_error", e.max_error}, {"converged", e.converged}};
  }
  doc["actions"] = actions;
  out << std::setw(2) << doc << '\n';
}

CalibrationProfile CalibrationProfile::load(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("calibration profile: ") + e.what());
  }
  try {
    if (doc.at("schema").get<int>() != kSchema) throw ParseError("calibration profile: unsupported schema");
    CalibrationProfile p;
    for (const auto& [label, e] : doc.at("actions").items()) {
      CalibrationEntry entry;
      for (Joint j : kJoints) entry.alpha[index(j)] = e.at("alpha").at(std::string(to_string(j))).get<double>();
      entry.eta = e.value("eta", 0);
      entry.max_error = e.value("max_error", 0.0);
      entry.converged = e.value("converged", true);
      p.set(label, entry);
    }
    return p;
  } catch (const json::exception& e) {
    throw ParseError(std::string("calibration profile: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("calibration profile: ") + e.what());
  }
}

CalibrationProfile CalibrationProfile::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open calibration profile '" + path + "'");
  return load(in);
}

CalibrationResult calibrate(const ExecutionSource& source, int eta0, int eta_max, double err_target,
                            const KWearParams& params) {
  if (eta0 < 2) throw DomainError("calibration needs at least two executions (eta0 >= 2)");
  if (eta_max < eta0) throw DomainError("eta_max must not be smaller than eta0");
  if (!(err_target > 0.0)) throw DomainError("target prediction error must be positive");
  if (source.available() < eta0)
    throw DataError("only " + std::to_string(source.available()) + " executions available, eta0 = " +
                    std::to_string(eta0));
  eta_max = std::min(eta_max, source.available());

  std::vector<ScoreTrace> executions;
  // Terminal wear of each execution from rest. Scores are piecewise constant,
  // so 1 - exp(-integral/C) is the exact solution of the charge equation.
  std::vector<PerJoint<double>> recorded;
  auto record = [&](int l) {
    executions.push_back(source.record(l));
    PerJoint<double> v{};
    for (Joint j : kJoints) v[index(j)] = 1.0 - execution_alpha(executions.back(), j, params);
    recorded.push_back(v);
  };
  for (int l = 0; l < eta0 - 1; ++l) record(l);

  CalibrationResult best;
  best.max_error = INFINITY;
  for (int eta = eta0; eta <= eta_max; ++eta) {
    record(eta - 1);

    CalibrationEntry entry;
    entry.eta = eta;
    double worst = 0.0;
    for (Joint j : kJoints) {
      const double alpha = compute_alpha(executions, j, params);
      entry.alpha[index(j)] = alpha;
      const double predicted = predict(0.0, alpha);
      for (const auto& r : recorded) worst = std::max(worst, std::abs(predicted - r[index(j)]));
    }
    entry.max_error = worst;
    entry.converged = worst <= err_target;

    if (worst < best.max_error || entry.converged) best = {entry, eta, worst, entry.converged};
    if (entry.converged) break;
  }
  return best;
}

}  // namespace ergoalloc
