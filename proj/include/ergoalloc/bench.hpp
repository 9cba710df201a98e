#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace ergoalloc {

enum class Family { sequential, scarce };

std::string to_string(Family f);

struct BenchConfig {
  bool sequential = true;
  bool scarce = true;
  int pieces_min = 2;
  int pieces_max = 20;
  int pieces_agents = 2;  // agents during the piece sweeps
  bool agent_sweep = true;
  int agents_min = 2;
  int agents_max = 30;
  int agent_sweep_pieces = 10;
  int seeds = 3;
  std::uint64_t seed = 1;
  double time_budget = 30.0;  // seconds per point

  /// Throws DomainError for empty ranges or non-positive counts.
  void validate() const;
};

struct BenchPoint {
  std::string sweep;  // "pieces" or "agents"
  Family family = Family::sequential;
  int pieces = 0;
  int agents = 0;
  std::size_t nodes = 0;
  std::size_t arcs = 0;
  double expanded = 0.0;  // medians over seeds
  double generated = 0.0;
  double wall_seconds = 0.0;
  bool timed_out = false;
};

/// Runs every configured point, searching from the complete assembly down to
/// single pieces under uniform(0, 100) costs drawn from a per-point seed.
/// `progress` is called after each point.
std::vector<BenchPoint> run_bench(const BenchConfig& cfg,
                                  const std::function<void(const BenchPoint&)>& progress = {});

void write_bench_csv(std::ostream& out, const std::vector<BenchPoint>& points);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Throws DomainError for
/// fewer than two points or constant x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Coefficient of determination of `predicted` against `observed`.
double r_squared(const std::vector<double>& observed, const std::vector<double>& predicted);

}  // namespace ergoalloc
