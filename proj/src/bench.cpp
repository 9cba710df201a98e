#include "ergoalloc/bench.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>

#include "ergoalloc/aog.hpp"
#include "ergoalloc/errors.hpp"
#include "ergoalloc/search.hpp"
#include "ergoalloc/text.hpp"

namespace ergoalloc {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

BenchPoint run_point(const BenchConfig& cfg, const std::string& sweep, Family family, int pieces, int agents) {
  AndOrGraph graph = family == Family::sequential ? build_sequential(pieces, make_team(agents))
                                                  : build_scarce(pieces, make_team(agents));
  BenchPoint p;
  p.sweep = sweep;
  p.family = family;
  p.pieces = pieces;
  p.agents = agents;
  p.nodes = graph.nodes().size();
  p.arcs = graph.arcs().size();

  const auto start = Configuration::assembled(pieces);
  const auto goal = Configuration::separated(pieces);
  std::vector<double> expanded, generated, wall;
  for (int s = 0; s < cfg.seeds; ++s) {
    std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(family), static_cast<std::uint64_t>(pieces),
                      static_cast<std::uint64_t>(agents), static_cast<std::uint64_t>(s)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> dist(0.0, 100.0);
    CostSnapshot costs(graph.arcs().size());
    for (double& c : costs) c = dist(rng);
    graph.apply(costs);
    SearchStats stats;
    try {
      ao_star(graph, start, goal, &stats, SearchLimits{cfg.time_budget});
    } catch (const SearchTimeout&) {
      p.timed_out = true;
      break;
    }
    expanded.push_back(static_cast<double>(stats.expanded));
    generated.push_back(static_cast<double>(stats.generated));
    wall.push_back(stats.wall_seconds);
  }
  if (!p.timed_out) {
    p.expanded = median(expanded);
    p.generated = median(generated);
    p.wall_seconds = median(wall);
  }
  return p;
}

}  // namespace

std::string to_string(Family f) { return f == Family::sequential ? "sequential" : "scarce"; }

void BenchConfig::validate() const {
  if (pieces_min < 2 || pieces_max < pieces_min || pieces_max > kMaxPieces)
    throw DomainError("piece range must satisfy 2 <= min <= max <= 64");
  if (agents_min < 1 || agents_max < agents_min) throw DomainError("agent range must satisfy 1 <= min <= max");
  if (pieces_agents < 1) throw DomainError("piece sweeps need at least one agent");
  if (agent_sweep_pieces < 2 || agent_sweep_pieces > kMaxPieces)
    throw DomainError("agent sweep piece count must lie in [2, 64]");
  if (seeds < 1) throw DomainError("at least one seed per point is required");
  if (!(time_budget > 0.0)) throw DomainError("time budget must be positive");
  if (!sequential && !scarce) throw DomainError("no assembly family selected");
}

std::vector<BenchPoint> run_bench(const BenchConfig& cfg, const std::function<void(const BenchPoint&)>& progress) {
  cfg.validate();
  std::vector<Family> families;
  if (cfg.sequential) families.push_back(Family::sequential);
  if (cfg.scarce) families.push_back(Family::scarce);

  std::vector<BenchPoint> out;
  auto emit = [&](BenchPoint p) {
    if (progress) progress(p);
    out.push_back(std::move(p));
  };
  for (Family f : families) {
    bool timed_out = false;
    for (int m = cfg.pieces_min; m <= cfg.pieces_max; ++m) {
      // After a timeout the larger instances of the family are marked, not run.
      if (timed_out) {
        BenchPoint p;
        p.sweep = "pieces";
        p.family = f;
        p.pieces = m;
        p.agents = cfg.pieces_agents;
        p.timed_out = true;
        emit(p);
        continue;
      }
      emit(run_point(cfg, "pieces", f, m, cfg.pieces_agents));
      timed_out = out.back().timed_out;
    }
  }
  if (cfg.agent_sweep)
    for (Family f : families)
      for (int a = cfg.agents_min; a <= cfg.agents_max; ++a) emit(run_point(cfg, "agents", f, cfg.agent_sweep_pieces, a));
  return out;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchPoint>& points) {
  out << kSchemaLine << '\n'
      << "sweep,family,pieces,agents,nodes,arcs,expanded,generated,wall_seconds,timed_out\n";
  for (const auto& p : points) {
    out << p.sweep << ',' << to_string(p.family) << ',' << p.pieces << ',' << p.agents << ',' << p.nodes << ','
        << p.arcs << ',';
    if (p.timed_out) {
      out << "NA,NA,NA,1\n";
    } else {
      out << fixed(p.expanded, 1) << ',' << fixed(p.generated, 1) << ',' << fixed(p.wall_seconds, 6) << ",0\n";
    }
  }
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("a linear fit needs at least two paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("a linear fit needs at least two distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  std::vector<double> pred;
  for (double xi : x) pred.push_back(fit.intercept + fit.slope * xi);
  fit.r2 = r_squared(y, pred);
  return fit;
}

double r_squared(const std::vector<double>& observed, const std::vector<double>& predicted) {
  if (observed.size() != predicted.size() || observed.empty()) throw DomainError("size mismatch in r_squared");
  const double mean = std::accumulate(observed.begin(), observed.end(), 0.0) / static_cast<double>(observed.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    ss_tot += (observed[i] - mean) * (observed[i] - mean);
  }
  return ss_tot == 0.0 ? (ss_res == 0.0 ? 1.0 : 0.0) : 1.0 - ss_res / ss_tot;
}

}  // namespace ergoalloc
