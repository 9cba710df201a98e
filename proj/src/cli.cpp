#include "ergoalloc/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <set>

#include "ergoalloc/allocation.hpp"
#include "ergoalloc/bench.hpp"
#include "ergoalloc/dot.hpp"
#include "ergoalloc/errors.hpp"
#include "ergoalloc/report.hpp"
#include "ergoalloc/scenario.hpp"
#include "ergoalloc/text.hpp"

namespace ergoalloc {

namespace fs = std::filesystem;

namespace {

struct GraphSource {
  std::string scenario;
  int sequential = 0;
  int scarce = 0;
  int agents = 2;

  void add_to(CLI::App& cmd) {
    auto* s = cmd.add_option("--scenario", scenario, "Scenario file");
    auto* q = cmd.add_option("--sequential", sequential, "Sequential generator with N pieces");
    auto* c = cmd.add_option("--scarce", scarce, "Scarce generator with N pieces");
    s->excludes(q)->excludes(c);
    q->excludes(c);
    cmd.add_option("--agents", agents, "Workers for generated graphs (one human, the rest robots)")
        ->check(CLI::PositiveNumber);
  }

  bool has_scenario() const { return !scenario.empty(); }

  std::unique_ptr<LoadedScenario> load() const {
    if (has_scenario()) return std::make_unique<LoadedScenario>(load_scenario(scenario));
    if (sequential == 0 && scarce == 0) throw ParseError("one of --scenario, --sequential or --scarce is required");
    AndOrGraph g = sequential ? build_sequential(sequential, make_team(agents)) : build_scarce(scarce, make_team(agents));
    return std::make_unique<LoadedScenario>(LoadedScenario{std::move(g), Scenario{}});
  }
};

std::string default_out_dir() {
  if (const char* env = std::getenv("ERGOALLOC_OUT_DIR"); env && *env) return env;
  return ".";
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write '" + path.string() + "'");
  return f;
}

void apply_cost_file(AndOrGraph& graph, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open cost file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("costs") || !doc["costs"].is_object())
    throw ParseError(path + ": expected {\"schema\": 1, \"costs\": {\"action/agent\": cost}}");
  for (const auto& [key, value] : doc["costs"].items()) {
    auto slash = key.rfind('/');
    if (slash == std::string::npos || !value.is_number()) throw ParseError(path + ": costs." + key + ": bad entry");
    graph.set_cost(graph.action_id(key.substr(0, slash)), graph.worker_id(key.substr(slash + 1)), value.get<double>());
  }
}

// Allocation table in the layout of one row per repetition.
void print_allocation_table(std::ostream& out, const AllocationTrace& trace, const std::vector<std::string>& labels,
                            const std::map<std::string, WorkerKind>* baseline) {
  std::vector<std::map<std::string, std::string>> rows(trace.repetitions.size());
  for (const auto& r : trace.records) {
    auto& cell = rows[r.repetition - 1][r.action];
    cell += r.kind == WorkerKind::human ? "H" : "R";
  }
  out << "repetition";
  for (const auto& l : labels) out << '\t' << l;
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << "rp_" << (i + 1);
    for (const auto& l : labels) out << '\t' << (rows[i].contains(l) ? rows[i][l] : "-");
    out << '\n';
  }
  if (baseline) {
    out << "rula";
    for (const auto& l : labels) {
      auto it = baseline->find(l);
      out << '\t' << (it == baseline->end() ? "?" : it->second == WorkerKind::human ? "H" : "R");
    }
    out << '\n';
  }
}

struct CalibrateArgs {
  int eta0 = 2;
  int eta_max = 5;
  double err_target = 1e-3;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--eta0", eta0, "Initial number of executions")->check(CLI::Range(2, 1000000));
    cmd.add_option("--eta-max", eta_max, "Maximum number of executions")->check(CLI::PositiveNumber);
    cmd.add_option("--err-target", err_target, "Largest accepted prediction error")->check(CLI::PositiveNumber);
  }
};

int report_calibration(std::ostream& out, const std::vector<ActionCalibration>& details) {
  bool all = true;
  out << "action\teta\tmax_error\tconverged\n";
  for (const auto& d : details) {
    out << d.action << '\t' << d.result.eta << '\t' << fixed(d.result.max_error, 9) << '\t'
        << (d.result.converged ? "yes" : "no") << '\n';
    all = all && d.result.converged;
  }
  return all ? kExitOk : kExitNotConverged;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ergonomic role allocation for human-robot assembly", "ergoalloc"};
  app.require_subcommand(1);

  GraphSource plan_src;
  std::string plan_format = "text", plan_out, plan_costs, plan_profile;
  double plan_uniform = 1.0;
  std::optional<std::uint64_t> plan_seed;
  auto* plan = app.add_subcommand("plan", "Compute one optimal allocation plan");
  plan_src.add_to(*plan);
  plan->add_option("--format", plan_format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
  plan->add_option("--out", plan_out, "Write the plan to this file");
  plan->add_option("--costs", plan_costs, "JSON cost table {\"costs\": {\"action/agent\": value}}");
  plan->add_option("--uniform-cost", plan_uniform, "Cost of every arc before overrides")->check(CLI::NonNegativeNumber);
  plan->add_option("--seed", plan_seed, "Draw uniform(0, 100) random costs from this seed");
  plan->add_option("--profile", plan_profile, "Ergonomic human costs from a calibration profile, fresh worker");

  std::string sim_scenario, sim_profile, sim_out;
  int sim_reps = 4;
  bool sim_calibrate = false, sim_timing = false;
  std::optional<std::uint64_t> sim_seed;
  CalibrateArgs sim_cal;
  auto* simulate = app.add_subcommand("simulate", "Run the dynamic allocation loop on a simulated worker");
  simulate->add_option("--scenario", sim_scenario, "Scenario file")->required();
  simulate->add_option("--repetitions", sim_reps, "Assembly repetitions")->check(CLI::NonNegativeNumber);
  simulate->add_option("--profile", sim_profile, "Calibration profile (default <out>/profile.json)");
  simulate->add_option("--out", sim_out, "Output directory");
  simulate->add_option("--seed", sim_seed, "Override the scenario seed");
  simulate->add_flag("--calibrate-first", sim_calibrate, "Calibrate before simulating");
  simulate->add_flag("--timing", sim_timing, "Add search wall time to the trace");
  sim_cal.add_to(*simulate);

  std::string cal_scenario, cal_out;
  std::optional<std::uint64_t> cal_seed;
  CalibrateArgs cal_args;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Estimate wear prediction parameters per action");
  calibrate_cmd->add_option("--scenario", cal_scenario, "Scenario file")->required();
  calibrate_cmd->add_option("--out", cal_out, "Profile path (default <out dir>/profile.json)");
  calibrate_cmd->add_option("--seed", cal_seed, "Override the scenario seed");
  cal_args.add_to(*calibrate_cmd);

  BenchConfig bench_cfg;
  std::string bench_family = "both", bench_out;
  bool bench_no_agents = false;
  auto* bench = app.add_subcommand("bench", "Measure search effort over generated assemblies");
  bench->add_option("--family", bench_family, "sequential, scarce or both")
      ->check(CLI::IsMember({"sequential", "scarce", "both"}));
  bench->add_option("--pieces-min", bench_cfg.pieces_min, "Smallest piece count");
  bench->add_option("--pieces-max", bench_cfg.pieces_max, "Largest piece count");
  bench->add_option("--agents", bench_cfg.pieces_agents, "Agents during the piece sweeps");
  bench->add_option("--agents-min", bench_cfg.agents_min, "Smallest agent count in the agent sweep");
  bench->add_option("--agents-max", bench_cfg.agents_max, "Largest agent count in the agent sweep");
  bench->add_option("--agent-pieces", bench_cfg.agent_sweep_pieces, "Pieces during the agent sweep");
  bench->add_flag("--no-agent-sweep", bench_no_agents, "Skip the agent sweep");
  bench->add_option("--seeds", bench_cfg.seeds, "Random cost draws per point");
  bench->add_option("--seed", bench_cfg.seed, "Base seed");
  bench->add_option("--time-budget", bench_cfg.time_budget, "Seconds per point before it is marked timed out");
  bench->add_option("--out", bench_out, "CSV path (default stdout)");

  GraphSource graph_src;
  bool graph_dot = false;
  std::string graph_out;
  auto* graph_cmd = app.add_subcommand("graph", "Print graph statistics or export DOT");
  graph_src.add_to(*graph_cmd);
  graph_cmd->add_flag("--dot", graph_dot, "Emit Graphviz DOT");
  graph_cmd->add_option("--out", graph_out, "Write DOT to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (plan->parsed()) {
      auto loaded = plan_src.load();
      AndOrGraph& g = loaded->graph;
      CostSnapshot costs(g.arcs().size(), plan_uniform);
      if (plan_seed) {
        std::mt19937_64 rng(*plan_seed);
        std::uniform_real_distribution<double> dist(0.0, 100.0);
        for (double& c : costs) c = dist(rng);
      }
      g.apply(costs);
      if (!plan_profile.empty()) {
        auto profile = CalibrationProfile::load_file(plan_profile);
        refresh_costs(g, KWearState{}, profile, loaded->scenario.policy);
      }
      if (!plan_costs.empty()) apply_cost_file(g, plan_costs);
      const auto result = ao_star(g, Configuration::assembled(g.piece_count()), Configuration::separated(g.piece_count()));
      if (plan_out.empty()) {
        write_plan(out, g, result, parse_format(plan_format));
      } else {
        auto f = open_out(plan_out);
        write_plan(f, g, result, parse_format(plan_format));
      }
      return kExitOk;
    }

    if (graph_cmd->parsed()) {
      auto loaded = graph_src.load();
      const AndOrGraph& g = loaded->graph;
      if (graph_dot) {
        if (graph_out.empty()) {
          write_dot(out, g);
        } else {
          auto f = open_out(graph_out);
          write_dot(f, g);
          out << "nodes: " << g.nodes().size() << ", arcs: " << g.arcs().size() << '\n';
        }
      } else {
        out << "nodes: " << g.nodes().size() << ", arcs: " << g.arcs().size() << '\n';
        out << "pieces: " << g.piece_count() << ", agents: " << g.workers().size()
            << ", actions: " << g.action_labels().size() << ", active arcs: " << g.active_arc_count() << '\n';
      }
      return kExitOk;
    }

    if (bench->parsed()) {
      bench_cfg.sequential = bench_family != "scarce";
      bench_cfg.scarce = bench_family != "sequential";
      bench_cfg.agent_sweep = !bench_no_agents;
      auto progress = [&err](const BenchPoint& p) {
        err << p.sweep << ' ' << to_string(p.family) << " pieces=" << p.pieces << " agents=" << p.agents
            << (p.timed_out ? " timed out" : " expanded=" + fixed(p.expanded, 0)) << '\n';
      };
      auto points = run_bench(bench_cfg, progress);
      if (bench_out.empty()) {
        write_bench_csv(out, points);
      } else {
        auto f = open_out(bench_out);
        write_bench_csv(f, points);
      }
      return kExitOk;
    }

    if (calibrate_cmd->parsed()) {
      auto loaded = load_scenario(cal_scenario);
      if (cal_seed) loaded.scenario.seed = *cal_seed;
      std::vector<ActionCalibration> details;
      auto profile = calibrate_scenario(loaded.graph, loaded.scenario, cal_args.eta0, cal_args.eta_max,
                                        cal_args.err_target, &details);
      fs::path path = cal_out.empty() ? fs::path(default_out_dir()) / "profile.json" : fs::path(cal_out);
      auto f = open_out(path);
      profile.save(f);
      int code = report_calibration(out, details);
      out << "wrote " << path.string() << '\n';
      if (code != kExitOk) err << "calibration did not converge for every action\n";
      return code;
    }

    if (simulate->parsed()) {
      auto loaded = load_scenario(sim_scenario);
      if (sim_seed) loaded.scenario.seed = *sim_seed;
      const fs::path dir = sim_out.empty() ? fs::path(default_out_dir()) : fs::path(sim_out);
      CalibrationProfile profile;
      if (sim_calibrate) {
        std::vector<ActionCalibration> details;
        profile = calibrate_scenario(loaded.graph, loaded.scenario, sim_cal.eta0, sim_cal.eta_max, sim_cal.err_target,
                                     &details);
        if (report_calibration(out, details) != kExitOk)
          err << "warning: calibration did not converge for every action; using the best profile\n";
      } else {
        const fs::path path = sim_profile.empty() ? dir / "profile.json" : fs::path(sim_profile);
        if (!fs::exists(path)) {
          err << "error: calibration profile '" << path.string()
              << "' not found; run `ergoalloc calibrate` first or pass --calibrate-first\n";
          return kExitMissing;
        }
        profile = CalibrationProfile::load_file(path.string());
      }
      for (const auto& label : human_actions(loaded.graph))
        if (!profile.has(label)) {
          err << "error: the profile has no entry for action '" << label
              << "'; recalibrate or pass --calibrate-first\n";
          return kExitMissing;
        }

      CollaborationOptions opts;
      opts.repetitions = sim_reps;
      AllocationTrace trace;
      int code = kExitOk;
      try {
        run_collaboration(loaded.graph, loaded.scenario, profile, opts, &trace);
      } catch (const NoFeasiblePlan& e) {
        err << "error: " << e.what() << " (partial trace written)\n";
        code = kExitFailure;
      }
      {
        auto f = open_out(dir / "trace.csv");
        write_trace_csv(f, trace, sim_timing);
      }
      {
        auto f = open_out(dir / "wear.csv");
        write_wear_csv(f, trace);
      }
      {
        auto f = open_out(dir / "summary.json");
        write_summary_json(f, trace, loaded.scenario.name);
      }

      std::vector<std::string> labels(loaded.graph.action_labels().begin(), loaded.graph.action_labels().end());
      std::map<std::string, WorkerKind> baseline;
      bool has_baseline = !loaded.scenario.baseline_scores.empty();
      if (has_baseline) {
        BaselineRulaPolicy policy;
        policy.action_scores = loaded.scenario.baseline_scores;
        baseline = baseline_rula_allocate(policy, labels);
      }
      print_allocation_table(out, trace, labels, has_baseline ? &baseline : nullptr);
      out << "wrote " << (dir / "trace.csv").string() << ", " << (dir / "wear.csv").string() << ", "
          << (dir / "summary.json").string() << '\n';
      return code;
    }
  } catch (const NoFeasiblePlan& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const CalibrationMissing& e) {
    err << "error: " << e.what() << "; run `ergoalloc calibrate` first\n";
    return kExitMissing;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitMissing;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitMissing;
  }
  return kExitFailure;
}

}  // namespace ergoalloc
