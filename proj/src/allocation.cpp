#include "ergoalloc/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ergoalloc/errors.hpp"

namespace ergoalloc {

void CostPolicy::validate() const {
  for (Joint j : kJoints) {
    const double t = v_th[index(j)];
    if (!(t > 0.0 && t < 1.0))
      throw DomainError("threshold for " + std::string(to_string(j)) + " must lie in (0, 1)");
  }
  if (!(gamma > v_max)) throw DomainError("penalty gamma must exceed v_max");
  for (double c : robot_cost)
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("robot cost must be finite and non-negative");
}

bool CostPolicy::guards_threshold() const {
  return std::all_of(robot_cost.begin(), robot_cost.end(),
                     [this](double c) { return c + (kJointCount - 1) < gamma; });
}

HumanCost human_action_cost(const KWearState& state, const std::string& action, const CalibrationProfile& profile,
                            const CostPolicy& policy) {
  const CalibrationEntry& entry = profile.entry(action);
  HumanCost out;
  for (Joint j : kJoints) {
    const int i = index(j);
    const double v = predict(state.v[i], entry.alpha[i]);
    out.vhat[i] = v;
    out.cost += v < policy.v_th[i] ? v : v + policy.gamma;
  }
  return out;
}

CostSnapshot refresh_costs(AndOrGraph& graph, const KWearState& state, const CalibrationProfile& profile,
                           const CostPolicy& policy) {
  std::map<ActionId, double> human;
  for (const auto& a : graph.arcs()) {
    if (!graph.active(a.id)) continue;
    const Worker& w = graph.workers()[a.agent];
    if (w.kind == WorkerKind::human) {
      auto it = human.find(a.action);
      if (it == human.end())
        it = human.emplace(a.action, human_action_cost(state, graph.action_labels()[a.action], profile, policy).cost)
                 .first;
      graph.set_arc_cost(a.id, it->second);
    } else {
      if (a.agent >= static_cast<int>(policy.robot_cost.size()))
        throw DomainError("no constant cost configured for worker '" + w.name + "'");
      graph.set_arc_cost(a.id, policy.robot_cost[a.agent]);
    }
  }
  return graph.snapshot();
}

std::vector<std::string> human_actions(const AndOrGraph& graph) {
  std::set<std::string> labels;
  for (const auto& a : graph.arcs())
    if (graph.active(a.id) && graph.workers()[a.agent].kind == WorkerKind::human)
      labels.insert(graph.action_labels()[a.action]);
  return {labels.begin(), labels.end()};
}

AllocationTrace run_collaboration(AndOrGraph& graph, const Scenario& scenario, const CalibrationProfile& profile,
                                  const CollaborationOptions& options, AllocationTrace* partial) {
  if (options.repetitions < 0) throw DomainError("repetition count must be non-negative");
  AllocationTrace local;
  AllocationTrace& trace = partial ? *partial : local;
  trace = {};

  const int m = graph.piece_count();
  const Configuration assembled = Configuration::assembled(m);
  const auto human = graph.human();
  SimClock clock;
  KWearState state;
  TickObserver observer;
  if (options.record_wear) {
    trace.wear.push_back({0.0, state.v});
    observer = [&trace](const KWearState& s) { trace.wear.push_back({s.t, s.v}); };
  }
  auto refresh = [&](const AndOrGraph& g) {
    (void)g;
    return refresh_costs(graph, state, profile, scenario.policy);
  };

  for (int rep = 0; rep < options.repetitions; ++rep) {
    Configuration config = Configuration::separated(m);
    const double rep_start = clock.now();
    int step = 0;
    while (config != assembled) {
      NextAction next = recursive_ao_star(graph, config, refresh, options.limits);
      const HyperArc& arc = graph.arc(next.arc);
      const std::string& label = graph.action_labels()[arc.action];
      const Worker& worker = graph.workers()[arc.agent];

      TraceRecord rec;
      rec.repetition = rep + 1;
      rec.step = ++step;
      rec.action = label;
      rec.agent = worker.name;
      rec.kind = worker.kind;
      rec.chosen_cost = graph.cost(arc.id);
      rec.expanded = next.stats.expanded;
      rec.generated = next.stats.generated;
      rec.search_seconds = next.stats.wall_seconds;
      if (profile.has(label)) rec.vhat = human_action_cost(state, label, profile, scenario.policy).vhat;
      for (ArcId id : graph.arcs_of_operation(arc.operation)) {
        if (!graph.active(id)) continue;
        if (human && graph.arc(id).agent == *human) {
          rec.human_cost = graph.cost(id);
        } else if (!rec.robot_cost || graph.cost(id) < *rec.robot_cost) {
          rec.robot_cost = graph.cost(id);
        }
      }

      ExecutionOutcome done;
      if (worker.kind == WorkerKind::human) {
        if (rec.vhat) {
          for (Joint j : kJoints)
            if ((*rec.vhat)[index(j)] >= scenario.policy.v_th[index(j)]) {
              rec.note = "over-threshold " + std::string(to_string(j)) + " kept by the human: no robot arc";
              break;
            }
        }
        done = execute_human_action(clock, state, scenario.human_execution(label, rep), scenario.kwear, observer);
      } else {
        done = execute_robot_action(clock, state, scenario.duration(arc.operation, arc.agent), scenario.kwear,
                                    observer);
      }
      state = done.state;
      rec.elapsed = done.elapsed;
      rec.clock = clock.now();
      rec.wear_after = state.v;
      trace.records.push_back(std::move(rec));
      config = config.join(arc.left, arc.right);
    }

    const double worked = clock.now() - rep_start;
    TaktOutcome takt = takt_pause(clock, state, worked, scenario.takt, scenario.kwear, observer);
    state = takt.state;
    if (takt.violated && !trace.records.empty()) {
      auto& note = trace.records.back().note;
      note += (note.empty() ? "" : "; ") + std::string("takt overrun");
    }
    trace.repetitions.push_back({rep + 1, clock.now() - rep_start, takt.paused, takt.violated});
  }
  trace.final_state = state;
  return trace;
}

namespace {

class ScenarioExecutions : public ExecutionSource {
 public:
  ScenarioExecutions(const Scenario& scenario, std::string action)
      : scenario_(scenario), action_(std::move(action)) {}
  int available() const override { return scenario_.executions_available(action_); }
  ScoreTrace record(int execution) const override { return scenario_.calibration_execution(action_, execution); }

 private:
  const Scenario& scenario_;
  std::string action_;
};

}  // namespace

CalibrationProfile calibrate_scenario(const AndOrGraph& graph, const Scenario& scenario, int eta0, int eta_max,
                                      double err_target, std::vector<ActionCalibration>* details) {
  CalibrationProfile profile;
  for (const auto& label : human_actions(graph)) {
    ScenarioExecutions source(scenario, label);
    CalibrationResult r = calibrate(source, eta0, eta_max, err_target, scenario.kwear);
    profile.set(label, r.entry);
    if (details) details->push_back({label, r});
  }
  return profile;
}

std::map<std::string, WorkerKind> baseline_rula_allocate(const BaselineRulaPolicy& policy,
                                                         const std::vector<std::string>& actions) {
  std::map<std::string, WorkerKind> out;
  for (const auto& a : actions) {
    auto it = policy.action_scores.find(a);
    if (it == policy.action_scores.end()) throw DomainError("no offline RULA score for action '" + a + "'");
    out[a] = it->second > policy.g_th ? WorkerKind::robot : WorkerKind::human;
  }
  return out;
}

}  // namespace ergoalloc
