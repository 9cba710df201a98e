#include "ergoalloc/report.hpp"

#include <iomanip>
#include <json.hpp>
#include <map>
#include <ostream>

#include "ergoalloc/errors.hpp"
#include "ergoalloc/text.hpp"

namespace ergoalloc {

using nlohmann::ordered_json;

namespace {

std::vector<std::string> part_names(const AndOrGraph& graph, const Configuration& c) {
  std::vector<std::string> out;
  for (auto p : c.parts()) out.push_back(graph.part_name(p));
  return out;
}

std::string optional_cell(const std::optional<double>& v) { return v ? fixed(*v) : "NA"; }

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "text") return Format::text;
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  throw DomainError("unknown output format '" + name + "'");
}

void write_plan(std::ostream& out, const AndOrGraph& graph, const AllocationPlan& plan, Format format) {
  double cumulative = 0.0;
  switch (format) {
    case Format::text:
      out << "plan: " << plan.steps.size() << " steps, total cost " << fixed(plan.total_cost) << '\n';
      for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const auto& s = plan.steps[i];
        cumulative += s.cost;
        out << "  " << (i + 1) << ". " << graph.action_labels()[s.action] << " -> " << graph.workers()[s.agent].name
            << "  cost " << fixed(s.cost) << "  cumulative " << fixed(cumulative) << "  => "
            << join(part_names(graph, s.result), " ") << '\n';
      }
      break;
    case Format::json: {
      ordered_json doc;
      doc["schema"] = 1;
      doc["total_cost"] = plan.total_cost;
      doc["steps"] = ordered_json::array();
      for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const auto& s = plan.steps[i];
        cumulative += s.cost;
        doc["steps"].push_back({{"step", i + 1},
                                {"action", graph.action_labels()[s.action]},
                                {"agent", graph.workers()[s.agent].name},
                                {"arc", s.arc},
                                {"cost", s.cost},
                                {"cumulative", cumulative},
                                {"result", part_names(graph, s.result)}});
      }
      out << std::setw(2) << doc << '\n';
      break;
    }
    case Format::csv:
      out << kSchemaLine << '\n' << "step,action,agent,arc,cost,cumulative\n";
      for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const auto& s = plan.steps[i];
        cumulative += s.cost;
        out << (i + 1) << ',' << csv_field(graph.action_labels()[s.action]) << ','
            << csv_field(graph.workers()[s.agent].name) << ',' << s.arc << ',' << fixed(s.cost) << ','
            << fixed(cumulative) << '\n';
      }
      break;
  }
}

void write_trace_csv(std::ostream& out, const AllocationTrace& trace, bool timing) {
  out << kSchemaLine << '\n' << "repetition,step,action,agent,kind";
  for (Joint j : kJoints) out << ",vhat_" << to_string(j);
  out << ",human_cost,robot_cost,chosen_cost";
  for (Joint j : kJoints) out << ",wear_" << to_string(j);
  out << ",elapsed,clock,expanded,generated";
  if (timing) out << ",search_seconds";
  out << ",note\n";
  for (const auto& r : trace.records) {
    out << r.repetition << ',' << r.step << ',' << csv_field(r.action) << ',' << csv_field(r.agent) << ','
        << to_string(r.kind);
    for (Joint j : kJoints) out << ',' << (r.vhat ? fixed((*r.vhat)[index(j)]) : "NA");
    out << ',' << optional_cell(r.human_cost) << ',' << optional_cell(r.robot_cost) << ',' << fixed(r.chosen_cost);
    for (Joint j : kJoints) out << ',' << fixed(r.wear_after[index(j)]);
    out << ',' << fixed(r.elapsed, 3) << ',' << fixed(r.clock, 3) << ',' << r.expanded << ',' << r.generated;
    if (timing) out << ',' << fixed(r.search_seconds, 6);
    out << ',' << csv_field(r.note) << '\n';
  }
}

void write_wear_csv(std::ostream& out, const AllocationTrace& trace) {
  out << kSchemaLine << '\n' << "t_seconds";
  for (Joint j : kJoints) out << ',' << to_string(j);
  out << '\n';
  for (const auto& s : trace.wear) {
    out << fixed(s.t, 3);
    for (double v : s.v) out << ',' << fixed(v, 6);
    out << '\n';
  }
}

void write_summary_json(std::ostream& out, const AllocationTrace& trace, const std::string& scenario_name) {
  std::map<std::string, std::pair<int, int>> counts;  // robot, total
  for (const auto& r : trace.records) {
    auto& c = counts[r.action];
    c.second += 1;
    if (r.kind == WorkerKind::robot) c.first += 1;
  }
  ordered_json doc;
  doc["schema"] = 1;
  doc["scenario"] = scenario_name;
  doc["repetitions"] = trace.repetitions.size();
  doc["actions_executed"] = trace.records.size();
  ordered_json actions = ordered_json::object();
  for (const auto& [label, c] : counts)
    actions[label] = {{"robot", c.first}, {"total", c.second}, {"robot_percent", 100.0 * c.first / c.second}};
  doc["actions"] = actions;
  ordered_json reps = ordered_json::array();
  for (const auto& r : trace.repetitions)
    reps.push_back({{"repetition", r.repetition},
                    {"elapsed", std::stod(fixed(r.elapsed, 3))},
                    {"takt_pause", std::stod(fixed(r.paused, 3))},
                    {"takt_violated", r.takt_violated}});
  doc["repetition_timing"] = reps;
  ordered_json wear = ordered_json::object();
  for (Joint j : kJoints) wear[std::string(to_string(j))] = trace.final_state.v[index(j)];
  doc["final_wear"] = wear;
  out << std::setw(2) << doc << '\n';
}

}  // namespace ergoalloc
