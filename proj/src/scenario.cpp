#include "ergoalloc/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ergoalloc/errors.hpp"

namespace ergoalloc {

using nlohmann::json;

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw ParseError(source_ + ": " + path + ": " + message);
  }

  const json& field(const json& obj, const char* key, const std::string& path) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
    return *it;
  }

  const json* optional(const json& obj, const char* key) const {
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
  }

  int integer(const json& j, const std::string& path) const {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
  }

  std::string string(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  const json& array(const json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
  }

 private:
  std::string source_;
};

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

SubAssembly read_part(const Reader& r, const json& j, const std::string& path,
                      const std::map<std::string, PieceId>& pieces) {
  r.array(j, path);
  if (j.empty()) r.fail(path, "empty sub-assembly");
  SubAssembly s;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto name = r.string(j[i], at(path, i));
    auto it = pieces.find(name);
    if (it == pieces.end()) r.fail(at(path, i), "unknown piece '" + name + "'");
    if (s.contains(it->second)) r.fail(at(path, i), "piece '" + name + "' listed twice");
    s = s | SubAssembly::single(it->second);
  }
  return s;
}

SynthTemplate read_synth(const Reader& r, const json& j, const std::string& path) {
  SynthTemplate t;
  if (!j.is_object()) r.fail(path, "expected an object");
  try {
    t.dominant = parse_joint(r.string(r.field(j, "dominant", path), dot(path, "dominant")));
  } catch (const DomainError& e) {
    r.fail(dot(path, "dominant"), e.what());
  }
  if (const auto* v = r.optional(j, "levels")) {
    r.array(*v, dot(path, "levels"));
    t.levels.clear();
    for (std::size_t i = 0; i < v->size(); ++i) t.levels.push_back(r.integer((*v)[i], at(dot(path, "levels"), i)));
  }
  if (const auto* v = r.optional(j, "duration")) t.duration = r.number(*v, dot(path, "duration"));
  if (const auto* v = r.optional(j, "others_low")) t.others_low = r.integer(*v, dot(path, "others_low"));
  if (const auto* v = r.optional(j, "others_high")) t.others_high = r.integer(*v, dot(path, "others_high"));
  if (const auto* v = r.optional(j, "segment")) t.segment = r.number(*v, dot(path, "segment"));
  if (const auto* v = r.optional(j, "jitter_ticks")) t.jitter_ticks = r.integer(*v, dot(path, "jitter_ticks"));
  return t;
}

TrajectorySource read_source(const Reader& r, const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_object()) return read_synth(r, r.field(j, "synth", path), dot(path, "synth"));
  r.fail(path, "expected a file path or a synth object");
}

Axis parse_axis(const Reader& r, const std::string& s, const std::string& path) {
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  if (s == "z") return Axis::z;
  if (s == "max_abs") return Axis::max_abs;
  r.fail(path, "unknown axis '" + s + "'");
}

// Nodes reachable downwards: a node is buildable if it is a leaf or some kept
// operation builds it from buildable children.
std::vector<bool> prune_dead(int piece_count, const std::vector<Operation>& ops, std::vector<bool> keep) {
  const SubAssembly root = SubAssembly::all(piece_count);
  bool changed = true;
  while (changed) {
    changed = false;
    std::unordered_set<std::uint64_t> built;
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (keep[i]) built.insert(ops[i].father.bits());
    auto buildable = [&](SubAssembly s) { return s.is_leaf() || built.contains(s.bits()); };
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (keep[i] && !(buildable(ops[i].left) && buildable(ops[i].right))) {
        keep[i] = false;
        changed = true;
      }

    std::unordered_set<std::uint64_t> used{root.bits()};
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (keep[i]) {
        used.insert(ops[i].left.bits());
        used.insert(ops[i].right.bits());
      }
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (keep[i] && !used.contains(ops[i].father.bits())) {
        keep[i] = false;
        changed = true;
      }
  }
  return keep;
}

}  // namespace

std::vector<int> apply_precedence(int piece_count, std::vector<Operation>& ops,
                                  const std::vector<std::pair<ActionId, ActionId>>& precedence) {
  std::vector<bool> keep(ops.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (!keep[i]) continue;
      for (auto [before, after] : precedence) {
        if (ops[i].action != after) continue;
        bool satisfied = false;
        for (std::size_t k = 0; k < ops.size() && !satisfied; ++k)
          satisfied = keep[k] && ops[k].action == before &&
                      (ops[i].left.contains(ops[k].father) || ops[i].right.contains(ops[k].father));
        if (!satisfied) {
          keep[i] = false;
          changed = true;
          break;
        }
      }
    }
    auto alive = prune_dead(piece_count, ops, keep);
    if (alive != keep) {
      keep = std::move(alive);
      changed = true;
    }
  }
  std::vector<int> kept;
  std::vector<Operation> out;
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (keep[i]) {
      kept.push_back(static_cast<int>(i));
      out.push_back(ops[i]);
    }
  ops = std::move(out);
  return kept;
}

double Scenario::duration(int operation, WorkerId worker) const {
  if (operation < 0 || operation >= static_cast<int>(durations.size()) || worker < 0 ||
      worker >= static_cast<int>(durations[operation].size()))
    throw LookupError("no duration slot for operation " + std::to_string(operation));
  double d = durations[operation][worker];
  if (d < 0.0) throw DataError("no nominal duration for operation " + std::to_string(operation));
  return d;
}

namespace {

const ActionExecutionSpec& spec_for(const Scenario& s, const std::string& action) {
  auto it = s.actions.find(action);
  if (it == s.actions.end() || it->second.executions.empty())
    throw DataError("no human trajectory for action '" + action + "'");
  return it->second;
}

}  // namespace

ScoreTrace Scenario::human_execution(const std::string& action, int repetition) const {
  const auto& spec = spec_for(*this, action);
  const int n = static_cast<int>(spec.executions.size());
  const int l = ((repetition % n) + n) % n;
  return load_execution(spec.executions[l], scoring, seed, action, l, base_dir);
}

ScoreTrace Scenario::calibration_execution(const std::string& action, int execution) const {
  const auto& spec = spec_for(*this, action);
  if (execution < 0 || execution >= static_cast<int>(spec.executions.size()))
    throw DataError("action '" + action + "' has no execution " + std::to_string(execution));
  return load_execution(spec.executions[execution], scoring, seed, action, execution, base_dir);
}

int Scenario::executions_available(const std::string& action) const {
  auto it = actions.find(action);
  return it == actions.end() ? 0 : static_cast<int>(it->second.executions.size());
}

LoadedScenario parse_scenario(std::string_view text, const std::string& base_dir, const std::string& source) {
  Reader r(source);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
  if (!doc.is_object()) r.fail("(root)", "expected an object");
  if (r.integer(r.field(doc, "schema", ""), "schema") != Scenario::kSchema)
    r.fail("schema", "unsupported schema version");

  Scenario sc;
  sc.base_dir = base_dir;
  if (const auto* v = r.optional(doc, "name")) sc.name = r.string(*v, "name");
  if (const auto* v = r.optional(doc, "seed")) {
    if (!v->is_number_unsigned()) r.fail("seed", "expected a non-negative integer");
    sc.seed = v->get<std::uint64_t>();
  }

  const json& jpieces = r.array(r.field(doc, "pieces", ""), "pieces");
  std::vector<std::string> piece_names;
  std::map<std::string, PieceId> pieces;
  for (std::size_t i = 0; i < jpieces.size(); ++i) {
    auto name = r.string(jpieces[i], at("pieces", i));
    if (!pieces.emplace(name, static_cast<PieceId>(i)).second) r.fail(at("pieces", i), "duplicate piece '" + name + "'");
    piece_names.push_back(name);
  }
  if (piece_names.size() < 2 || piece_names.size() > static_cast<std::size_t>(kMaxPieces))
    throw InvalidAssembly(source + ": an assembly needs between 2 and 64 pieces");

  const json& jagents = r.array(r.field(doc, "agents", ""), "agents");
  std::vector<Worker> workers;
  std::vector<double> robot_cost;
  for (std::size_t i = 0; i < jagents.size(); ++i) {
    const auto path = at("agents", i);
    Worker w;
    w.name = r.string(r.field(jagents[i], "name", path), dot(path, "name"));
    auto kind = r.string(r.field(jagents[i], "kind", path), dot(path, "kind"));
    if (kind == "human") {
      w.kind = WorkerKind::human;
    } else if (kind == "robot") {
      w.kind = WorkerKind::robot;
    } else {
      r.fail(dot(path, "kind"), "expected \"human\" or \"robot\"");
    }
    for (const auto& other : workers)
      if (other.name == w.name) r.fail(dot(path, "name"), "duplicate agent '" + w.name + "'");
    double cost = 0.0;
    if (w.kind == WorkerKind::robot)
      cost = r.number(r.field(jagents[i], "cost", path), dot(path, "cost"));
    workers.push_back(w);
    robot_cost.push_back(cost);
  }
  if (std::count_if(workers.begin(), workers.end(), [](const Worker& w) { return w.kind == WorkerKind::human; }) != 1)
    r.fail("agents", "exactly one human agent is required");

  const json& jops = r.array(r.field(doc, "operations", ""), "operations");
  if (jops.empty()) throw InvalidAssembly(source + ": the scenario has no operations");
  std::vector<std::string> labels;
  std::map<std::string, ActionId> action_ids;
  std::vector<Operation> ops;
  std::vector<std::vector<double>> durations;
  std::vector<std::vector<bool>> infeasible;
  for (std::size_t i = 0; i < jops.size(); ++i) {
    const auto path = at("operations", i);
    const json& jo = jops[i];
    auto label = r.string(r.field(jo, "action", path), dot(path, "action"));
    auto [it, fresh] = action_ids.emplace(label, static_cast<ActionId>(labels.size()));
    if (fresh) labels.push_back(label);
    Operation op;
    op.action = it->second;
    op.father = read_part(r, r.field(jo, "father", path), dot(path, "father"), pieces);
    const json& jc = r.array(r.field(jo, "children", path), dot(path, "children"));
    if (jc.size() != 2) r.fail(dot(path, "children"), "expected exactly two children");
    op.left = read_part(r, jc[0], at(dot(path, "children"), 0), pieces);
    op.right = read_part(r, jc[1], at(dot(path, "children"), 1), pieces);
    if (op.left.overlaps(op.right) || (op.left | op.right) != op.father)
      throw InvariantViolation(source + ": " + path + " (" + label + "): children do not tile the father");

    std::vector<double> d(workers.size(), -1.0);
    if (const auto* jd = r.optional(jo, "durations")) {
      if (!jd->is_object()) r.fail(dot(path, "durations"), "expected an object");
      for (const auto& [name, value] : jd->items()) {
        auto w = std::find_if(workers.begin(), workers.end(), [&](const Worker& x) { return x.name == name; });
        if (w == workers.end()) r.fail(dot(dot(path, "durations"), name), "unknown agent");
        double secs = r.number(value, dot(dot(path, "durations"), name));
        if (secs < 0.0) r.fail(dot(dot(path, "durations"), name), "duration must be non-negative");
        d[w - workers.begin()] = secs;
      }
    }
    std::vector<bool> bad(workers.size(), false);
    if (const auto* jf = r.optional(jo, "infeasible")) {
      r.array(*jf, dot(path, "infeasible"));
      for (std::size_t k = 0; k < jf->size(); ++k) {
        auto name = r.string((*jf)[k], at(dot(path, "infeasible"), k));
        auto w = std::find_if(workers.begin(), workers.end(), [&](const Worker& x) { return x.name == name; });
        if (w == workers.end()) r.fail(at(dot(path, "infeasible"), k), "unknown agent '" + name + "'");
        bad[w - workers.begin()] = true;
      }
    }
    ops.push_back(op);
    durations.push_back(std::move(d));
    infeasible.push_back(std::move(bad));
  }

  std::vector<std::pair<ActionId, ActionId>> prec;
  if (const auto* jp = r.optional(doc, "precedence")) {
    r.array(*jp, "precedence");
    for (std::size_t i = 0; i < jp->size(); ++i) {
      const auto path = at("precedence", i);
      const json& pair = r.array((*jp)[i], path);
      if (pair.size() != 2) r.fail(path, "expected [before, after]");
      auto a = r.string(pair[0], at(path, 0)), b = r.string(pair[1], at(path, 1));
      if (!action_ids.contains(a)) r.fail(at(path, 0), "unknown action '" + a + "'");
      if (!action_ids.contains(b)) r.fail(at(path, 1), "unknown action '" + b + "'");
      sc.precedence.emplace_back(a, b);
      prec.emplace_back(action_ids[a], action_ids[b]);
    }
  }
  auto kept = apply_precedence(static_cast<int>(piece_names.size()), ops, prec);
  if (ops.empty()) throw InvalidAssembly(source + ": precedence constraints remove every operation");
  for (int k : kept) sc.durations.push_back(durations[k]);

  if (const auto* je = r.optional(doc, "ergonomics")) {
    if (!je->is_object()) r.fail("ergonomics", "expected an object");
    if (const auto* v = r.optional(*je, "v_th")) {
      if (v->is_number()) {
        sc.policy.v_th.fill(v->get<double>());
      } else if (v->is_object()) {
        for (const auto& [name, value] : v->items()) {
          try {
            sc.policy.v_th[index(parse_joint(name))] = r.number(value, "ergonomics.v_th." + name);
          } catch (const DomainError& e) {
            r.fail("ergonomics.v_th." + name, e.what());
          }
        }
      } else {
        r.fail("ergonomics.v_th", "expected a number or a per-joint object");
      }
    }
    if (const auto* v = r.optional(*je, "gamma")) sc.policy.gamma = r.number(*v, "ergonomics.gamma");
    double t_max = sc.kwear.t_max(), v_max = sc.kwear.v_max(), g_avg = sc.kwear.g_avg();
    if (const auto* v = r.optional(*je, "t_max")) t_max = r.number(*v, "ergonomics.t_max");
    if (const auto* v = r.optional(*je, "v_max")) v_max = r.number(*v, "ergonomics.v_max");
    if (const auto* v = r.optional(*je, "g_avg")) g_avg = r.number(*v, "ergonomics.g_avg");
    try {
      sc.kwear = KWearParams(t_max, v_max, g_avg);
    } catch (const DomainError& e) {
      r.fail("ergonomics", e.what());
    }
    sc.policy.v_max = v_max;
  }
  sc.policy.robot_cost = robot_cost;
  try {
    sc.policy.validate();
  } catch (const DomainError& e) {
    r.fail("ergonomics", e.what());
  }

  if (const auto* v = r.optional(doc, "takt")) {
    double t = r.number(*v, "takt");
    if (!(t > 0.0)) r.fail("takt", "takt time must be positive");
    sc.takt.t_takt = t;
  }

  if (const auto* js = r.optional(doc, "scoring")) {
    if (!js->is_object()) r.fail("scoring", "expected an object");
    for (const auto& [name, value] : js->items()) {
      const std::string path = "scoring." + name;
      Joint joint;
      try {
        joint = parse_joint(name);
      } catch (const DomainError& e) {
        r.fail(path, e.what());
      }
      JointTable table;
      if (const auto* ax = r.optional(value, "axis")) table.axis = parse_axis(r, r.string(*ax, path + ".axis"), path + ".axis");
      const json& bands = r.array(r.field(value, "bands", path), path + ".bands");
      for (std::size_t i = 0; i < bands.size(); ++i) {
        const auto bp = at(path + ".bands", i);
        const json& b = r.array(bands[i], bp);
        if (b.size() != 3) r.fail(bp, "expected [lower, upper, score]");
        AngleBand band;
        band.lower = r.number(b[0], at(bp, 0));
        band.upper = b[1].is_null() ? std::numeric_limits<double>::infinity() : r.number(b[1], at(bp, 1));
        band.score = r.integer(b[2], at(bp, 2));
        table.bands.push_back(band);
      }
      try {
        sc.scoring.set(joint, std::move(table));
      } catch (const DomainError& e) {
        r.fail(path, e.what());
      }
    }
  }

  if (const auto* jt = r.optional(doc, "trajectories")) {
    if (!jt->is_object()) r.fail("trajectories", "expected an object");
    for (const auto& [label, value] : jt->items()) {
      const std::string path = "trajectories." + label;
      if (!action_ids.contains(label)) r.fail(path, "unknown action '" + label + "'");
      ActionExecutionSpec spec;
      spec.action = label;
      if (value.is_array()) {
        for (std::size_t i = 0; i < value.size(); ++i) spec.executions.push_back(read_source(r, value[i], at(path, i)));
      } else if (value.is_object()) {
        auto tmpl = read_synth(r, r.field(value, "synth", path), path + ".synth");
        int n = 1;
        if (const auto* e = r.optional(value, "executions")) n = r.integer(*e, path + ".executions");
        if (n < 1) r.fail(path + ".executions", "at least one execution is required");
        spec.executions.assign(n, tmpl);
      } else {
        r.fail(path, "expected a list of executions or a synth object");
      }
      if (spec.executions.empty()) r.fail(path, "at least one execution is required");
      sc.actions[label] = std::move(spec);
    }
  }

  if (const auto* jb = r.optional(doc, "baseline_scores")) {
    if (!jb->is_object()) r.fail("baseline_scores", "expected an object");
    for (const auto& [label, value] : jb->items()) {
      if (!action_ids.contains(label)) r.fail("baseline_scores." + label, "unknown action '" + label + "'");
      sc.baseline_scores[label] = r.integer(value, "baseline_scores." + label);
    }
  }

  AndOrGraph graph(static_cast<int>(piece_names.size()), piece_names, labels, workers, ops);
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t w = 0; w < workers.size(); ++w)
      if (infeasible[kept[i]][w]) graph.exclude_arc(*graph.find_arc(static_cast<int>(i), static_cast<WorkerId>(w)));
  return {std::move(graph), std::move(sc)};
}

LoadedScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scenario '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto base = std::filesystem::path(path).parent_path().string();
  return parse_scenario(buf.str(), base, path);
}

}  // namespace ergoalloc
