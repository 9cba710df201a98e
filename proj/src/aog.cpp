#include "ergoalloc/aog.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ergoalloc/errors.hpp"

namespace ergoalloc {

namespace {

inline void hash_combine(std::size_t& seed, std::uint64_t v) {
  seed ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

bool by_lowest(SubAssembly a, SubAssembly b) { return a.lowest() < b.lowest(); }

}  // namespace

std::vector<PieceId> SubAssembly::pieces() const {
  std::vector<PieceId> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

Configuration::Configuration(std::vector<SubAssembly> parts) : parts_(std::move(parts)) {
  SubAssembly seen;
  for (auto p : parts_) {
    if (p.empty()) throw InvariantViolation("configuration contains an empty sub-assembly");
    if (seen.overlaps(p)) throw InvariantViolation("configuration parts are not pairwise disjoint");
    seen = seen | p;
  }
  std::sort(parts_.begin(), parts_.end(), by_lowest);
}

Configuration Configuration::assembled(int piece_count) {
  return Configuration({SubAssembly::all(piece_count)}, Unchecked{});
}

Configuration Configuration::separated(int piece_count) {
  std::vector<SubAssembly> parts;
  parts.reserve(piece_count);
  for (int p = 0; p < piece_count; ++p) parts.push_back(SubAssembly::single(p));
  return Configuration(std::move(parts), Unchecked{});
}

SubAssembly Configuration::covered() const {
  SubAssembly all;
  for (auto p : parts_) all = all | p;
  return all;
}

bool Configuration::contains_part(SubAssembly s) const {
  return std::find(parts_.begin(), parts_.end(), s) != parts_.end();
}

Configuration Configuration::split(SubAssembly part, SubAssembly a, SubAssembly b) const {
  std::vector<SubAssembly> out;
  out.reserve(parts_.size() + 1);
  bool found = false;
  for (auto p : parts_) {
    if (p == part) {
      found = true;
      continue;
    }
    out.push_back(p);
  }
  if (!found) throw LookupError("split: sub-assembly is not part of the configuration");
  if (a.overlaps(b) || (a | b) != part) throw InvariantViolation("split: halves do not tile the part");
  auto place = [&out](SubAssembly s) {
    out.insert(std::upper_bound(out.begin(), out.end(), s, by_lowest), s);
  };
  place(a);
  place(b);
  return Configuration(std::move(out), Unchecked{});
}

Configuration Configuration::join(SubAssembly a, SubAssembly b) const {
  if (!contains_part(a) || !contains_part(b) || a == b)
    throw LookupError("join: halves are not distinct parts of the configuration");
  std::vector<SubAssembly> out;
  out.reserve(parts_.size() - 1);
  for (auto p : parts_)
    if (p != a && p != b) out.push_back(p);
  SubAssembly u = a | b;
  out.insert(std::upper_bound(out.begin(), out.end(), u, by_lowest), u);
  return Configuration(std::move(out), Unchecked{});
}

std::size_t Configuration::hash() const {
  std::size_t seed = parts_.size();
  for (auto p : parts_) hash_combine(seed, p.bits());
  return seed;
}

std::string to_string(WorkerKind kind) { return kind == WorkerKind::human ? "human" : "robot"; }

std::vector<Worker> make_team(int count) {
  if (count < 1) throw InvalidAssembly("a team needs at least one worker");
  std::vector<Worker> team{{"human", WorkerKind::human}};
  for (int i = 1; i < count; ++i) team.push_back({"robot" + std::to_string(i), WorkerKind::robot});
  return team;
}

AndOrGraph::AndOrGraph(int piece_count, std::vector<std::string> piece_names,
                       std::vector<std::string> action_labels, std::vector<Worker> workers,
                       std::vector<Operation> operations, double initial_cost)
    : piece_count_(piece_count),
      piece_names_(std::move(piece_names)),
      action_labels_(std::move(action_labels)),
      workers_(std::move(workers)),
      operations_(std::move(operations)) {
  if (piece_count_ < 2 || piece_count_ > kMaxPieces)
    throw InvalidAssembly("an assembly needs between 2 and 64 pieces, got " + std::to_string(piece_count_));
  if (piece_names_.empty())
    for (int p = 0; p < piece_count_; ++p) piece_names_.push_back("p" + std::to_string(p + 1));
  if (static_cast<int>(piece_names_.size()) != piece_count_)
    throw InvalidAssembly("piece name count does not match piece count");
  if (workers_.empty()) throw InvalidAssembly("at least one worker is required");
  if (std::count_if(workers_.begin(), workers_.end(),
                    [](const Worker& w) { return w.kind == WorkerKind::human; }) > 1)
    throw InvalidAssembly("at most one human worker is supported");
  if (operations_.empty()) throw InvalidAssembly("the assembly has no operations");
  if (!(initial_cost >= 0.0)) throw DomainError("initial cost must be non-negative");

  const SubAssembly all = root();
  auto op_name = [&](std::size_t i) {
    const auto& op = operations_[i];
    std::string label = op.action >= 0 && op.action < static_cast<int>(action_labels_.size())
                            ? action_labels_[op.action]
                            : "?";
    return "operation #" + std::to_string(i) + " (" + label + ", " + part_name(op.father) + ")";
  };

  std::unordered_set<std::uint64_t> fathers;
  std::unordered_set<std::uint64_t> node_set;
  for (std::size_t i = 0; i < operations_.size(); ++i) {
    const auto& op = operations_[i];
    if (op.action < 0 || op.action >= static_cast<int>(action_labels_.size()))
      throw InvariantViolation(op_name(i) + ": unknown action");
    if (!all.contains(op.father)) throw InvariantViolation(op_name(i) + ": father references unknown pieces");
    if (op.left.empty() || op.right.empty()) throw InvariantViolation(op_name(i) + ": empty child");
    if (op.left.overlaps(op.right)) throw InvariantViolation(op_name(i) + ": children overlap");
    if ((op.left | op.right) != op.father)
      throw InvariantViolation(op_name(i) + ": children do not tile the father");
    fathers.insert(op.father.bits());
    node_set.insert(op.father.bits());
    node_set.insert(op.left.bits());
    node_set.insert(op.right.bits());
  }
  {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < operations_.size(); ++i) {
      const auto& op = operations_[i];
      auto lo = std::min(op.left, op.right), hi = std::max(op.left, op.right);
      std::string key = std::to_string(lo.bits()) + ":" + std::to_string(hi.bits()) + ":" +
                        std::to_string(op.action);
      if (!seen.insert(key).second) throw InvariantViolation(op_name(i) + ": duplicate operation");
    }
  }
  if (!fathers.contains(all.bits())) throw InvalidAssembly("no operation produces the complete assembly");
  for (auto bits : node_set) {
    SubAssembly n{bits};
    if (!n.is_leaf() && !fathers.contains(bits))
      throw InvariantViolation("sub-assembly " + part_name(n) + " has no operation that builds it");
  }

  for (auto bits : node_set) nodes_.push_back(SubAssembly{bits});
  std::sort(nodes_.begin(), nodes_.end());

  const int w = static_cast<int>(workers_.size());
  op_arcs_.resize(operations_.size());
  for (std::size_t i = 0; i < operations_.size(); ++i) {
    const auto& op = operations_[i];
    for (int a = 0; a < w; ++a) {
      ArcId id = static_cast<ArcId>(arcs_.size());
      arcs_.push_back({id, op.father, op.left, op.right, op.action, a, static_cast<int>(i)});
      op_arcs_[i].push_back(id);
      by_father_[op.father.bits()].push_back(id);
    }
  }
  costs_.assign(arcs_.size(), initial_cost);
  pruned_.assign(arcs_.size(), false);

  // Every node must hang below the root.
  std::unordered_set<std::uint64_t> reached{all.bits()};
  std::vector<SubAssembly> stack{all};
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    for (ArcId id : arcs_from(n))
      for (auto c : {arcs_[id].left, arcs_[id].right})
        if (reached.insert(c.bits()).second) stack.push_back(c);
  }
  for (auto n : nodes_)
    if (!reached.contains(n.bits()))
      throw InvariantViolation("sub-assembly " + part_name(n) + " is not reachable from the root");
}

std::vector<SubAssembly> AndOrGraph::leaves() const {
  std::vector<SubAssembly> out;
  for (int p = 0; p < piece_count_; ++p) out.push_back(SubAssembly::single(p));
  return out;
}

const HyperArc& AndOrGraph::arc(ArcId id) const {
  if (id < 0 || id >= static_cast<ArcId>(arcs_.size())) throw LookupError("unknown arc id " + std::to_string(id));
  return arcs_[id];
}

std::span<const ArcId> AndOrGraph::arcs_from(SubAssembly node) const {
  auto it = by_father_.find(node.bits());
  if (it == by_father_.end()) return {};
  return it->second;
}

std::optional<ArcId> AndOrGraph::find_arc(int operation, WorkerId agent) const {
  if (operation < 0 || operation >= static_cast<int>(op_arcs_.size())) return std::nullopt;
  for (ArcId id : op_arcs_[operation])
    if (arcs_[id].agent == agent) return id;
  return std::nullopt;
}

ActionId AndOrGraph::action_id(const std::string& label) const {
  auto it = std::find(action_labels_.begin(), action_labels_.end(), label);
  if (it == action_labels_.end()) throw LookupError("unknown action '" + label + "'");
  return static_cast<ActionId>(it - action_labels_.begin());
}

WorkerId AndOrGraph::worker_id(const std::string& name) const {
  for (std::size_t i = 0; i < workers_.size(); ++i)
    if (workers_[i].name == name) return static_cast<WorkerId>(i);
  throw LookupError("unknown worker '" + name + "'");
}

std::optional<WorkerId> AndOrGraph::human() const {
  for (std::size_t i = 0; i < workers_.size(); ++i)
    if (workers_[i].kind == WorkerKind::human) return static_cast<WorkerId>(i);
  return std::nullopt;
}

std::string AndOrGraph::part_name(SubAssembly s) const {
  std::string out;
  for (PieceId p : s.pieces()) {
    if (!out.empty()) out += '+';
    out += p < static_cast<int>(piece_names_.size()) ? piece_names_[p] : "p" + std::to_string(p + 1);
  }
  return out.empty() ? "{}" : out;
}

std::size_t AndOrGraph::active_arc_count() const {
  return static_cast<std::size_t>(std::count(pruned_.begin(), pruned_.end(), false));
}

bool AndOrGraph::feasible_with(const std::vector<bool>& pruned) const {
  // Nodes sorted by size so children are decided before their fathers.
  std::vector<SubAssembly> order(nodes_.begin(), nodes_.end());
  std::stable_sort(order.begin(), order.end(), [](SubAssembly a, SubAssembly b) { return a.size() < b.size(); });
  std::unordered_set<std::uint64_t> solvable;
  for (auto n : order) {
    if (n.is_leaf()) {
      solvable.insert(n.bits());
      continue;
    }
    for (ArcId id : arcs_from(n)) {
      const auto& a = arcs_[id];
      if (!pruned[id] && solvable.contains(a.left.bits()) && solvable.contains(a.right.bits())) {
        solvable.insert(n.bits());
        break;
      }
    }
  }
  return solvable.contains(root().bits());
}

bool AndOrGraph::feasible() const { return feasible_with(pruned_); }

void AndOrGraph::prune(ActionId action, WorkerId agent) {
  if (action < 0 || action >= static_cast<int>(action_labels_.size())) throw LookupError("unknown action id");
  if (agent < 0 || agent >= static_cast<int>(workers_.size())) throw LookupError("unknown worker id");
  auto next = pruned_;
  for (const auto& a : arcs_)
    if (a.action == action && a.agent == agent) next[a.id] = true;
  if (!feasible_with(next))
    throw Infeasible("pruning " + action_labels_[action] + "/" + workers_[agent].name +
                     " leaves no feasible assembly plan");
  pruned_ = std::move(next);
}

void AndOrGraph::prune_arc(ArcId id) {
  arc(id);
  auto next = pruned_;
  next[id] = true;
  if (!feasible_with(next)) throw Infeasible("pruning arc " + std::to_string(id) + " leaves no feasible assembly plan");
  pruned_ = std::move(next);
}

void AndOrGraph::exclude_arc(ArcId id) {
  arc(id);
  pruned_[id] = true;
}

void AndOrGraph::restore(ActionId action, WorkerId agent) {
  for (const auto& a : arcs_)
    if (a.action == action && a.agent == agent) pruned_[a.id] = false;
}

void AndOrGraph::set_cost(ActionId action, WorkerId agent, double cost) {
  if (!(cost >= 0.0) || !std::isfinite(cost)) throw DomainError("arc cost must be finite and non-negative");
  bool any = false;
  for (const auto& a : arcs_)
    if (a.action == action && a.agent == agent && !pruned_[a.id]) {
      costs_[a.id] = cost;
      any = true;
    }
  if (!any) throw LookupError("no active arc for the requested (action, agent) pair");
}

void AndOrGraph::set_arc_cost(ArcId id, double cost) {
  arc(id);
  if (!(cost >= 0.0) || !std::isfinite(cost)) throw DomainError("arc cost must be finite and non-negative");
  if (pruned_[id]) throw LookupError("arc " + std::to_string(id) + " is pruned");
  costs_[id] = cost;
}

void AndOrGraph::apply(const CostSnapshot& snapshot) {
  if (snapshot.size() != costs_.size()) throw DomainError("cost snapshot size does not match the graph");
  for (double c : snapshot)
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("arc cost must be finite and non-negative");
  costs_ = snapshot;
}

std::size_t AndOrGraph::topology_hash() const {
  std::size_t seed = static_cast<std::size_t>(piece_count_);
  for (auto n : nodes_) hash_combine(seed, n.bits());
  for (const auto& a : arcs_) {
    hash_combine(seed, a.father.bits());
    hash_combine(seed, a.left.bits());
    hash_combine(seed, a.right.bits());
    hash_combine(seed, static_cast<std::uint64_t>(a.action) << 32 | static_cast<std::uint32_t>(a.agent));
    hash_combine(seed, pruned_[a.id] ? 1 : 0);
  }
  return seed;
}

}  // namespace ergoalloc
