#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ergoalloc {

inline constexpr int kMaxPieces = 64;

using PieceId = int;
using ActionId = int;
using WorkerId = int;
using ArcId = int;

/// A set of atomic pieces, stored as a bit set over piece indices.
class SubAssembly {
 public:
  constexpr SubAssembly() = default;
  constexpr explicit SubAssembly(std::uint64_t bits) : bits_(bits) {}

  static constexpr SubAssembly single(PieceId p) { return SubAssembly{std::uint64_t{1} << p}; }
  /// Pieces [first, last], inclusive.
  static constexpr SubAssembly range(PieceId first, PieceId last) {
    std::uint64_t hi = last >= 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << (last + 1)) - 1;
    std::uint64_t lo = (std::uint64_t{1} << first) - 1;
    return SubAssembly{hi & ~lo};
  }
  static constexpr SubAssembly all(int piece_count) { return range(0, piece_count - 1); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_leaf() const { return size() == 1; }
  constexpr PieceId lowest() const { return std::countr_zero(bits_); }
  constexpr bool contains(PieceId p) const { return (bits_ >> p) & 1U; }
  constexpr bool contains(SubAssembly o) const { return (bits_ & o.bits_) == o.bits_; }
  constexpr bool overlaps(SubAssembly o) const { return (bits_ & o.bits_) != 0; }

  constexpr SubAssembly operator|(SubAssembly o) const { return SubAssembly{bits_ | o.bits_}; }
  constexpr SubAssembly operator&(SubAssembly o) const { return SubAssembly{bits_ & o.bits_}; }
  constexpr bool operator==(const SubAssembly&) const = default;
  constexpr auto operator<=>(const SubAssembly&) const = default;

  std::vector<PieceId> pieces() const;

 private:
  std::uint64_t bits_ = 0;
};

/// A partition of all pieces into disjoint sub-assemblies, kept in canonical
/// order (ascending lowest piece index).
class Configuration {
 public:
  Configuration() = default;
  /// Validates disjointness and canonicalizes; throws InvariantViolation.
  explicit Configuration(std::vector<SubAssembly> parts);

  static Configuration assembled(int piece_count);
  static Configuration separated(int piece_count);

  std::span<const SubAssembly> parts() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  SubAssembly covered() const;
  bool contains_part(SubAssembly s) const;

  /// Replaces `part` by the two halves `a` and `b` (one disassembly step).
  Configuration split(SubAssembly part, SubAssembly a, SubAssembly b) const;
  /// Replaces halves `a` and `b` by their union (one assembly step).
  Configuration join(SubAssembly a, SubAssembly b) const;

  std::size_t hash() const;
  bool operator==(const Configuration&) const = default;
  /// Lexicographic over the canonical part list.
  bool operator<(const Configuration& o) const { return parts_ < o.parts_; }

 private:
  struct Unchecked {};
  Configuration(std::vector<SubAssembly> parts, Unchecked) : parts_(std::move(parts)) {}
  std::vector<SubAssembly> parts_;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const { return c.hash(); }
};

enum class WorkerKind { human, robot };

struct Worker {
  std::string name;
  WorkerKind kind = WorkerKind::robot;
};

std::string to_string(WorkerKind kind);
/// Exactly one human followed by `count - 1` robots named robot1, robot2, ...
std::vector<Worker> make_team(int count);

/// One assembly operation before per-agent duplication.
struct Operation {
  SubAssembly father;
  SubAssembly left;
  SubAssembly right;
  ActionId action = 0;
};

struct HyperArc {
  ArcId id = 0;
  SubAssembly father;
  SubAssembly left;
  SubAssembly right;
  ActionId action = 0;
  WorkerId agent = 0;
  int operation = 0;  // index into operations()
};

using CostSnapshot = std::vector<double>;

/// AND/OR graph of an assembly task with one hyper-arc per (operation, agent).
/// Topology is fixed at construction; only costs and pruning flags mutate.
class AndOrGraph {
 public:
  /// Throws InvalidAssembly for degenerate inputs and InvariantViolation for
  /// operations whose children do not tile their father.
  AndOrGraph(int piece_count, std::vector<std::string> piece_names,
             std::vector<std::string> action_labels, std::vector<Worker> workers,
             std::vector<Operation> operations, double initial_cost = 1.0);

  int piece_count() const { return piece_count_; }
  SubAssembly root() const { return SubAssembly::all(piece_count_); }
  std::vector<SubAssembly> leaves() const;
  std::span<const SubAssembly> nodes() const { return nodes_; }
  std::span<const HyperArc> arcs() const { return arcs_; }
  std::span<const Operation> operations() const { return operations_; }
  std::span<const Worker> workers() const { return workers_; }
  std::span<const std::string> piece_names() const { return piece_names_; }
  std::span<const std::string> action_labels() const { return action_labels_; }

  const HyperArc& arc(ArcId id) const;
  /// Arc ids whose father is `node` (pruned ones included); empty for leaves.
  std::span<const ArcId> arcs_from(SubAssembly node) const;
  /// Arc ids of operation `op`, one per worker.
  std::span<const ArcId> arcs_of_operation(int op) const { return op_arcs_[op]; }
  std::optional<ArcId> find_arc(int operation, WorkerId agent) const;

  ActionId action_id(const std::string& label) const;
  WorkerId worker_id(const std::string& name) const;
  std::optional<WorkerId> human() const;
  std::string part_name(SubAssembly s) const;

  bool active(ArcId id) const { return !pruned_.at(id); }
  std::size_t active_arc_count() const;

  /// Excludes every (action, agent) arc from search. Idempotent. Throws
  /// Infeasible (and leaves the graph untouched) if the assembly would no
  /// longer be plannable from the separated pieces.
  void prune(ActionId action, WorkerId agent);
  void prune_arc(ArcId id);
  /// Marks an arc unusable without the plannability check; an over-pruned
  /// graph then surfaces as NoFeasiblePlan at search time.
  void exclude_arc(ArcId id);
  void restore(ActionId action, WorkerId agent);
  /// True if Θ_f can still be decomposed into single pieces.
  bool feasible() const;

  double cost(ArcId id) const { return costs_.at(id); }
  /// Sets the cost of every active (action, agent) arc.
  void set_cost(ActionId action, WorkerId agent, double cost);
  void set_arc_cost(ArcId id, double cost);
  void apply(const CostSnapshot& snapshot);
  CostSnapshot snapshot() const { return costs_; }

  /// Hash of nodes, arcs and pruning flags. Costs are excluded.
  std::size_t topology_hash() const;

 private:
  bool feasible_with(const std::vector<bool>& pruned) const;

  int piece_count_;
  std::vector<std::string> piece_names_;
  std::vector<std::string> action_labels_;
  std::vector<Worker> workers_;
  std::vector<Operation> operations_;
  std::vector<SubAssembly> nodes_;
  std::vector<HyperArc> arcs_;
  std::vector<std::vector<ArcId>> op_arcs_;
  std::unordered_map<std::uint64_t, std::vector<ArcId>> by_father_;
  std::vector<double> costs_;
  std::vector<bool> pruned_;
};

/// Chain of pieces with N-1 interconnections: every contiguous range is a node
/// and every cut of a range is an operation.
AndOrGraph build_sequential(int piece_count, std::vector<Worker> agents);

/// Hub growth: {p_1..p_k} joins leaf p_{k+1}, in fixed order.
AndOrGraph build_scarce(int piece_count, std::vector<Worker> agents);

}  // namespace ergoalloc
