#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bmc {

using Vertex = int;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double w = 0.0;
};

struct DemandPair {
  Vertex s = 0;
  Vertex t = 0;
};

enum class Side : std::uint8_t { X = 0, Xbar = 1 };

inline Side opposite(Side s) { return s == Side::X ? Side::Xbar : Side::X; }

/// Weighted undirected multigraph with k source-sink demand pairs.
///
/// The constructor does not validate; call validate() or require_valid().
/// Parallel edges are allowed and their weights add up in every computation.
class BmcInstance {
 public:
  BmcInstance() = default;
  BmcInstance(int n, std::vector<Edge> edges, std::vector<DemandPair> pairs)
      : n_(n), edges_(std::move(edges)), pairs_(std::move(pairs)) {}

  int num_vertices() const { return n_; }
  int num_pairs() const { return static_cast<int>(pairs_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<DemandPair>& pairs() const { return pairs_; }

  double total_weight() const;

  /// True when every vertex is in at most one pair (demands graph is a matching).
  bool has_matching_demands() const;

  /// partner[v] = the other terminal of v's pair, or -1 for non-terminals.
  /// Requires matching demands.
  std::vector<Vertex> partners() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<DemandPair> pairs_;
};

enum class ViolationKind {
  VertexOutOfRange,
  SelfLoop,
  NegativeWeight,
  NonFiniteWeight,
  DegeneratePair,
  NegativeVertexCount,
};

struct Violation {
  ViolationKind kind;
  int index;  // edge or pair index; -1 if not applicable
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string to_string() const;
};

ValidationReport validate(const BmcInstance& inst);

/// Throws std::invalid_argument carrying the report if the instance is malformed.
void require_valid(const BmcInstance& inst);

struct Bipartition {
  std::vector<Side> side;
  double cut_value = 0.0;
};

/// Sum of weights of edges whose endpoints lie on different sides.
/// Throws std::invalid_argument if `side` does not cover every vertex.
double cut_value(const BmcInstance& inst, const std::vector<Side>& side);

/// Every pair has its terminals on different sides.
bool is_feasible(const BmcInstance& inst, const std::vector<Side>& side);

Bipartition make_bipartition(const BmcInstance& inst, std::vector<Side> side);

/// Graph on the terminals with one edge per (deduplicated) demand pair.
struct DemandsGraph {
  std::vector<Vertex> terminals;      // sorted
  std::vector<DemandPair> demands;    // deduplicated, input order
  /// 2-colouring of the terminals (indexed by vertex id; -1 for non-terminals),
  /// or nullopt when some component has an odd cycle.
  std::optional<std::vector<int>> colouring;
  std::vector<int> component;         // component id per vertex, -1 for non-terminals
  int num_components = 0;

  bool bipartite() const { return colouring.has_value(); }
};

DemandsGraph demands_graph(const BmcInstance& inst);

struct FusedInstance {
  BmcInstance instance;
  std::vector<Vertex> vertex_map;  // original vertex -> fused vertex

  /// Pulls a partition of the fused instance back to the original vertices.
  Bipartition lift(const BmcInstance& original, const Bipartition& fused) const;
};

/// Contracts each colour class of every demands-graph component into one
/// vertex so the result has a perfect matching of distinct terminals.
/// Throws InfeasibleInstance when the demands graph has an odd cycle.
FusedInstance fuse_demands(const BmcInstance& inst);

}  // namespace bmc
