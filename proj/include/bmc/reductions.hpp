#pragma once

#include <cstddef>
#include <vector>

#include "bmc/instance.hpp"

namespace bmc {

// ---------------------------------------------------------------------------
// Min UnCut
// ---------------------------------------------------------------------------

/// x_i XOR x_j = parity. i == j is accepted: with parity 1 it can never be
/// satisfied, with parity 0 it is always satisfied.
struct XorConstraint {
  int i = 0;
  int j = 0;
  int parity = 0;
};

struct MinUncutInstance {
  int num_vars = 0;
  std::vector<XorConstraint> constraints;
};

/// Number of constraints violated by `assignment` (one bool per variable).
int unsatisfied_count(const MinUncutInstance& mu, const std::vector<bool>& assignment);

/// Graph on 2n vertices: v_i = i, v_{-i} = n + i. Parity-0 constraints add
/// (v_i, v_j) and (v_{-i}, v_{-j}); parity-1 constraints add (v_i, v_{-j}) and
/// (v_{-i}, v_j). Unit weights, pairs (v_i, v_{-i}). The BMC optimum is twice
/// the Min UnCut optimum. Constraints with i == j and parity 0 contribute no
/// edges (they would be self-loops and are always satisfied).
BmcInstance minuncut_to_bmc(const MinUncutInstance& mu);

/// Reads x_i as "v_i lies on side Xbar".
std::vector<bool> assignment_from_partition(const MinUncutInstance& mu, const Bipartition& p);

// ---------------------------------------------------------------------------
// Euler-circuit path layout
// ---------------------------------------------------------------------------

struct PathReductionConfig {
  std::size_t max_pairs = 10000;
};

/// A BMC instance on a simple path plus the data needed to map solutions back.
/// Path vertex p sits at position p; path edges are (p, p+1).
struct PathReduction {
  BmcInstance path;
  /// copies[v] = path positions holding a copy of original vertex v (may be empty).
  std::vector<std::vector<Vertex>> copies;
  /// auxiliary[v] = path position of v's consistency vertex on the zero-weight tail, or -1.
  std::vector<Vertex> auxiliary;
  /// owner[p] = vertex of the evenized graph that path position p belongs to
  /// (a copy or its auxiliary vertex); aux_position[p] tells which.
  std::vector<Vertex> owner;
  std::vector<bool> aux_position;
  /// Vertex added to make all degrees even, or -1. Its id is num_original.
  Vertex dummy = -1;
  int num_original = 0;

  /// Side of each original vertex, read off its copies. Throws
  /// std::invalid_argument if the copies of some vertex disagree.
  Bipartition back_map(const BmcInstance& original, const Bipartition& path_partition) const;

  /// Path partition realising `original_partition` at equal cost.
  Bipartition forward_map(const Bipartition& original_partition) const;
};

/// Lays an Euler circuit of the (evenized) graph out as a path with copy
/// demands so that the optimum is preserved. Requires matching demands.
/// Throws std::length_error if the output would exceed cfg.max_pairs pairs.
PathReduction bmc_to_path(const BmcInstance& inst, const PathReductionConfig& cfg = {});

/// Hierholzer's algorithm on a multigraph whose vertices all have even degree.
/// Returns the edge indices of the circuit through `start`'s component, in
/// circuit order starting and ending at `start`.
std::vector<int> euler_circuit(int num_vertices, const std::vector<Edge>& edges, Vertex start);

// ---------------------------------------------------------------------------
// Multicut on a path
// ---------------------------------------------------------------------------

/// Path v_m, e_m, v_{m-1}, ..., e_1, v_0. weights[i-1] is the weight of e_i
/// (the edge between v_i and v_{i-1}). Pairs are vertex indices in [0, m].
struct PathInstance {
  std::vector<double> weights;
  std::vector<std::pair<int, int>> pairs;

  int num_edges() const { return static_cast<int>(weights.size()); }
};

struct PathMulticut {
  double value = 0.0;
  /// Indices i of the cut edges e_i, increasing.
  std::vector<int> edges;
};

/// Ordinary multicut on a path: cheapest edge set separating every pair.
/// Scans from v_m towards v_0 keeping the index of the last cut edge, the
/// only information needed to know which pairs have slid onto the current
/// vertex. Ties prefer cutting fewer edges.
PathMulticut path_multicut_dp(const PathInstance& p);

/// True if every pair has a chosen edge strictly between its endpoints.
bool separates_all(const PathInstance& p, const std::vector<int>& edges);

/// Converts a BMC instance whose graph is a simple path through all vertices.
/// The endpoint with the smaller id becomes v_m. `order` receives the
/// instance vertex at each path index (order[i] is v_i).
PathInstance path_from_instance(const BmcInstance& inst, std::vector<Vertex>* order = nullptr);

}  // namespace bmc
