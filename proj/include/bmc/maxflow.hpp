#pragma once

#include <vector>

namespace bmc {

/// Capacitated network for s-t max-flow (Dinic). Arcs are stored in pairs;
/// arc i and arc i^1 are mutual residual partners.
class FlowNetwork {
 public:
  /// Residual capacities at or below this are treated as saturated.
  static constexpr double kEpsilon = 1e-12;

  FlowNetwork(int num_vertices, int source, int sink);

  int num_vertices() const { return static_cast<int>(adj_.size()); }
  int source() const { return source_; }
  int sink() const { return sink_; }

  /// Directed arc u->v; the partner arc starts with zero capacity.
  void add_arc(int u, int v, double capacity);
  /// Undirected edge: two opposite arcs of capacity w, each the other's partner.
  void add_edge(int u, int v, double w);

  struct Arc {
    int to;
    double capacity;  // original
    double residual;
  };
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<int>& out_arcs(int v) const { return adj_[v]; }

 private:
  friend struct MaxFlowSolver;
  int source_;
  int sink_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
};

struct MaxFlowResult {
  double value = 0.0;
  /// source_side[v]: v is reachable from the source in the final residual network.
  std::vector<bool> source_side;
};

/// Maximum flow and the source side of a minimum cut. The network is taken by
/// value; the caller's copy is left untouched.
MaxFlowResult max_flow_min_cut(FlowNetwork net);

/// Capacity of the arcs leaving `source_side` (original capacities).
double cut_capacity(const FlowNetwork& net, const std::vector<bool>& source_side);

}  // namespace bmc
