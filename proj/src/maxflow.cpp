#include "bmc/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace bmc {

FlowNetwork::FlowNetwork(int num_vertices, int source, int sink)
    : source_(source), sink_(sink), adj_(num_vertices) {
  if (source < 0 || source >= num_vertices || sink < 0 || sink >= num_vertices ||
      source == sink) {
    throw std::invalid_argument("FlowNetwork: bad source/sink");
  }
}

void FlowNetwork::add_arc(int u, int v, double capacity) {
  if (capacity < 0) throw std::invalid_argument("FlowNetwork: negative capacity");
  adj_[u].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({v, capacity, capacity});
  adj_[v].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({u, 0.0, 0.0});
}

void FlowNetwork::add_edge(int u, int v, double w) {
  if (w < 0) throw std::invalid_argument("FlowNetwork: negative capacity");
  adj_[u].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({v, w, w});
  adj_[v].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({u, w, w});
}

struct MaxFlowSolver {
  FlowNetwork& net;
  std::vector<int> level;
  std::vector<std::size_t> next_arc;

  bool build_levels() {
    level.assign(net.adj_.size(), -1);
    std::queue<int> q;
    level[net.source_] = 0;
    q.push(net.source_);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int a : net.adj_[u]) {
        const auto& arc = net.arcs_[a];
        if (arc.residual > FlowNetwork::kEpsilon && level[arc.to] < 0) {
          level[arc.to] = level[u] + 1;
          q.push(arc.to);
        }
      }
    }
    return level[net.sink_] >= 0;
  }

  double push(int u, double limit) {
    if (u == net.sink_) return limit;
    for (auto& i = next_arc[u]; i < net.adj_[u].size(); ++i) {
      const int a = net.adj_[u][i];
      auto& arc = net.arcs_[a];
      if (arc.residual <= FlowNetwork::kEpsilon || level[arc.to] != level[u] + 1) continue;
      double pushed = push(arc.to, std::min(limit, arc.residual));
      if (pushed > FlowNetwork::kEpsilon) {
        arc.residual -= pushed;
        net.arcs_[a ^ 1].residual += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  double run() {
    double flow = 0.0;
    while (build_levels()) {
      next_arc.assign(net.adj_.size(), 0);
      while (true) {
        double pushed = push(net.source_, std::numeric_limits<double>::infinity());
        if (pushed <= FlowNetwork::kEpsilon) break;
        flow += pushed;
      }
    }
    return flow;
  }
};

MaxFlowResult max_flow_min_cut(FlowNetwork net) {
  MaxFlowSolver solver{net, {}, {}};
  MaxFlowResult result;
  result.value = solver.run();
  // The final level graph is exactly the residual reachability from the source.
  result.source_side.assign(net.num_vertices(), false);
  for (int v = 0; v < net.num_vertices(); ++v) result.source_side[v] = solver.level[v] >= 0;
  return result;
}

double cut_capacity(const FlowNetwork& net, const std::vector<bool>& source_side) {
  double total = 0.0;
  for (int u = 0; u < net.num_vertices(); ++u) {
    if (!source_side[u]) continue;
    for (int a : net.out_arcs(u)) {
      const auto& arc = net.arcs()[a];
      if (!source_side[arc.to]) total += arc.capacity;
    }
  }
  return total;
}

}  // namespace bmc
