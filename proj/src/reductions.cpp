#include "bmc/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bmc {

// ---------------------------------------------------------------------------
// Min UnCut
// ---------------------------------------------------------------------------

int unsatisfied_count(const MinUncutInstance& mu, const std::vector<bool>& assignment) {
  if (assignment.size() != static_cast<std::size_t>(mu.num_vars)) {
    throw std::invalid_argument("unsatisfied_count: assignment size mismatch");
  }
  int count = 0;
  for (const auto& c : mu.constraints) {
    const int lhs = (assignment[c.i] != assignment[c.j]) ? 1 : 0;
    if (lhs != c.parity) ++count;
  }
  return count;
}

BmcInstance minuncut_to_bmc(const MinUncutInstance& mu) {
  const int n = mu.num_vars;
  for (const auto& c : mu.constraints) {
    if (c.i < 0 || c.i >= n || c.j < 0 || c.j >= n || (c.parity != 0 && c.parity != 1)) {
      throw std::invalid_argument("minuncut_to_bmc: malformed constraint");
    }
  }
  auto pos = [](int i) { return i; };
  auto neg = [n](int i) { return n + i; };

  std::vector<Edge> edges;
  for (const auto& c : mu.constraints) {
    if (c.parity == 0) {
      if (c.i == c.j) continue;
      edges.push_back({pos(c.i), pos(c.j), 1.0});
      edges.push_back({neg(c.i), neg(c.j), 1.0});
    } else {
      edges.push_back({pos(c.i), neg(c.j), 1.0});
      edges.push_back({neg(c.i), pos(c.j), 1.0});
    }
  }
  std::vector<DemandPair> pairs;
  pairs.reserve(n);
  for (int i = 0; i < n; ++i) pairs.push_back({pos(i), neg(i)});
  return BmcInstance(2 * n, std::move(edges), std::move(pairs));
}

std::vector<bool> assignment_from_partition(const MinUncutInstance& mu, const Bipartition& p) {
  std::vector<bool> x(mu.num_vars);
  for (int i = 0; i < mu.num_vars; ++i) x[i] = p.side.at(i) == Side::Xbar;
  return x;
}

// ---------------------------------------------------------------------------
// Euler circuit and path layout
// ---------------------------------------------------------------------------

std::vector<int> euler_circuit(int num_vertices, const std::vector<Edge>& edges, Vertex start) {
  std::vector<std::vector<std::pair<int, Vertex>>> adj(num_vertices);
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    adj[edges[i].u].push_back({i, edges[i].v});
    adj[edges[i].v].push_back({i, edges[i].u});
  }
  for (const auto& a : adj) {
    if (a.size() % 2 != 0) throw std::invalid_argument("euler_circuit: odd degree vertex");
  }
  std::vector<char> used(edges.size(), 0);
  std::vector<std::size_t> next(num_vertices, 0);
  std::vector<std::pair<Vertex, int>> stack{{start, -1}};
  std::vector<int> circuit;
  while (!stack.empty()) {
    auto [v, via] = stack.back();
    auto& i = next[v];
    while (i < adj[v].size() && used[adj[v][i].first]) ++i;
    if (i == adj[v].size()) {
      stack.pop_back();
      if (via >= 0) circuit.push_back(via);
    } else {
      auto [e, w] = adj[v][i];
      used[e] = 1;
      stack.push_back({w, e});
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  return circuit;
}

PathReduction bmc_to_path(const BmcInstance& inst, const PathReductionConfig& cfg) {
  require_valid(inst);
  if (!inst.has_matching_demands()) {
    throw std::invalid_argument("bmc_to_path: demands must be a matching (run fuse_demands)");
  }
  const int n = inst.num_vertices();
  PathReduction out;
  out.num_original = n;

  // (a) evenize with a dummy vertex joined to every odd-degree vertex.
  std::vector<Edge> edges = inst.edges();
  std::vector<int> degree(n, 0);
  for (const auto& e : edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  int total = n;
  if (std::any_of(degree.begin(), degree.end(), [](int d) { return d % 2; })) {
    out.dummy = n;
    total = n + 1;
    for (Vertex v = 0; v < n; ++v) {
      if (degree[v] % 2) edges.push_back({v, out.dummy, 0.0});
    }
  }
  std::vector<int> deg(total, 0);
  for (const auto& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }

  // (b) one circuit per component, laid out back to back; consecutive
  // circuits are joined by zero-weight links.
  out.copies.assign(total, {});
  std::vector<Edge> path_edges;
  std::vector<char> covered(total, 0);
  int length = 0;
  for (Vertex start = 0; start < total; ++start) {
    if (deg[start] == 0 || covered[start]) continue;
    const auto circuit = euler_circuit(total, edges, start);
    if (length > 0) path_edges.push_back({length - 1, length, 0.0});
    Vertex cur = start;
    out.copies[cur].push_back(length);
    covered[cur] = 1;
    out.owner.push_back(cur);
    ++length;
    for (int e : circuit) {
      const Vertex nxt = edges[e].u == cur ? edges[e].v : edges[e].u;
      path_edges.push_back({length - 1, length, edges[e].w});
      out.copies[nxt].push_back(length);
      out.owner.push_back(nxt);
      covered[nxt] = 1;
      ++length;
      cur = nxt;
    }
  }
  out.aux_position.assign(length, false);

  // (c) zero-weight tail with one consistency vertex per non-terminal. A
  // terminal whose partner has no copy gets one too, since no copy demand
  // would otherwise tie its copies together.
  const auto partner = inst.partners();
  out.auxiliary.assign(total, -1);
  for (Vertex v = 0; v < total; ++v) {
    const bool terminal = v < n && partner[v] >= 0;
    const bool needs_aux = !terminal || (out.copies[partner[v]].empty() && !out.copies[v].empty());
    if (!needs_aux) continue;
    if (length > 0) path_edges.push_back({length - 1, length, 0.0});
    out.auxiliary[v] = length;
    out.owner.push_back(v);
    out.aux_position.push_back(true);
    ++length;
  }

  // (d) demands.
  std::vector<DemandPair> pairs;
  auto add_pair = [&](Vertex a, Vertex b) {
    if (pairs.size() >= cfg.max_pairs) {
      throw std::length_error("bmc_to_path: output exceeds " + std::to_string(cfg.max_pairs) +
                              " pairs");
    }
    pairs.push_back({a, b});
  };
  for (const auto& p : inst.pairs()) {
    for (Vertex x : out.copies[p.s]) {
      for (Vertex y : out.copies[p.t]) add_pair(x, y);
    }
  }
  for (Vertex v = 0; v < total; ++v) {
    if (out.auxiliary[v] < 0) continue;
    for (Vertex c : out.copies[v]) add_pair(out.auxiliary[v], c);
  }

  out.path = BmcInstance(length, std::move(path_edges), std::move(pairs));
  return out;
}

Bipartition PathReduction::back_map(const BmcInstance& original,
                                    const Bipartition& path_partition) const {
  if (path_partition.side.size() != static_cast<std::size_t>(path.num_vertices())) {
    throw std::invalid_argument("back_map: partition does not match the path instance");
  }
  const int n = num_original;
  std::vector<Side> side(n, Side::X);
  std::vector<char> known(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    if (copies[v].empty()) continue;
    const Side s = path_partition.side[copies[v].front()];
    for (Vertex c : copies[v]) {
      if (path_partition.side[c] != s) {
        throw std::invalid_argument("back_map: copies of vertex " + std::to_string(v) +
                                    " lie on different sides");
      }
    }
    side[v] = s;
    known[v] = 1;
  }
  for (const auto& p : original.pairs()) {
    if (known[p.s] && !known[p.t]) side[p.t] = opposite(side[p.s]);
    if (known[p.t] && !known[p.s]) side[p.s] = opposite(side[p.t]);
    if (!known[p.s] && !known[p.t]) {
      side[p.s] = Side::X;
      side[p.t] = Side::Xbar;
    }
  }
  return make_bipartition(original, std::move(side));
}

Bipartition PathReduction::forward_map(const Bipartition& original_partition) const {
  if (original_partition.side.size() != static_cast<std::size_t>(num_original)) {
    throw std::invalid_argument("forward_map: partition does not match the original instance");
  }
  auto side_of = [&](Vertex v) {
    return v < num_original ? original_partition.side[v] : Side::X;
  };
  std::vector<Side> side(path.num_vertices());
  for (int p = 0; p < path.num_vertices(); ++p) {
    const Side s = side_of(owner[p]);
    side[p] = aux_position[p] ? opposite(s) : s;
  }
  return make_bipartition(path, std::move(side));
}

// ---------------------------------------------------------------------------
// Multicut on a path
// ---------------------------------------------------------------------------

PathMulticut path_multicut_dp(const PathInstance& p) {
  const int m = p.num_edges();
  // lefts[x] = left endpoints a > x of pairs whose right endpoint is x, sorted.
  std::vector<std::vector<int>> lefts(m + 1);
  for (auto [a, b] : p.pairs) {
    if (a < 0 || a > m || b < 0 || b > m || a == b) {
      throw std::invalid_argument("path_multicut_dp: bad pair");
    }
    if (a < b) std::swap(a, b);
    lefts[b].push_back(a);
  }
  for (auto& l : lefts) std::sort(l.begin(), l.end());

  // Standing at v_j with e_last the most recently cut edge (m + 1 if none),
  // the demands sitting on v_j are those with left end in [j, last - 1];
  // e_j is forced when one of them ends at v_{j-1}.
  auto forced = [&](int j, int last) {
    const auto& l = lefts[j - 1];
    auto it = std::lower_bound(l.begin(), l.end(), j);
    return it != l.end() && *it <= last - 1;
  };

  struct Cell {
    double value = 0.0;
    int cuts = 0;
    bool cut = false;
  };
  // table[j][last], last in (j, m + 1].
  std::vector<std::vector<Cell>> table(m + 1, std::vector<Cell>(m + 2));
  auto better = [](double v1, int c1, double v2, int c2) {
    const double tol = 1e-12 * (1.0 + std::abs(v1) + std::abs(v2));
    if (v1 < v2 - tol) return true;
    if (v2 < v1 - tol) return false;
    return c1 < c2;
  };
  for (int j = 1; j <= m; ++j) {
    const double w = p.weights[j - 1];
    for (int last = j + 1; last <= m + 1; ++last) {
      const Cell& after_cut = table[j - 1][j];
      Cell cell{w + after_cut.value, after_cut.cuts + 1, true};
      if (!forced(j, last)) {
        const Cell& keep = table[j - 1][last];
        if (!better(cell.value, cell.cuts, keep.value, keep.cuts)) {
          cell = {keep.value, keep.cuts, false};
        }
      }
      table[j][last] = cell;
    }
  }

  PathMulticut out;
  out.value = m > 0 ? table[m][m + 1].value : 0.0;
  int last = m + 1;
  for (int j = m; j >= 1; --j) {
    if (table[j][last].cut) {
      out.edges.push_back(j);
      last = j;
    }
  }
  std::reverse(out.edges.begin(), out.edges.end());
  return out;
}

bool separates_all(const PathInstance& p, const std::vector<int>& edges) {
  for (auto [a, b] : p.pairs) {
    if (a < b) std::swap(a, b);
    // e_i lies between v_a and v_b iff b < i <= a.
    bool ok = std::any_of(edges.begin(), edges.end(), [&](int i) { return i > b && i <= a; });
    if (!ok) return false;
  }
  return true;
}

PathInstance path_from_instance(const BmcInstance& inst, std::vector<Vertex>* order) {
  require_valid(inst);
  const int n = inst.num_vertices();
  if (n == 0) throw std::invalid_argument("path_from_instance: empty graph");
  if (static_cast<int>(inst.edges().size()) != n - 1) {
    throw std::invalid_argument("path_from_instance: graph is not a simple path");
  }
  std::vector<std::vector<std::pair<Vertex, double>>> adj(n);
  for (const auto& e : inst.edges()) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  Vertex start = -1;
  for (Vertex v = 0; v < n; ++v) {
    if (adj[v].size() > 2) throw std::invalid_argument("path_from_instance: vertex of degree > 2");
    if (adj[v].size() <= 1 && start < 0) start = v;
  }
  if (start < 0) throw std::invalid_argument("path_from_instance: graph is a cycle");

  // Walk from `start`; position p becomes path index m - p.
  const int m = n - 1;
  std::vector<Vertex> walk{start};
  std::vector<double> walk_weights;
  std::vector<char> seen(n, 0);
  seen[start] = 1;
  Vertex cur = start;
  while (static_cast<int>(walk.size()) < n) {
    bool moved = false;
    for (auto [nb, w] : adj[cur]) {
      if (seen[nb]) continue;
      seen[nb] = 1;
      walk.push_back(nb);
      walk_weights.push_back(w);
      cur = nb;
      moved = true;
      break;
    }
    if (!moved) throw std::invalid_argument("path_from_instance: graph is not connected");
  }

  std::vector<int> index(n);
  for (int pos = 0; pos < n; ++pos) index[walk[pos]] = m - pos;
  PathInstance out;
  out.weights.resize(m);
  // Edge between positions pos and pos+1 joins v_{m-pos} and v_{m-pos-1}: e_{m-pos}.
  for (int pos = 0; pos < m; ++pos) out.weights[m - pos - 1] = walk_weights[pos];
  for (const auto& p : inst.pairs()) out.pairs.push_back({index[p.s], index[p.t]});
  if (order) {
    order->assign(n, -1);
    for (int pos = 0; pos < n; ++pos) (*order)[m - pos] = walk[pos];
  }
  return out;
}

}  // namespace bmc
