#include "bmc/instance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bmc/errors.hpp"

namespace bmc {

double BmcInstance::total_weight() const {
  double total = 0.0;
  for (const auto& e : edges_) total += e.w;
  return total;
}

bool BmcInstance::has_matching_demands() const {
  std::vector<int> seen(static_cast<std::size_t>(std::max(n_, 0)), 0);
  for (const auto& p : pairs_) {
    if (p.s < 0 || p.s >= n_ || p.t < 0 || p.t >= n_ || p.s == p.t) return false;
    if (seen[p.s]++ || seen[p.t]++) return false;
  }
  return true;
}

std::vector<Vertex> BmcInstance::partners() const {
  if (!has_matching_demands()) {
    throw std::invalid_argument("partners(): demands graph is not a matching");
  }
  std::vector<Vertex> partner(static_cast<std::size_t>(n_), -1);
  for (const auto& p : pairs_) {
    partner[p.s] = p.t;
    partner[p.t] = p.s;
  }
  return partner;
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].message;
  }
  return os.str();
}

ValidationReport validate(const BmcInstance& inst) {
  ValidationReport report;
  const int n = inst.num_vertices();
  auto add = [&](ViolationKind kind, int index, std::string msg) {
    report.violations.push_back({kind, index, std::move(msg)});
  };
  if (n < 0) add(ViolationKind::NegativeVertexCount, -1, "negative vertex count");
  auto in_range = [n](Vertex v) { return v >= 0 && v < n; };

  for (int i = 0; i < static_cast<int>(inst.edges().size()); ++i) {
    const auto& e = inst.edges()[i];
    const std::string where = "edge " + std::to_string(i);
    if (!in_range(e.u) || !in_range(e.v)) {
      add(ViolationKind::VertexOutOfRange, i, where + ": vertex out of range");
    }
    if (e.u == e.v) add(ViolationKind::SelfLoop, i, where + ": self-loop");
    if (!std::isfinite(e.w)) {
      add(ViolationKind::NonFiniteWeight, i, where + ": non-finite weight");
    } else if (e.w < 0) {
      add(ViolationKind::NegativeWeight, i, where + ": negative weight");
    }
  }
  for (int i = 0; i < inst.num_pairs(); ++i) {
    const auto& p = inst.pairs()[i];
    const std::string where = "pair " + std::to_string(i);
    if (!in_range(p.s) || !in_range(p.t)) {
      add(ViolationKind::VertexOutOfRange, i, where + ": vertex out of range");
    }
    if (p.s == p.t) add(ViolationKind::DegeneratePair, i, where + ": degenerate pair");
  }
  return report;
}

void require_valid(const BmcInstance& inst) {
  auto report = validate(inst);
  if (!report.ok()) throw std::invalid_argument("malformed instance: " + report.to_string());
}

double cut_value(const BmcInstance& inst, const std::vector<Side>& side) {
  if (side.size() != static_cast<std::size_t>(inst.num_vertices())) {
    throw std::invalid_argument("cut_value: side assignment has " + std::to_string(side.size()) +
                                " entries for " + std::to_string(inst.num_vertices()) +
                                " vertices");
  }
  double cut = 0.0;
  for (const auto& e : inst.edges()) {
    if (side[e.u] != side[e.v]) cut += e.w;
  }
  return cut;
}

bool is_feasible(const BmcInstance& inst, const std::vector<Side>& side) {
  if (side.size() != static_cast<std::size_t>(inst.num_vertices())) return false;
  return std::all_of(inst.pairs().begin(), inst.pairs().end(),
                     [&](const DemandPair& p) { return side[p.s] != side[p.t]; });
}

Bipartition make_bipartition(const BmcInstance& inst, std::vector<Side> side) {
  Bipartition b;
  b.cut_value = cut_value(inst, side);
  b.side = std::move(side);
  return b;
}

namespace {

std::vector<DemandPair> dedupe_pairs(const std::vector<DemandPair>& pairs) {
  std::set<std::pair<Vertex, Vertex>> seen;
  std::vector<DemandPair> out;
  for (const auto& p : pairs) {
    auto key = std::minmax(p.s, p.t);
    if (seen.insert(key).second) out.push_back(p);
  }
  return out;
}

}  // namespace

DemandsGraph demands_graph(const BmcInstance& inst) {
  require_valid(inst);
  const int n = inst.num_vertices();
  DemandsGraph dg;
  dg.demands = dedupe_pairs(inst.pairs());

  std::vector<std::vector<Vertex>> adj(n);
  std::vector<char> is_terminal(n, 0);
  for (const auto& p : dg.demands) {
    adj[p.s].push_back(p.t);
    adj[p.t].push_back(p.s);
    is_terminal[p.s] = is_terminal[p.t] = 1;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (is_terminal[v]) dg.terminals.push_back(v);
  }

  std::vector<int> colour(n, -1);
  dg.component.assign(n, -1);
  bool bipartite = true;
  // BFS from the source of each component's first pair so that sources
  // receive colour 0 in the common (matching) case.
  for (const auto& p : dg.demands) {
    if (dg.component[p.s] != -1) continue;
    const int comp = dg.num_components++;
    std::queue<Vertex> q;
    q.push(p.s);
    colour[p.s] = 0;
    dg.component[p.s] = comp;
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop();
      for (Vertex v : adj[u]) {
        if (colour[v] == -1) {
          colour[v] = 1 - colour[u];
          dg.component[v] = comp;
          q.push(v);
        } else if (colour[v] == colour[u]) {
          bipartite = false;
        }
      }
    }
  }
  if (bipartite) dg.colouring = std::move(colour);
  return dg;
}

FusedInstance fuse_demands(const BmcInstance& inst) {
  const DemandsGraph dg = demands_graph(inst);
  if (!dg.bipartite()) {
    throw InfeasibleInstance("demands graph has an odd cycle; no feasible bipartition exists");
  }
  const auto& colour = *dg.colouring;
  const int n = inst.num_vertices();

  FusedInstance out;
  out.vertex_map.assign(n, -1);
  // class_id[comp][colour] -> fused vertex
  std::vector<std::array<int, 2>> class_id(dg.num_components, {-1, -1});
  int next = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (dg.component[v] == -1) {
      out.vertex_map[v] = next++;
    } else {
      int& id = class_id[dg.component[v]][colour[v]];
      if (id == -1) id = next++;
      out.vertex_map[v] = id;
    }
  }

  std::vector<DemandPair> pairs;
  pairs.reserve(dg.num_components);
  std::vector<char> emitted(dg.num_components, 0);
  for (const auto& p : dg.demands) {
    const int comp = dg.component[p.s];
    if (emitted[comp]) continue;
    emitted[comp] = 1;
    pairs.push_back({class_id[comp][0], class_id[comp][1]});
  }

  // Merge parallel edges into their first occurrence; drop contracted loops.
  std::vector<Edge> edges;
  std::map<std::pair<Vertex, Vertex>, std::size_t> index;
  for (const auto& e : inst.edges()) {
    Vertex a = out.vertex_map[e.u];
    Vertex b = out.vertex_map[e.v];
    if (a == b) continue;
    auto key = std::minmax(a, b);
    auto [it, inserted] = index.try_emplace(key, edges.size());
    if (inserted) {
      edges.push_back({a, b, e.w});
    } else {
      edges[it->second].w += e.w;
    }
  }
  out.instance = BmcInstance(next, std::move(edges), std::move(pairs));
  return out;
}

Bipartition FusedInstance::lift(const BmcInstance& original, const Bipartition& fused) const {
  if (fused.side.size() != static_cast<std::size_t>(instance.num_vertices())) {
    throw std::invalid_argument("lift: partition does not match the fused instance");
  }
  std::vector<Side> side(vertex_map.size());
  for (std::size_t v = 0; v < vertex_map.size(); ++v) side[v] = fused.side[vertex_map[v]];
  return make_bipartition(original, std::move(side));
}

}  // namespace bmc
