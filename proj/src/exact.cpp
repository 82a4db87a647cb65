#include "bmc/exact.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "bmc/errors.hpp"
#include "bmc/maxflow.hpp"

namespace bmc {

Bipartition solve_exact(const BmcInstance& inst, const ExactConfig& cfg) {
  require_valid(inst);
  if (!inst.has_matching_demands()) {
    throw std::invalid_argument("solve_exact: demands must be a matching (run fuse_demands)");
  }
  const int n = inst.num_vertices();
  const int k = inst.num_pairs();
  if (k > cfg.max_pairs) {
    throw std::invalid_argument("solve_exact: " + std::to_string(k) + " pairs exceeds limit " +
                                std::to_string(cfg.max_pairs));
  }
  if (k == 0) return make_bipartition(inst, std::vector<Side>(n, Side::X));

  // Terminal arcs need only exceed any finite cut.
  const double big = 1.0 + 2.0 * inst.total_weight();
  const int super_source = n;
  const int super_sink = n + 1;

  FlowNetwork base(n + 2, super_source, super_sink);
  for (const auto& e : inst.edges()) base.add_edge(e.u, e.v, e.w);

  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> best_side;
  const std::uint64_t assignments = std::uint64_t{1} << (k - 1);
  for (std::uint64_t mask = 0; mask < assignments; ++mask) {
    FlowNetwork net = base;
    for (int i = 0; i < k; ++i) {
      const auto& p = inst.pairs()[i];
      const bool flipped = i > 0 && ((mask >> (i - 1)) & 1U);
      const Vertex in_x = flipped ? p.t : p.s;
      const Vertex in_xbar = flipped ? p.s : p.t;
      net.add_arc(super_source, in_x, big);
      net.add_arc(in_xbar, super_sink, big);
    }
    auto res = max_flow_min_cut(std::move(net));
    if (res.value < best) {
      best = res.value;
      best_side = std::move(res.source_side);
    }
  }

  std::vector<Side> side(n);
  for (int v = 0; v < n; ++v) side[v] = best_side[v] ? Side::X : Side::Xbar;
  auto out = make_bipartition(inst, std::move(side));
  if (!is_feasible(inst, out.side)) {
    throw InternalError("solve_exact: minimum cut does not separate all pairs");
  }
  return out;
}

Bipartition brute_force(const BmcInstance& inst) {
  require_valid(inst);
  const int n = inst.num_vertices();
  if (n > kBruteForceMaxVertices) {
    throw std::invalid_argument("brute_force: n = " + std::to_string(n) + " exceeds " +
                                std::to_string(kBruteForceMaxVertices));
  }
  if (n == 0) return make_bipartition(inst, {});

  // Vertex n-1 is fixed to X; bit v of the mask puts vertex v in Xbar.
  const std::uint32_t count = std::uint32_t{1} << (n - 1);
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  bool found = false;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    bool ok = true;
    for (const auto& p : inst.pairs()) {
      if (((mask >> p.s) & 1U) == ((mask >> p.t) & 1U)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    double cut = 0.0;
    for (const auto& e : inst.edges()) {
      if (((mask >> e.u) & 1U) != ((mask >> e.v) & 1U)) cut += e.w;
    }
    if (!found || cut < best) {
      best = cut;
      best_mask = mask;
      found = true;
    }
  }
  if (!found) throw InfeasibleInstance("brute_force: no bipartition separates every pair");

  std::vector<Side> side(n);
  for (int v = 0; v < n; ++v) side[v] = ((best_mask >> v) & 1U) ? Side::Xbar : Side::X;
  return make_bipartition(inst, std::move(side));
}

}  // namespace bmc
