#include "bmc/lp_relaxation.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <tuple>

#include "bmc/errors.hpp"

namespace bmc {

namespace {

/// Unordered vertex pairs grouped into symmetry orbits; one LP column each.
class PairColumns {
 public:
  explicit PairColumns(const BmcInstance& inst) : n_(inst.num_vertices()) {
    const auto partner = inst.partners();
    col_.assign(static_cast<std::size_t>(n_) * n_, -1);
    for (int u = 0; u < n_; ++u) {
      for (int v = u + 1; v < n_; ++v) {
        if (col_[key(u, v)] >= 0) continue;
        const int c = num_cols_++;
        col_[key(u, v)] = col_[key(v, u)] = c;
        if (partner[u] >= 0 && partner[v] >= 0) {
          const int pu = partner[u], pv = partner[v];
          col_[key(pu, pv)] = col_[key(pv, pu)] = c;
        }
      }
    }
  }

  int size() const { return num_cols_; }
  int operator()(Vertex u, Vertex v) const { return col_[key(u, v)]; }

 private:
  std::size_t key(Vertex u, Vertex v) const { return static_cast<std::size_t>(u) * n_ + v; }
  int n_;
  int num_cols_ = 0;
  std::vector<int> col_;
};

using RowKey = std::vector<std::pair<int, int>>;

/// d(a,b) + d(b,c) - d(a,c) >= 0 in column space, or empty if it collapses to 0 >= 0.
RowKey triangle_row(const PairColumns& cols, Vertex a, Vertex b, Vertex c) {
  std::map<int, int> coef;
  coef[cols(a, b)] += 1;
  coef[cols(b, c)] += 1;
  coef[cols(a, c)] -= 1;
  RowKey row;
  for (auto [j, a_j] : coef) {
    if (a_j != 0) row.emplace_back(j, a_j);
  }
  // Nonnegative combinations of x >= 0 are implied by the bounds.
  if (std::all_of(row.begin(), row.end(), [](auto p) { return p.second > 0; })) row.clear();
  return row;
}

class ProgramBuilder {
 public:
  ProgramBuilder(const BmcInstance& inst, const PairColumns& cols) : cols_(cols), lp_(cols.size()) {
    for (const auto& e : inst.edges()) {
      if (e.u != e.v) lp_.objective[cols(e.u, e.v)] += e.w;
    }
    std::set<int> seen;
    for (const auto& p : inst.pairs()) {
      const int c = cols(p.s, p.t);
      if (seen.insert(c).second) lp_.add_row({{c, 1.0}}, RowSense::GreaterEqual, 1.0);
    }
  }

  /// Returns false if the row is trivial or already present.
  bool add_triangle(Vertex a, Vertex b, Vertex c) {
    RowKey row = triangle_row(cols_, a, b, c);
    if (row.empty() || !rows_.insert(row).second) return false;
    std::vector<std::pair<int, double>> coeffs;
    coeffs.reserve(row.size());
    for (auto [j, a_j] : row) coeffs.emplace_back(j, static_cast<double>(a_j));
    lp_.add_row(std::move(coeffs), RowSense::GreaterEqual, 0.0);
    return true;
  }

  const LinearProgram& program() const { return lp_; }

 private:
  const PairColumns& cols_;
  LinearProgram lp_;
  std::set<RowKey> rows_;
};

FiniteMetric metric_from(const PairColumns& cols, int n, const std::vector<double>& x) {
  FiniteMetric m(n, MetricOrigin::Lp);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) m.set(u, v, std::max(0.0, x[cols(u, v)]));
  }
  return m;
}

struct Violated {
  double amount;
  Vertex a, b, c;  // d(a,c) > d(a,b) + d(b,c)
};

std::vector<Violated> violated_triangles(const FiniteMetric& d, double tol) {
  std::vector<Violated> out;
  const int n = d.size();
  for (int a = 0; a < n; ++a) {
    for (int c = a + 1; c < n; ++c) {
      const double dac = d(a, c);
      for (int b = 0; b < n; ++b) {
        if (b == a || b == c) continue;
        const double amount = dac - d(a, b) - d(b, c);
        if (amount > tol) out.push_back({amount, a, b, c});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Violated& x, const Violated& y) {
    return std::tie(y.amount, x.a, x.b, x.c) < std::tie(x.amount, y.a, y.b, y.c);
  });
  return out;
}

}  // namespace

LpSolution build_and_solve_lp(const BmcInstance& inst, const LpConfig& cfg) {
  require_valid(inst);
  if (!inst.has_matching_demands()) {
    throw std::invalid_argument("build_and_solve_lp: demands must form a matching (fuse first)");
  }
  const int n = inst.num_vertices();
  const PairColumns cols(inst);

  std::unique_ptr<LpBackend> owned;
  const LpBackend* backend = cfg.backend;
  if (!backend) {
    owned = default_lp_backend();
    backend = owned.get();
  }

  LpSolution sol;
  sol.num_vars = cols.size();
  ProgramBuilder builder(inst, cols);

  const bool lazy = cfg.triangles == TriangleMode::Lazy ||
                    (cfg.triangles == TriangleMode::Auto && n > cfg.lazy_threshold);
  if (!lazy) {
    for (int a = 0; a < n; ++a) {
      for (int c = a + 1; c < n; ++c) {
        for (int b = 0; b < n; ++b) {
          if (b != a && b != c) builder.add_triangle(a, b, c);
        }
      }
    }
  }

  std::vector<double> x(static_cast<std::size_t>(cols.size()), 0.0);
  for (int round = 1;; ++round) {
    if (round > cfg.max_rounds) {
      throw SolverError("LP lazy triangle loop did not converge in " +
                        std::to_string(cfg.max_rounds) + " rounds");
    }
    sol.rounds = round;
    if (cols.size() > 0) {
      LpResult res = backend->solve(builder.program());
      sol.status = res.status;
      if (res.status != LpStatus::Optimal) {
        throw SolverError("LP backend '" + backend->name() + "' returned " +
                          to_string(res.status));
      }
      x = std::move(res.x);
    } else {
      sol.status = LpStatus::Optimal;
    }
    sol.metric = metric_from(cols, n, x);
    if (!lazy) break;
    const auto violated = violated_triangles(sol.metric, cfg.tolerance);
    if (violated.empty()) break;
    int added = 0;
    for (const auto& t : violated) {
      if (added >= cfg.batch) break;
      if (builder.add_triangle(t.a, t.b, t.c)) ++added;
    }
    if (added == 0) {
      throw SolverError("LP lazy loop: violated triangles are already present; backend inaccurate");
    }
  }

  sol.num_rows = static_cast<int>(builder.program().rows.size());
  sol.value = sol.metric.volume(inst);
  if (cfg.dump) write_lp(*cfg.dump, builder.program());
  return sol;
}

bool verify_path_constraints(const BmcInstance& inst, const FiniteMetric& metric, double tol) {
  const int n = inst.num_vertices();
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  for (const auto& e : inst.edges()) {
    const double len = metric(e.u, e.v);
    adj[e.u].emplace_back(e.v, len);
    adj[e.v].emplace_back(e.u, len);
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& p : inst.pairs()) {
    std::vector<double> dist(static_cast<std::size_t>(n), inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[p.s] = 0.0;
    pq.emplace(0.0, p.s);
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du > dist[u]) continue;
      for (auto [v, len] : adj[u]) {
        if (du + len < dist[v]) {
          dist[v] = du + len;
          pq.emplace(dist[v], v);
        }
      }
    }
    if (dist[p.t] < 1.0 - tol) return false;
  }
  return true;
}

}  // namespace bmc
