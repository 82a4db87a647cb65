#include "bmc/sdp_relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <tuple>

#include "bmc/errors.hpp"

namespace bmc {

using Eigen::MatrixXd;

namespace {

/// d(x, y) with unit diagonal substituted: constant + coef * Yr(a, b).
struct DistanceTerm {
  int constant = 0;
  int a = -1, b = -1;
  int coef = 0;
};

class ReducedGram {
 public:
  explicit ReducedGram(const BmcInstance& inst) {
    const int n = inst.num_vertices();
    const auto partner = inst.partners();
    index_.assign(static_cast<std::size_t>(n), -1);
    sign_.assign(static_cast<std::size_t>(n), 1);
    for (int v = 0; v < n; ++v) {
      if (index_[v] >= 0) continue;
      index_[v] = dim_;
      if (partner[v] >= 0) {
        index_[partner[v]] = dim_;
        sign_[partner[v]] = -1;
      }
      ++dim_;
    }
  }

  int dim() const { return dim_; }
  const std::vector<int>& index() const { return index_; }
  const std::vector<int>& sign() const { return sign_; }

  DistanceTerm distance(Vertex x, Vertex y) const {
    DistanceTerm t;
    if (x == y) return t;
    const int a = index_[x], b = index_[y];
    if (a == b) {
      t.constant = 4;
      return t;
    }
    t.constant = 2;
    t.a = std::min(a, b);
    t.b = std::max(a, b);
    t.coef = -2 * sign_[x] * sign_[y];
    return t;
  }

 private:
  int dim_ = 0;
  std::vector<int> index_;
  std::vector<int> sign_;
};

using ConstraintKey = std::vector<int>;

/// d(u,v) + d(v,w) - d(u,w) >= 0, or nullopt-like empty key when it holds identically.
std::pair<ConstraintKey, SdpConstraint> triangle_constraint(const ReducedGram& rg, Vertex u,
                                                            Vertex v, Vertex w) {
  std::map<std::pair<int, int>, int> coef;
  int constant = 0;
  auto add = [&](const DistanceTerm& t, int scale) {
    constant += scale * t.constant;
    if (t.coef != 0) coef[{t.a, t.b}] += scale * t.coef;
  };
  add(rg.distance(u, v), 1);
  add(rg.distance(v, w), 1);
  add(rg.distance(u, w), -1);

  ConstraintKey key;
  SdpConstraint c;
  c.sense = SdpSense::GreaterEqual;
  c.rhs = -static_cast<double>(constant);
  for (auto [ab, a] : coef) {
    if (a == 0) continue;
    key.insert(key.end(), {ab.first, ab.second, a});
    c.entries.push_back({ab.first, ab.second, static_cast<double>(a)});
  }
  if (key.empty()) {
    if (constant < 0) throw InternalError("SDP triangle constraint is identically violated");
    return {};
  }
  key.push_back(constant);
  return {std::move(key), std::move(c)};
}

MatrixXd expand(const ReducedGram& rg, const MatrixXd& Yr) {
  const int n = static_cast<int>(rg.index().size());
  MatrixXd Y(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      Y(u, v) = rg.sign()[u] * rg.sign()[v] * Yr(rg.index()[u], rg.index()[v]);
    }
  }
  return Y;
}

struct Violated {
  double amount;
  Vertex u, v, w;  // d(u,w) > d(u,v) + d(v,w)
};

std::vector<Violated> violated_triangles(const GramSolution& g, double tol) {
  std::vector<Violated> out;
  const int n = static_cast<int>(g.Y.rows());
  for (int u = 0; u < n; ++u) {
    for (int w = u + 1; w < n; ++w) {
      const double duw = g.distance(u, w);
      for (int v = 0; v < n; ++v) {
        if (v == u || v == w) continue;
        const double amount = duw - g.distance(u, v) - g.distance(v, w);
        if (amount > tol) out.push_back({amount, u, v, w});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Violated& x, const Violated& y) {
    return std::tie(y.amount, x.u, x.v, x.w) < std::tie(x.amount, y.u, y.v, y.w);
  });
  return out;
}

}  // namespace

GramSolution GramSolution::from_matrix(const MatrixXd& Y) {
  GramSolution g;
  g.Y = 0.5 * (Y + Y.transpose());
  g.reduced = g.Y;
  const int n = static_cast<int>(Y.rows());
  g.index.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) g.index[v] = v;
  g.sign.assign(static_cast<std::size_t>(n), 1);
  return g;
}

GramSolution build_and_solve_sdp(const BmcInstance& inst, const SdpConfig& cfg) {
  require_valid(inst);
  if (!inst.has_matching_demands()) {
    throw std::invalid_argument("build_and_solve_sdp: demands must form a matching (fuse first)");
  }
  std::unique_ptr<SdpBackend> owned;
  const SdpBackend* backend = cfg.backend;
  if (!backend) {
    owned = default_sdp_backend();
    backend = owned.get();
  }

  const ReducedGram rg(inst);
  const int r = rg.dim();
  SdpProblem prob;
  prob.dim = r;
  prob.objective = MatrixXd::Zero(r, r);
  for (const auto& e : inst.edges()) {
    // (1/4) w (Y_uu + Y_vv - 2 Y_uv); the constant part is dropped from the program.
    const DistanceTerm t = rg.distance(e.u, e.v);
    if (t.coef == 0) continue;
    prob.objective(t.a, t.b) += 0.125 * e.w * t.coef;
    prob.objective(t.b, t.a) += 0.125 * e.w * t.coef;
  }
  for (int a = 0; a < r; ++a) prob.constraints.push_back({{{a, a, 1.0}}, SdpSense::Equal, 1.0});

  GramSolution g;
  g.index = rg.index();
  g.sign = rg.sign();
  std::set<ConstraintKey> present;
  for (int round = 1;; ++round) {
    if (round > cfg.max_rounds) {
      throw SolverError("SDP lazy triangle loop did not converge in " +
                        std::to_string(cfg.max_rounds) + " rounds");
    }
    g.rounds = round;
    if (r > 0) {
      SdpResult res = backend->solve(prob);
      if (res.status != SdpStatus::Optimal) {
        throw SolverError("SDP backend '" + backend->name() + "' returned " +
                          to_string(res.status));
      }
      g.reduced = std::move(res.X);
    } else {
      g.reduced = MatrixXd::Zero(0, 0);
    }
    g.Y = expand(rg, g.reduced);

    const auto violated = violated_triangles(g, cfg.tolerance);
    g.violated_per_round.push_back(static_cast<int>(violated.size()));
    g.max_violation_per_round.push_back(violated.empty() ? 0.0 : violated.front().amount);
    if (violated.empty()) break;
    int added = 0;
    for (const auto& t : violated) {
      if (added >= cfg.batch) break;
      auto [key, c] = triangle_constraint(rg, t.u, t.v, t.w);
      if (key.empty() || !present.insert(key).second) continue;
      prob.constraints.push_back(std::move(c));
      ++added;
    }
    if (added == 0) {
      throw SolverError("SDP lazy loop: violated triangles are already present; backend inaccurate");
    }
  }

  g.num_constraints = static_cast<int>(prob.constraints.size());
  double value = 0.0;
  for (const auto& e : inst.edges()) value += 0.25 * e.w * g.distance(e.u, e.v);
  g.value = value;
  return g;
}

double max_gram_triangle_violation(const GramSolution& g) {
  const auto v = violated_triangles(g, 0.0);
  return v.empty() ? 0.0 : v.front().amount;
}

VectorEmbedding extract_vectors(const GramSolution& g) {
  const int r = static_cast<int>(g.reduced.rows());
  const int n = static_cast<int>(g.index.size());
  VectorEmbedding emb;
  emb.metric = FiniteMetric(n, MetricOrigin::Sdp);
  if (r == 0) {
    emb.vectors = MatrixXd::Zero(0, n);
    return emb;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (g.reduced + g.reduced.transpose()));
  const auto& lam = eig.eigenvalues();
  if (lam(0) < -1e-6) {
    throw std::invalid_argument("Gram matrix has eigenvalue " + std::to_string(lam(0)) +
                                " below -1e-6");
  }
  std::vector<int> kept;
  for (int i = 0; i < r; ++i) {
    if (lam(i) > 0.0) kept.push_back(i);
  }
  MatrixXd B(static_cast<Eigen::Index>(kept.size()), r);  // column a is the reduced vector a
  for (std::size_t row = 0; row < kept.size(); ++row) {
    const int i = kept[row];
    B.row(static_cast<Eigen::Index>(row)) = std::sqrt(lam(i)) * eig.eigenvectors().col(i).transpose();
  }
  for (int a = 0; a < r; ++a) {
    const double norm = B.col(a).norm();
    if (norm > 0) B.col(a) /= norm;
  }
  emb.vectors.resize(B.rows(), n);
  for (int v = 0; v < n; ++v) emb.vectors.col(v) = g.sign[v] * B.col(g.index[v]);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      emb.metric.set(u, v, std::max(0.0, (emb.vectors.col(u) - emb.vectors.col(v)).squaredNorm()));
    }
  }
  return emb;
}

double check_spreading(const VectorEmbedding& emb, const BmcInstance& inst,
                       const std::vector<Vertex>& subset) {
  const auto partner = inst.partners();
  std::set<Vertex> members(subset.begin(), subset.end());
  std::vector<DemandPair> chosen;
  for (Vertex v : members) {
    if (v < 0 || v >= inst.num_vertices() || partner[v] < 0 || !members.count(partner[v])) {
      throw std::invalid_argument("check_spreading: subset is not symmetric");
    }
  }
  for (const auto& p : inst.pairs()) {
    if (members.count(p.s)) chosen.push_back(p);
  }
  const auto& d = emb.metric;
  double total = 0.0;
  for (const auto& a : chosen) {
    for (const auto& b : chosen) {
      total += d(a.s, b.s) + d(a.t, b.t) + d(a.s, b.t) + d(a.t, b.s);
    }
  }
  return 0.5 * total;
}

void write_gram(std::ostream& out, const GramSolution& g) {
  const auto n = g.Y.rows();
  out << "gram " << n << '\n';
  out.precision(17);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) out << (v ? " " : "") << g.Y(u, v);
    out << '\n';
  }
}

void write_embedding(std::ostream& out, const VectorEmbedding& emb) {
  out << "embedding " << emb.vectors.cols() << ' ' << emb.vectors.rows() << '\n';
  out.precision(17);
  for (Eigen::Index v = 0; v < emb.vectors.cols(); ++v) {
    out << v;
    for (Eigen::Index i = 0; i < emb.vectors.rows(); ++i) out << ' ' << emb.vectors(i, v);
    out << '\n';
  }
}

}  // namespace bmc
