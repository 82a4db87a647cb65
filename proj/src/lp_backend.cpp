#include "bmc/lp_backend.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace bmc {

double LinearProgram::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (double xi : x) worst = std::max(worst, -xi);
  for (const auto& row : rows) {
    double lhs = 0.0;
    for (auto [j, a] : row.coeffs) lhs += a * x[j];
    switch (row.sense) {
      case RowSense::GreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
      case RowSense::LessEqual: worst = std::max(worst, lhs - row.rhs); break;
      case RowSense::Equal: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

double LinearProgram::evaluate(const std::vector<double>& x) const {
  double total = 0.0;
  for (int j = 0; j < num_vars; ++j) total += objective[j] * x[j];
  return total;
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
    case LpStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Interior point
// ---------------------------------------------------------------------------

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct SparseRows {
  std::vector<std::vector<std::pair<int, double>>> rows;
  VectorXd rhs;

  VectorXd multiply(const VectorXd& x) const {
    VectorXd out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double acc = 0.0;
      for (auto [j, a] : rows[i]) acc += a * x[j];
      out[i] = acc;
    }
    return out;
  }
  VectorXd multiply_transpose(const VectorXd& y, int n) const {
    VectorXd out = VectorXd::Zero(n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (auto [j, a] : rows[i]) out[j] += a * y[i];
    }
    return out;
  }
};

double max_step(const VectorXd& v, const VectorXd& dv) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

}  // namespace

LpResult InteriorPointLp::solve(const LinearProgram& lp) const {
  const int n = lp.num_vars;
  // Inequalities in ">=" form (x >= 0 included as identity rows) and equalities.
  SparseRows ineq, eq;
  std::vector<double> ineq_rhs, eq_rhs;
  for (const auto& row : lp.rows) {
    switch (row.sense) {
      case RowSense::GreaterEqual:
        ineq.rows.push_back(row.coeffs);
        ineq_rhs.push_back(row.rhs);
        break;
      case RowSense::LessEqual: {
        auto neg = row.coeffs;
        for (auto& [j, a] : neg) a = -a;
        ineq.rows.push_back(std::move(neg));
        ineq_rhs.push_back(-row.rhs);
        break;
      }
      case RowSense::Equal:
        eq.rows.push_back(row.coeffs);
        eq_rhs.push_back(row.rhs);
        break;
    }
  }
  for (int j = 0; j < n; ++j) {
    ineq.rows.push_back({{j, 1.0}});
    ineq_rhs.push_back(0.0);
  }
  ineq.rhs = Eigen::Map<VectorXd>(ineq_rhs.data(), static_cast<Eigen::Index>(ineq_rhs.size()));
  eq.rhs = Eigen::Map<VectorXd>(eq_rhs.data(), static_cast<Eigen::Index>(eq_rhs.size()));
  const auto mi = static_cast<Eigen::Index>(ineq.rows.size());
  const auto me = static_cast<Eigen::Index>(eq.rows.size());

  VectorXd c = Eigen::Map<const VectorXd>(lp.objective.data(), n);
  VectorXd x = VectorXd::Ones(n);
  VectorXd s = (ineq.multiply(x) - ineq.rhs).cwiseMax(1.0);
  VectorXd y = VectorXd::Ones(mi);
  VectorXd lambda = VectorXd::Zero(me);

  const double bnorm = 1.0 + std::max(ineq.rhs.lpNorm<Eigen::Infinity>(),
                                      me ? eq.rhs.lpNorm<Eigen::Infinity>() : 0.0);
  const double cnorm = 1.0 + (n ? c.lpNorm<Eigen::Infinity>() : 0.0);

  LpResult result;
  for (int iter = 0; iter < opt_.max_iterations; ++iter) {
    result.iterations = iter;
    const VectorXd rp = ineq.rhs - ineq.multiply(x) + s;
    const VectorXd re = me ? VectorXd(eq.rhs - eq.multiply(x)) : VectorXd();
    VectorXd rd = c - ineq.multiply_transpose(y, n);
    if (me) rd -= eq.multiply_transpose(lambda, n);
    const double mu = s.dot(y) / static_cast<double>(mi);

    const double pobj = c.dot(x);
    const double dobj = ineq.rhs.dot(y) + (me ? eq.rhs.dot(lambda) : 0.0);
    const double pinf = std::max(rp.lpNorm<Eigen::Infinity>(),
                                 me ? re.lpNorm<Eigen::Infinity>() : 0.0) / bnorm;
    const double dinf = (n ? rd.lpNorm<Eigen::Infinity>() : 0.0) / cnorm;
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    if (pinf < opt_.tolerance && dinf < opt_.tolerance && gap < opt_.tolerance) {
      result.status = LpStatus::Optimal;
      break;
    }
    // Near the floor of double precision dinf/gap can stall slightly above the
    // target while mu keeps shrinking; accept at the contract level.
    if (mu < 1e-13 * (1.0 + std::abs(pobj)) && pinf < opt_.tolerance &&
        dinf < opt_.acceptable && gap < opt_.acceptable) {
      result.status = LpStatus::Optimal;
      break;
    }
    if (!std::isfinite(mu) || x.lpNorm<Eigen::Infinity>() > 1e14 ||
        y.lpNorm<Eigen::Infinity>() > 1e14) {
      result.status = LpStatus::NumericalFailure;
      break;
    }

    const VectorXd d = y.cwiseQuotient(s);
    MatrixXd K = MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < mi; ++i) {
      const auto& row = ineq.rows[i];
      for (auto [j, a] : row) {
        for (auto [l, b] : row) K(j, l) += d[i] * a * b;
      }
    }
    K.diagonal().array() += 1e-14 * (1.0 + K.diagonal().maxCoeff());
    Eigen::LLT<MatrixXd> chol(K);
    if (chol.info() != Eigen::Success) {
      result.status = LpStatus::NumericalFailure;
      break;
    }
    MatrixXd KiEt;
    Eigen::LLT<MatrixXd> schur;
    if (me) {
      MatrixXd Et = MatrixXd::Zero(n, me);
      for (Eigen::Index i = 0; i < me; ++i) {
        for (auto [j, a] : eq.rows[i]) Et(j, i) += a;
      }
      KiEt = chol.solve(Et);
      MatrixXd S = Et.transpose() * KiEt;
      S.diagonal().array() += 1e-14 * (1.0 + S.diagonal().maxCoeff());
      schur.compute(S);
      if (schur.info() != Eigen::Success) {
        result.status = LpStatus::NumericalFailure;
        break;
      }
    }

    struct Step {
      VectorXd dx, ds, dy, dl;
    };
    auto direction = [&](const VectorXd& rc) {
      Step st;
      const VectorXd g = ineq.multiply_transpose(rc.cwiseQuotient(s) + d.cwiseProduct(rp), n) - rd;
      VectorXd kg = chol.solve(g);
      if (me) {
        st.dl = schur.solve(re - eq.multiply(kg));
        st.dx = kg + KiEt * st.dl;
      } else {
        st.dx = kg;
      }
      st.ds = ineq.multiply(st.dx) - rp;
      st.dy = (rc - y.cwiseProduct(st.ds)).cwiseQuotient(s);
      return st;
    };

    const Step aff = direction(-s.cwiseProduct(y));
    const double ap_aff = std::min(1.0, max_step(s, aff.ds));
    const double ad_aff = std::min(1.0, max_step(y, aff.dy));
    const double mu_aff =
        (s + ap_aff * aff.ds).dot(y + ad_aff * aff.dy) / static_cast<double>(mi);
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

    const VectorXd rc =
        VectorXd::Constant(mi, sigma * mu) - s.cwiseProduct(y) - aff.ds.cwiseProduct(aff.dy);
    const Step st = direction(rc);
    const double tau = 0.995;
    const double ap = std::min(1.0, tau * max_step(s, st.ds));
    const double ad = std::min(1.0, tau * max_step(y, st.dy));
    x += ap * st.dx;
    s += ap * st.ds;
    y += ad * st.dy;
    if (me) lambda += ad * st.dl;
    result.status = LpStatus::IterationLimit;
  }

  result.x.assign(x.data(), x.data() + n);
  result.objective = lp.evaluate(result.x);
  return result;
}

// ---------------------------------------------------------------------------
// Dense simplex
// ---------------------------------------------------------------------------

LpResult DenseSimplexLp::solve(const LinearProgram& lp) const {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  const double tol = opt_.tolerance;

  // Column layout: [x (n) | slack/surplus (m) | artificial (m) | rhs].
  const int slack0 = n;
  const int art0 = n + m;
  const int cols = n + 2 * m;
  MatrixXd T = MatrixXd::Zero(m + 1, cols + 1);  // row m is the objective row
  std::vector<int> basis(m);
  std::vector<char> is_art_basic(m, 0);

  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    double sign = row.rhs < 0 ? -1.0 : 1.0;
    for (auto [j, a] : row.coeffs) T(i, j) += sign * a;
    T(i, cols) = sign * row.rhs;
    RowSense sense = row.sense;
    if (sign < 0 && sense != RowSense::Equal) {
      sense = sense == RowSense::GreaterEqual ? RowSense::LessEqual : RowSense::GreaterEqual;
    }
    if (sense == RowSense::LessEqual) {
      T(i, slack0 + i) = 1.0;
      basis[i] = slack0 + i;
    } else {
      if (sense == RowSense::GreaterEqual) T(i, slack0 + i) = -1.0;
      T(i, art0 + i) = 1.0;
      basis[i] = art0 + i;
      is_art_basic[i] = 1;
    }
  }

  LpResult result;
  int pivots = 0;

  auto pivot = [&](int r, int col) {
    T.row(r) /= T(r, col);
    for (int i = 0; i <= m; ++i) {
      if (i != r && T(i, col) != 0.0) T.row(i) -= T(i, col) * T.row(r);
    }
    basis[r] = col;
    ++pivots;
  };

  // Minimizes the objective loaded in row m over columns [0, allowed).
  // Returns false when unbounded.
  auto run = [&](int allowed) {
    int degenerate = 0;
    while (pivots < opt_.max_pivots) {
      const bool bland = degenerate > 50;
      int col = -1;
      double best = -tol;
      for (int j = 0; j < allowed; ++j) {
        if (T(m, j) < best) {
          col = j;
          if (bland) break;
          best = T(m, j);
        }
      }
      if (col < 0) return true;
      int r = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (T(i, col) > tol) {
          const double q = T(i, cols) / T(i, col);
          if (q < ratio - 1e-12 || (q <= ratio + 1e-12 && r >= 0 && basis[i] < basis[r])) {
            ratio = q;
            r = i;
          }
        }
      }
      if (r < 0) return false;
      degenerate = ratio < 1e-12 ? degenerate + 1 : 0;
      pivot(r, col);
    }
    return true;
  };

  // Phase 1: minimise the sum of artificials expressed in non-basic terms.
  for (int i = 0; i < m; ++i) {
    if (is_art_basic[i]) T.row(m) -= T.row(i);
  }
  for (int i = 0; i < m; ++i) {
    if (is_art_basic[i]) T(m, art0 + i) = 0.0;
  }
  run(cols);
  if (pivots >= opt_.max_pivots) {
    result.status = LpStatus::IterationLimit;
    return result;
  }
  if (-T(m, cols) > 1e-7) {
    result.status = LpStatus::Infeasible;
    return result;
  }
  // Drive remaining artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (basis[i] < art0) continue;
    for (int j = 0; j < art0; ++j) {
      if (std::abs(T(i, j)) > 1e-7) {
        pivot(i, j);
        break;
      }
    }
  }

  // Phase 2.
  T.row(m).setZero();
  for (int j = 0; j < n; ++j) T(m, j) = lp.objective[j];
  for (int i = 0; i < m; ++i) {
    const int b = basis[i];
    if (b < n && lp.objective[b] != 0.0) T.row(m) -= lp.objective[b] * T.row(i);
  }
  const bool bounded = run(art0);
  result.iterations = pivots;
  if (!bounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  if (pivots >= opt_.max_pivots) {
    result.status = LpStatus::IterationLimit;
    return result;
  }
  result.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) result.x[basis[i]] = std::max(0.0, T(i, cols));
  }
  result.objective = lp.evaluate(result.x);
  result.status = LpStatus::Optimal;
  return result;
}

// ---------------------------------------------------------------------------

std::unique_ptr<LpBackend> make_lp_backend(std::string_view name) {
  if (name == "ipm") return std::make_unique<InteriorPointLp>();
  if (name == "simplex") return std::make_unique<DenseSimplexLp>();
  throw std::invalid_argument("unknown LP backend '" + std::string(name) + "'");
}

std::unique_ptr<LpBackend> default_lp_backend() {
  const char* env = std::getenv("BMC_BACKEND");
  if (!env || !*env) return make_lp_backend("ipm");
  return make_lp_backend(env);
}

void write_lp(std::ostream& out, const LinearProgram& lp) {
  std::size_t nnz = 0;
  for (const auto& row : lp.rows) nnz += row.coeffs.size();
  out << "lp " << lp.rows.size() << ' ' << lp.num_vars << ' ' << nnz << '\n';
  out.precision(17);
  for (int j = 0; j < lp.num_vars; ++j) {
    if (lp.objective[j] != 0.0) out << "c " << j << ' ' << lp.objective[j] << '\n';
  }
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    const char* sense = row.sense == RowSense::GreaterEqual ? "ge"
                        : row.sense == RowSense::LessEqual  ? "le"
                                                            : "eq";
    out << "r " << i << ' ' << sense << ' ' << row.rhs << '\n';
    for (auto [j, a] : row.coeffs) out << "a " << i << ' ' << j << ' ' << a << '\n';
  }
}

}  // namespace bmc
