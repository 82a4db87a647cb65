#include "bmc/sdp_backend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace bmc {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double inner(const std::vector<SdpEntry>& entries, const MatrixXd& G) {
  double acc = 0.0;
  for (const auto& e : entries) acc += e.coef * 0.5 * (G(e.p, e.q) + G(e.q, e.p));
  return acc;
}

void accumulate(MatrixXd& out, const std::vector<SdpEntry>& entries, double scale) {
  for (const auto& e : entries) {
    if (e.p == e.q) {
      out(e.p, e.p) += scale * e.coef;
    } else {
      out(e.p, e.q) += 0.5 * scale * e.coef;
      out(e.q, e.p) += 0.5 * scale * e.coef;
    }
  }
}

/// Largest alpha with M + alpha dM PSD, for M positive definite.
double max_psd_step(const MatrixXd& M, const MatrixXd& dM) {
  Eigen::LLT<MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) return 0.0;
  const MatrixXd Linv = llt.matrixL().solve(MatrixXd::Identity(M.rows(), M.cols()));
  MatrixXd T = Linv * dM * Linv.transpose();
  T = 0.5 * (T + T.transpose());
  const double lam = Eigen::SelfAdjointEigenSolver<MatrixXd>(T, Eigen::EigenvaluesOnly).eigenvalues()(0);
  return lam >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lam;
}

double max_positive_step(const VectorXd& v, const VectorXd& dv) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

}  // namespace

double SdpProblem::evaluate(const SdpConstraint& c, const MatrixXd& X) const {
  return inner(c.entries, X);
}

double SdpProblem::max_violation(const MatrixXd& X) const {
  double worst = 0.0;
  for (const auto& c : constraints) {
    const double lhs = evaluate(c, X);
    if (c.sense == SdpSense::Equal) {
      worst = std::max(worst, std::abs(lhs - c.rhs));
    } else {
      worst = std::max(worst, c.rhs - lhs);
    }
  }
  return worst;
}

std::string to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::IterationLimit: return "iteration-limit";
    case SdpStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

SdpResult InteriorPointSdp::solve(const SdpProblem& prob) const {
  const int n = prob.dim;
  const auto m = static_cast<Eigen::Index>(prob.constraints.size());
  const auto& cons = prob.constraints;

  VectorXd b(m);
  std::vector<char> is_ineq(static_cast<std::size_t>(m), 0);
  int num_ineq = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    b[i] = cons[i].rhs;
    is_ineq[i] = cons[i].sense == SdpSense::GreaterEqual;
    num_ineq += is_ineq[i];
  }
  const MatrixXd C = 0.5 * (prob.objective + prob.objective.transpose());
  const MatrixXd I = MatrixXd::Identity(n, n);

  // Inequality slacks are treated like extra diagonal entries of X.
  const double xi = std::max(10.0, std::sqrt(static_cast<double>(n)));
  const double eta = std::max({10.0, std::sqrt(static_cast<double>(n)), C.norm()});
  MatrixXd X = xi * I;
  MatrixXd Z = eta * I;
  VectorXd y = VectorXd::Zero(m);
  VectorXd s = VectorXd::Zero(m);  // used on inequality rows only
  for (Eigen::Index i = 0; i < m; ++i) {
    if (is_ineq[i]) {
      s[i] = xi;
      y[i] = eta;
    }
  }

  auto mask = [&](VectorXd v) {
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!is_ineq[i]) v[i] = 0.0;
    }
    return v;
  };

  const double bnorm = 1.0 + (m ? b.lpNorm<Eigen::Infinity>() : 0.0);
  const double cnorm = 1.0 + C.norm();

  SdpResult result;
  result.status = SdpStatus::IterationLimit;
  double best_merit = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  MatrixXd best_X = X;
  VectorXd best_y = y;
  for (int iter = 0; iter < opt_.max_iterations; ++iter) {
    result.iterations = iter;
    VectorXd rp(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      rp[i] = b[i] - inner(cons[i].entries, X) + (is_ineq[i] ? s[i] : 0.0);
    }
    MatrixXd Rd = C - Z;
    for (Eigen::Index i = 0; i < m; ++i) accumulate(Rd, cons[i].entries, -y[i]);

    const double complementarity = (X.cwiseProduct(Z)).sum() + mask(s).dot(mask(y));
    const double mu = complementarity / static_cast<double>(n + num_ineq);
    const double pobj = (C.cwiseProduct(X)).sum();
    const double dobj = m ? b.dot(y) : 0.0;
    result.primal_residual = (m ? rp.lpNorm<Eigen::Infinity>() : 0.0) / bnorm;
    result.dual_residual = Rd.norm() / cnorm;
    result.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    result.primal_objective = pobj;
    result.dual_objective = dobj;

    const bool converged = result.primal_residual < opt_.tolerance &&
                           result.dual_residual < opt_.tolerance && result.gap < opt_.tolerance;
    const bool stalled = mu < 1e-13 * (1.0 + std::abs(pobj)) &&
                         result.primal_residual < opt_.acceptable &&
                         result.dual_residual < opt_.acceptable && result.gap < opt_.acceptable;
    const bool acceptable = result.primal_residual < opt_.acceptable &&
                            result.dual_residual < opt_.acceptable &&
                            result.gap < opt_.acceptable;
    if (converged || stalled) {
      result.status = SdpStatus::Optimal;
      break;
    }
    auto fail = [&] {
      result.status = acceptable ? SdpStatus::Optimal : SdpStatus::NumericalFailure;
    };
    // Roundoff in the Schur complement can make the residuals creep back up
    // once the iterates are nearly degenerate; remember the best iterate.
    const double merit =
        std::max({result.primal_residual, result.dual_residual, result.gap});
    if (merit < best_merit) {
      best_merit = merit;
      best_iter = iter;
      best_X = X;
      best_y = y;
    } else if (iter - best_iter > 8) {
      break;
    }
    if (!std::isfinite(mu)) {
      fail();
      break;
    }

    Eigen::LLT<MatrixXd> zchol(Z);
    if (zchol.info() != Eigen::Success) {
      fail();
      break;
    }
    const MatrixXd Zi = zchol.solve(I);

    // Schur complement M_ik = <A_i, X A_k Z^-1> plus slack terms.
    MatrixXd M(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index k = i; k < m; ++k) {
        double acc = 0.0;
        for (const auto& e : cons[i].entries) {
          const int p = e.p, q = e.q;
          for (const auto& f : cons[k].entries) {
            const int pp = f.p, qq = f.q;
            acc += e.coef * f.coef * 0.25 *
                   (X(q, pp) * Zi(qq, p) + X(q, qq) * Zi(pp, p) + X(p, pp) * Zi(qq, q) +
                    X(p, qq) * Zi(pp, q));
          }
        }
        M(i, k) = M(k, i) = acc;
      }
      if (is_ineq[i]) M(i, i) += s[i] / y[i];
    }
    Eigen::LLT<MatrixXd> mchol(M);
    if (m && mchol.info() != Eigen::Success) {
      M.diagonal().array() += 1e-12 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
      mchol.compute(M);
    }
    if (m && mchol.info() != Eigen::Success) {
        fail();
      break;
    }

    const MatrixXd XRdZi = X * Rd * Zi;
    struct Step {
      MatrixXd dX, dZ;
      VectorXd dy, ds;
    };
    auto direction = [&](const MatrixXd& Rc, const VectorXd& rc) {
      Step st;
      const MatrixXd base = Rc * Zi - X - XRdZi;
      VectorXd rhs(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        rhs[i] = rp[i] + (is_ineq[i] ? rc[i] / y[i] : 0.0) - inner(cons[i].entries, base);
      }
      st.dy = m ? VectorXd(mchol.solve(rhs)) : VectorXd();
      auto recover = [&] {
        st.dZ = Rd;
        for (Eigen::Index i = 0; i < m; ++i) accumulate(st.dZ, cons[i].entries, -st.dy[i]);
        MatrixXd dX = Rc * Zi - X - X * st.dZ * Zi;
        st.dX = 0.5 * (dX + dX.transpose());
        st.ds = VectorXd::Zero(m);
        for (Eigen::Index i = 0; i < m; ++i) {
          if (is_ineq[i]) st.ds[i] = (rc[i] - s[i] * st.dy[i]) / y[i];
        }
      };
      recover();
      // Iterative refinement against the linearised primal equations.
      for (int pass = 0; pass < 2 && m; ++pass) {
        VectorXd res(m);
        for (Eigen::Index i = 0; i < m; ++i) {
          res[i] = rp[i] + st.ds[i] - inner(cons[i].entries, st.dX);
        }
        if (res.lpNorm<Eigen::Infinity>() < 1e-15 * bnorm) break;
        st.dy += mchol.solve(res);
        recover();
      }
      return st;
    };
    auto primal_step = [&](const Step& st) {
      return std::min(max_psd_step(X, st.dX), max_positive_step(mask(s), mask(st.ds)));
    };
    auto dual_step = [&](const Step& st) {
      return std::min(max_psd_step(Z, st.dZ), max_positive_step(mask(y), mask(st.dy)));
    };

    const VectorXd sy = s.cwiseProduct(y);
    const Step aff = direction(MatrixXd::Zero(n, n), mask(-sy));
    const double ap_aff = std::min(1.0, primal_step(aff));
    const double ad_aff = std::min(1.0, dual_step(aff));
    const double mu_aff =
        (((X + ap_aff * aff.dX).cwiseProduct(Z + ad_aff * aff.dZ)).sum() +
         mask(s + ap_aff * aff.ds).dot(mask(y + ad_aff * aff.dy))) /
        static_cast<double>(n + num_ineq);
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

    const MatrixXd Rc = sigma * mu * I - aff.dX * aff.dZ;
    const VectorXd rc = mask(VectorXd::Constant(m, sigma * mu) - sy - aff.ds.cwiseProduct(aff.dy));
    const Step st = direction(Rc, rc);
    const double tau = 0.98;
    // A common step length keeps X Z much better centred than separate ones.
    const double alpha = std::min({1.0, tau * primal_step(st), tau * dual_step(st)});
    X += alpha * st.dX;
    s += alpha * st.ds;
    Z += alpha * st.dZ;
    y += alpha * st.dy;
  }

  if (result.status != SdpStatus::Optimal && best_merit < opt_.acceptable) {
    X = best_X;
    y = best_y;
    result.status = SdpStatus::Optimal;
    result.iterations = best_iter;
  }
  result.X = 0.5 * (X + X.transpose());
  result.y.assign(y.data(), y.data() + m);
  result.primal_objective = (C.cwiseProduct(result.X)).sum();
  result.dual_objective = m ? b.dot(y) : 0.0;
  return result;
}

std::unique_ptr<SdpBackend> make_sdp_backend(std::string_view name) {
  if (name == "ipm" || name == "simplex") return std::make_unique<InteriorPointSdp>();
  throw std::invalid_argument("unknown SDP backend '" + std::string(name) + "'");
}

std::unique_ptr<SdpBackend> default_sdp_backend() {
  const char* env = std::getenv("BMC_BACKEND");
  if (!env || !*env) return make_sdp_backend("ipm");
  return make_sdp_backend(env);
}

}  // namespace bmc
