#include "bmc/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bmc {

double FiniteMetric::max_triangle_violation() const {
  double worst = 0.0;
  for (int u = 0; u < n_; ++u) {
    for (int v = 0; v < n_; ++v) {
      const double duv = (*this)(u, v);
      for (int w = 0; w < n_; ++w) {
        worst = std::max(worst, (*this)(u, w) - duv - (*this)(v, w));
      }
    }
  }
  return worst;
}

double FiniteMetric::max_asymmetry() const {
  double worst = 0.0;
  for (int u = 0; u < n_; ++u) {
    worst = std::max(worst, std::abs((*this)(u, u)));
    for (int v = u + 1; v < n_; ++v) worst = std::max(worst, std::abs((*this)(u, v) - (*this)(v, u)));
  }
  return worst;
}

double FiniteMetric::min_entry() const {
  if (d_.empty()) return 0.0;
  return *std::min_element(d_.begin(), d_.end());
}

double FiniteMetric::max_symmetry_violation(const BmcInstance& inst) const {
  double worst = 0.0;
  for (const auto& a : inst.pairs()) {
    for (const auto& b : inst.pairs()) {
      worst = std::max(worst, std::abs((*this)(a.s, b.t) - (*this)(a.t, b.s)));
      worst = std::max(worst, std::abs((*this)(a.s, b.s) - (*this)(a.t, b.t)));
    }
  }
  return worst;
}

double FiniteMetric::volume(const BmcInstance& inst) const {
  double total = 0.0;
  for (const auto& e : inst.edges()) total += e.w * (*this)(e.u, e.v);
  return total;
}

FiniteMetric FiniteMetric::cut_metric(const std::vector<Side>& side) {
  const int n = static_cast<int>(side.size());
  FiniteMetric m(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) m.set(u, v, side[u] != side[v] ? 1.0 : 0.0);
  }
  return m;
}

}  // namespace bmc
