#pragma once

#include <vector>

#include "bmc/instance.hpp"

namespace bmc {

enum class MetricOrigin { Other, Lp, Sdp };

/// Dense symmetric distance matrix with zero diagonal.
class FiniteMetric {
 public:
  FiniteMetric() = default;
  explicit FiniteMetric(int n, MetricOrigin origin = MetricOrigin::Other)
      : n_(n), d_(static_cast<std::size_t>(n) * n, 0.0), origin_(origin) {}

  int size() const { return n_; }
  MetricOrigin origin() const { return origin_; }

  double operator()(Vertex u, Vertex v) const { return d_[index(u, v)]; }
  /// Sets both d(u,v) and d(v,u).
  void set(Vertex u, Vertex v, double value) {
    d_[index(u, v)] = value;
    d_[index(v, u)] = value;
  }

  /// max over triples of d(u,w) - d(u,v) - d(v,w), or 0 if none is positive.
  double max_triangle_violation() const;
  /// max |d(u,v) - d(v,u)| plus any diagonal entry.
  double max_asymmetry() const;
  double min_entry() const;

  /// Largest deviation from d(s_i,t_j) = d(t_i,s_j) and d(s_i,s_j) = d(t_i,t_j).
  double max_symmetry_violation(const BmcInstance& inst) const;

  /// sum over edges of w_e * d_e.
  double volume(const BmcInstance& inst) const;

  /// d(u,v) = 1 across the bipartition, 0 within a side.
  static FiniteMetric cut_metric(const std::vector<Side>& side);

 private:
  std::size_t index(Vertex u, Vertex v) const {
    return static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v);
  }
  int n_ = 0;
  std::vector<double> d_;
  MetricOrigin origin_ = MetricOrigin::Other;
};

}  // namespace bmc
