#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bmc/instance.hpp"
#include "bmc/metric.hpp"

namespace bmc {

/// A region grown around a center set S inside the surviving subgraph.
/// Balls are closed: B(S, r) = {v active : dist(v, S) <= r}.
class BallState {
 public:
  BallState(const BmcInstance& inst, const FiniteMetric& metric, std::vector<Vertex> centers,
            std::vector<bool> active, double initial_volume = 0.0);

  const std::vector<Vertex>& centers() const { return centers_; }
  const std::vector<bool>& active() const { return active_; }
  double initial_volume() const { return v0_; }
  /// dist(v, S); +inf for inactive vertices.
  double dist(Vertex v) const { return dist_[v]; }
  /// Sorted distinct finite distances; V is linear and C constant between them.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  std::vector<Vertex> ball(double r) const;
  /// V(r): edges inside the ball in full, crossing edges prorated, plus V(0).
  double volume(double r) const;
  /// C(r): weight of active edges with exactly one endpoint in the ball.
  double cut(double r) const;
  /// V(infinity) = V(0) + sum of w_e d_e over active edges.
  double total_volume() const;

 private:
  struct ActiveEdge {
    Vertex u, v;
    double w, d;
  };
  std::vector<Vertex> centers_;
  std::vector<bool> active_;
  std::vector<double> dist_;
  std::vector<double> breakpoints_;
  std::vector<ActiveEdge> edges_;
  double v0_;
};

/// Every vertex active.
std::vector<bool> all_active(int n);

std::vector<Vertex> ball(const std::vector<Vertex>& S, double r, const FiniteMetric& metric,
                         const std::vector<bool>& active);
double volume(const BmcInstance& inst, const std::vector<Vertex>& S, double r,
              const FiniteMetric& metric, const std::vector<bool>& active,
              double initial_volume = 0.0);
double cut(const BmcInstance& inst, const std::vector<Vertex>& S, double r,
           const FiniteMetric& metric, const std::vector<bool>& active);

enum class RadiusKind {
  TotalCharged,   // C(r) <= parameter
  VolumeCharged,  // C(r) <= parameter * V(r)
};

std::string to_string(RadiusKind kind);

struct RadiusPredicate {
  RadiusKind kind = RadiusKind::TotalCharged;
  double parameter = 0.0;

  static RadiusPredicate total(double budget) { return {RadiusKind::TotalCharged, budget}; }
  static RadiusPredicate volume(double alpha) { return {RadiusKind::VolumeCharged, alpha}; }

  double bound(double volume_at_r) const {
    return kind == RadiusKind::TotalCharged ? parameter : parameter * volume_at_r;
  }
  bool holds(double cut_at_r, double volume_at_r) const { return cut_at_r <= bound(volume_at_r); }
};

struct SearchOptions {
  /// Whether r1 itself may be returned; otherwise the radius lies in (r1, r2).
  bool allow_left_endpoint = true;
};

/// Deterministic scans. Each elementary segment between consecutive
/// breakpoints has a constant cut and linear volume, so the qualifying part
/// of a segment is a right-open interval [q, b); the midpoint of the first
/// one is returned. The left endpoint r1 is tried first when allowed.
std::optional<double> find_radius_total_charged(const BallState& bs, double r1, double r2,
                                                double budget, const SearchOptions& opt = {});
std::optional<double> find_radius_volume_charged(const BallState& bs, double r1, double r2,
                                                 double alpha, const SearchOptions& opt = {});
std::optional<double> find_common_radius(const BallState& a, const BallState& b, double r1,
                                         double r2, const RadiusPredicate& pa,
                                         const RadiusPredicate& pb, const SearchOptions& opt = {});

/// Exact Lebesgue measure of {r in [r1, r2] : pred holds at r}.
double qualifying_measure(const BallState& bs, double r1, double r2, const RadiusPredicate& pred);

struct RadiusCertificate {
  double radius = 0.0;
  RadiusKind kind = RadiusKind::TotalCharged;
  double parameter = 0.0;
  double cut_at_r = 0.0;
  double volume_at_r = 0.0;
  double bound = 0.0;
  /// Search window the radius was drawn from.
  double lo = 0.0;
  double hi = 0.0;
};

RadiusCertificate certify(const BallState& bs, double r, const RadiusPredicate& pred, double lo,
                          double hi);

/// Recomputes cut and volume at the certified radius and checks them, the
/// bound and the window, all to tol * (1 + |value|).
bool validate_certificate(const BallState& bs, const RadiusCertificate& cert, double tol = 1e-9);

}  // namespace bmc
