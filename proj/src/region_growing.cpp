#include "bmc/region_growing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bmc/errors.hpp"

namespace bmc {

namespace {

constexpr double kSliver = 1e-12;

/// Start of the qualifying part [start, q) of the open segment (p, q), or q if none.
double qualifying_start(const BallState& bs, const RadiusPredicate& pred, double p, double q) {
  const double mid = 0.5 * (p + q);
  const double c = bs.cut(mid);
  if (pred.kind == RadiusKind::TotalCharged) return c <= pred.parameter ? p : q;
  const double vp = bs.volume(p);
  const double vq = bs.volume(q);
  if (pred.parameter * vq < c) return q;
  if (pred.parameter * vp >= c) return p;
  // V is linear on [p, q]; solve alpha * V(r) = c.
  const double frac = (c / pred.parameter - vp) / (vq - vp);
  return std::clamp(p + frac * (q - p), p, q);
}

std::vector<double> segment_points(const std::vector<const BallState*>& states, double r1,
                                   double r2) {
  std::vector<double> pts{r1, r2};
  for (const auto* bs : states) {
    for (double b : bs->breakpoints()) {
      if (b > r1 && b < r2) pts.push_back(b);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void check_window(double r1, double r2) {
  if (!(r1 >= 0.0) || !(r2 > r1)) throw std::invalid_argument("radius window needs 0 <= r1 < r2");
}

}  // namespace

BallState::BallState(const BmcInstance& inst, const FiniteMetric& metric,
                     std::vector<Vertex> centers, std::vector<bool> active, double initial_volume)
    : centers_(std::move(centers)), active_(std::move(active)), v0_(initial_volume) {
  const int n = inst.num_vertices();
  if (static_cast<int>(active_.size()) != n || metric.size() != n) {
    throw std::invalid_argument("BallState: metric/active size does not match the instance");
  }
  for (Vertex c : centers_) {
    if (c < 0 || c >= n || !active_[c]) throw std::invalid_argument("BallState: inactive center");
  }
  const double inf = std::numeric_limits<double>::infinity();
  dist_.assign(static_cast<std::size_t>(n), inf);
  for (Vertex v = 0; v < n; ++v) {
    if (!active_[v]) continue;
    for (Vertex c : centers_) dist_[v] = std::min(dist_[v], metric(v, c));
    if (dist_[v] < inf) breakpoints_.push_back(dist_[v]);
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
  for (const auto& e : inst.edges()) {
    if (e.u != e.v && active_[e.u] && active_[e.v]) edges_.push_back({e.u, e.v, e.w, metric(e.u, e.v)});
  }
}

std::vector<Vertex> BallState::ball(double r) const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < static_cast<Vertex>(dist_.size()); ++v) {
    if (dist_[v] <= r) out.push_back(v);
  }
  return out;
}

double BallState::volume(double r) const {
  double total = v0_;
  for (const auto& e : edges_) {
    double du = dist_[e.u], dv = dist_[e.v];
    if (du > dv) std::swap(du, dv);
    if (dv <= r) {
      total += e.w * e.d;
    } else if (du <= r) {
      if (!(dv > du)) throw InternalError("crossing edge with equal endpoint distances");
      total += e.w * e.d * (r - du) / (dv - du);
    }
  }
  return total;
}

double BallState::cut(double r) const {
  double total = 0.0;
  for (const auto& e : edges_) {
    if ((dist_[e.u] <= r) != (dist_[e.v] <= r)) total += e.w;
  }
  return total;
}

double BallState::total_volume() const {
  double total = v0_;
  for (const auto& e : edges_) total += e.w * e.d;
  return total;
}

std::vector<bool> all_active(int n) { return std::vector<bool>(static_cast<std::size_t>(n), true); }

std::vector<Vertex> ball(const std::vector<Vertex>& S, double r, const FiniteMetric& metric,
                         const std::vector<bool>& active) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < metric.size(); ++v) {
    if (!active[v]) continue;
    for (Vertex c : S) {
      if (metric(v, c) <= r) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

double volume(const BmcInstance& inst, const std::vector<Vertex>& S, double r,
              const FiniteMetric& metric, const std::vector<bool>& active, double initial_volume) {
  return BallState(inst, metric, S, active, initial_volume).volume(r);
}

double cut(const BmcInstance& inst, const std::vector<Vertex>& S, double r,
           const FiniteMetric& metric, const std::vector<bool>& active) {
  return BallState(inst, metric, S, active).cut(r);
}

std::string to_string(RadiusKind kind) {
  return kind == RadiusKind::TotalCharged ? "total-charged" : "volume-charged";
}

std::optional<double> find_common_radius(const BallState& a, const BallState& b, double r1,
                                         double r2, const RadiusPredicate& pa,
                                         const RadiusPredicate& pb, const SearchOptions& opt) {
  check_window(r1, r2);
  if (opt.allow_left_endpoint && pa.holds(a.cut(r1), a.volume(r1)) &&
      pb.holds(b.cut(r1), b.volume(r1))) {
    return r1;
  }
  const auto pts = segment_points({&a, &b}, r1, r2);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double p = pts[i], q = pts[i + 1];
    if (q - p <= kSliver) continue;
    const double start = std::max(qualifying_start(a, pa, p, q), qualifying_start(b, pb, p, q));
    if (q - start > kSliver) return 0.5 * (start + q);
  }
  return std::nullopt;
}

std::optional<double> find_radius_total_charged(const BallState& bs, double r1, double r2,
                                                double budget, const SearchOptions& opt) {
  const auto pred = RadiusPredicate::total(budget);
  return find_common_radius(bs, bs, r1, r2, pred, pred, opt);
}

std::optional<double> find_radius_volume_charged(const BallState& bs, double r1, double r2,
                                                 double alpha, const SearchOptions& opt) {
  const auto pred = RadiusPredicate::volume(alpha);
  return find_common_radius(bs, bs, r1, r2, pred, pred, opt);
}

double qualifying_measure(const BallState& bs, double r1, double r2, const RadiusPredicate& pred) {
  check_window(r1, r2);
  const auto pts = segment_points({&bs}, r1, r2);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double p = pts[i], q = pts[i + 1];
    if (q > p) total += q - qualifying_start(bs, pred, p, q);
  }
  return total;
}

RadiusCertificate certify(const BallState& bs, double r, const RadiusPredicate& pred, double lo,
                          double hi) {
  RadiusCertificate c;
  c.radius = r;
  c.kind = pred.kind;
  c.parameter = pred.parameter;
  c.cut_at_r = bs.cut(r);
  c.volume_at_r = bs.volume(r);
  c.bound = pred.bound(c.volume_at_r);
  c.lo = lo;
  c.hi = hi;
  return c;
}

bool validate_certificate(const BallState& bs, const RadiusCertificate& cert, double tol) {
  auto close = [tol](double x, double y) { return std::abs(x - y) <= tol * (1.0 + std::abs(y)); };
  const double c = bs.cut(cert.radius);
  const double v = bs.volume(cert.radius);
  const RadiusPredicate pred{cert.kind, cert.parameter};
  const double bound = pred.bound(v);
  if (!close(cert.cut_at_r, c) || !close(cert.volume_at_r, v) || !close(cert.bound, bound)) {
    return false;
  }
  if (c > bound + tol * (1.0 + std::abs(bound))) return false;
  return cert.radius >= cert.lo - tol && cert.radius <= cert.hi + tol;
}

}  // namespace bmc
