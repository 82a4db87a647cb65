#include "bmc/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "bmc/errors.hpp"

namespace bmc {

namespace {

std::vector<bool> pair_survives(const BmcInstance& inst, const std::vector<bool>& active) {
  std::vector<bool> out;
  for (const auto& p : inst.pairs()) out.push_back(active[p.s] && active[p.t]);
  return out;
}

/// Throws InternalError unless the two balls are disjoint, neither holds a
/// whole pair, and their terminal contents are exchanged by the partner map.
void check_balls(const std::vector<Vertex>& bx, const std::vector<Vertex>& bxbar,
                 const std::vector<Vertex>& partner, int n) {
  std::vector<int> where(static_cast<std::size_t>(n), 0);
  for (Vertex v : bx) where[v] = 1;
  for (Vertex v : bxbar) {
    if (where[v] == 1) throw InternalError("balls overlap at vertex " + std::to_string(v));
    where[v] = 2;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (where[v] == 0 || partner[v] < 0) continue;
    const int other = where[partner[v]];
    if (other == where[v]) {
      throw InternalError("ball contains both " + std::to_string(v) + " and its partner");
    }
    if (other == 0) {
      throw InternalError("terminal " + std::to_string(v) + " deleted without its partner");
    }
  }
}

void place_leftovers(const BmcInstance& inst, std::vector<Side>& side,
                     const std::vector<Vertex>& leftovers, bool greedy) {
  for (Vertex v : leftovers) side[v] = Side::X;
  if (!greedy) return;
  std::vector<std::vector<std::pair<Vertex, double>>> adj(
      static_cast<std::size_t>(inst.num_vertices()));
  for (const auto& e : inst.edges()) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  // Each move strictly lowers the current cut.
  for (Vertex v : leftovers) {
    double to_x = 0.0, to_xbar = 0.0;
    for (auto [u, w] : adj[v]) {
      if (u == v) continue;
      (side[u] == Side::X ? to_x : to_xbar) += w;
    }
    if (to_xbar > to_x) side[v] = Side::Xbar;
  }
}

std::vector<Vertex> active_vertices(const std::vector<bool>& active) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < static_cast<Vertex>(active.size()); ++v) {
    if (active[v]) out.push_back(v);
  }
  return out;
}

double log2_2k(int k) { return std::log2(2.0 * k); }

/// V_t = V* / log2(2k), with log2(2k) = 1 at k = 1.
double threshold_volume(double v_star, int k) { return k <= 1 ? v_star : v_star / log2_2k(k); }

std::string describe_window(double lo, double hi) {
  std::ostringstream os;
  os << '[' << lo << ", " << hi << ']';
  return os.str();
}

}  // namespace

std::string to_string(RoundingMethod method) { return method == RoundingMethod::Lp ? "lp" : "sdp"; }

int sdp_iteration_bound(int k, double beta) {
  if (k <= 0) return 0;
  return static_cast<int>(std::ceil(std::log(2.0 * k) / std::log(1.0 / (1.0 - beta)))) + 1;
}

SeparatedSets find_separated_sets(const VectorEmbedding& emb, const BmcInstance& inst,
                                  const std::vector<int>& surviving_pairs,
                                  const SeparationConfig& cfg, std::mt19937_64& rng) {
  const int ki = static_cast<int>(surviving_pairs.size());
  if (ki == 0) throw std::invalid_argument("find_separated_sets: no surviving pairs");
  if (!(cfg.beta > 0.0 && cfg.beta <= 0.5) || !(cfg.delta0 > 0.0) || cfg.retries < 1) {
    throw std::invalid_argument("find_separated_sets: bad configuration");
  }
  const FiniteMetric& d = emb.metric;
  const auto& pairs = inst.pairs();

  SeparatedSets out;
  if (ki == 1) {
    const auto& p = pairs[surviving_pairs[0]];
    out.S = {p.s};
    out.T = {p.t};
    out.delta = d(p.s, p.t);
    out.target_delta = 4.0;
    return out;
  }

  const int q = std::min(ki, static_cast<int>(std::ceil(cfg.beta * 2.0 * ki - 1e-12)));
  double target = cfg.delta0 / std::sqrt(log2_2k(ki));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int dim = emb.dimension();

  struct Rep {
    Vertex u, partner;
    double proj;
  };
  std::vector<Rep> reps(static_cast<std::size_t>(ki));
  std::vector<Rep> kept;

  while (target > 1e-12) {
    for (int attempt = 0; attempt < cfg.retries; ++attempt) {
      ++out.attempts;
      Eigen::VectorXd g(dim);
      for (int i = 0; i < dim; ++i) g(i) = gauss(rng);
      const double first = emb.vectors.col(pairs[surviving_pairs[0]].s).dot(g);
      if (first < 0.0) g = -g;
      for (int i = 0; i < ki; ++i) {
        const auto& p = pairs[surviving_pairs[i]];
        const double ps = emb.vectors.col(p.s).dot(g);
        reps[i] = ps >= 0.0 ? Rep{p.s, p.t, ps} : Rep{p.t, p.s, -ps};
      }
      std::stable_sort(reps.begin(), reps.end(),
                       [](const Rep& a, const Rep& b) { return a.proj > b.proj; });
      kept.clear();
      for (const Rep& r : reps) {
        if (d(r.u, r.partner) < target) continue;
        bool ok = true;
        for (const Rep& w : kept) {
          if (d(r.u, w.partner) < target || d(w.u, r.partner) < target) {
            ok = false;
            break;
          }
        }
        if (ok) kept.push_back(r);
      }
      if (static_cast<int>(kept.size()) >= q) {
        double sep = std::numeric_limits<double>::infinity();
        for (const Rep& a : kept) {
          out.S.push_back(a.u);
          out.T.push_back(a.partner);
          for (const Rep& b : kept) sep = std::min(sep, d(a.u, b.partner));
        }
        out.delta = sep;
        out.target_delta = target;
        return out;
      }
    }
    target *= 0.5;
  }
  throw InternalError("find_separated_sets: no separated sets at any target separation");
}

RoundingResult round_lp(const BmcInstance& inst, const LpSolution& lp,
                        const LpRoundingConfig& cfg) {
  const int n = inst.num_vertices();
  const int k = inst.num_pairs();
  const std::vector<Vertex> partner = inst.partners();
  const FiniteMetric& metric = lp.metric;
  if (metric.size() != n) throw std::invalid_argument("round_lp: metric size mismatch");

  RoundingResult res;
  RunTrace& trace = res.trace;
  trace.method = RoundingMethod::Lp;
  trace.num_pairs = k;
  trace.v_star = lp.value;
  trace.greedy_leftovers = cfg.greedy_leftovers;

  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::vector<Side> side(static_cast<std::size_t>(n), Side::X);
  const double v0 = k > 0 ? lp.value / (2.0 * k) : 0.0;
  const double alpha = k > 0 ? 16.0 * std::log(4.0 * k) : 0.0;
  const RadiusPredicate pred = RadiusPredicate::volume(alpha);
  const SearchOptions open_window{false};

  for (int i = 0; i < k; ++i) {
    const auto& p = inst.pairs()[i];
    if (active[p.s] != active[p.t]) throw InternalError("surviving graph lost its symmetry");
    if (!active[p.s]) continue;
    BallState bs(inst, metric, {p.s}, active, v0);
    BallState bt(inst, metric, {p.t}, active, v0);
    const auto r = find_common_radius(bs, bt, 0.0, 0.25, pred, pred, open_window);
    if (!r) throw InternalError("round_lp: no common radius for pair " + std::to_string(i));

    TraceStep step;
    step.iteration = static_cast<int>(trace.steps.size());
    step.pair = i;
    step.centers_x = {p.s};
    step.centers_xbar = {p.t};
    step.initial_volume = v0;
    step.radius = *r;
    step.cert_x = certify(bs, *r, pred, 0.0, 0.25);
    step.cert_xbar = certify(bt, *r, pred, 0.0, 0.25);
    step.to_x = bs.ball(*r);
    step.to_xbar = bt.ball(*r);
    check_balls(step.to_x, step.to_xbar, partner, n);
    for (Vertex v : step.to_x) {
      side[v] = Side::X;
      active[v] = false;
    }
    for (Vertex v : step.to_xbar) {
      side[v] = Side::Xbar;
      active[v] = false;
    }
    const auto alive = pair_survives(inst, active);
    step.remaining_pairs = static_cast<int>(std::count(alive.begin(), alive.end(), true));
    trace.steps.push_back(std::move(step));
  }

  trace.leftovers = active_vertices(active);
  for (Vertex v : trace.leftovers) {
    if (partner[v] >= 0) throw InternalError("terminal " + std::to_string(v) + " left unassigned");
  }
  place_leftovers(inst, side, trace.leftovers, cfg.greedy_leftovers);
  res.partition = make_bipartition(inst, std::move(side));
  trace.cut_value = res.partition.cut_value;

  if (k > 0) {
    const double bound = 32.0 * std::log(4.0 * k) * lp.value;
    if (trace.cut_value > bound + 1e-9 * (1.0 + bound)) {
      throw InternalError("round_lp: cut exceeds 32 ln(4k) V*");
    }
  }
  return res;
}

RoundingResult round_sdp(const BmcInstance& inst, const GramSolution& g,
                         const SdpRoundingConfig& cfg) {
  return round_sdp(inst, extract_vectors(g), cfg);
}

RoundingResult round_sdp(const BmcInstance& inst, const VectorEmbedding& emb,
                         const SdpRoundingConfig& cfg) {
  const int n = inst.num_vertices();
  const int k = inst.num_pairs();
  const std::vector<Vertex> partner = inst.partners();
  const FiniteMetric& metric = emb.metric;
  if (metric.size() != n) throw std::invalid_argument("round_sdp: embedding size mismatch");

  RoundingResult res;
  RunTrace& trace = res.trace;
  trace.method = RoundingMethod::Sdp;
  trace.num_pairs = k;
  trace.v_star = metric.volume(inst);
  trace.seed = cfg.seed;
  trace.beta = cfg.separation.beta;
  trace.c_total = cfg.c_total;
  trace.c_volume = cfg.c_volume;
  trace.greedy_leftovers = cfg.greedy_leftovers;

  const double v_star = trace.v_star;
  const double v_t = threshold_volume(v_star, k);
  const double ln_log = k > 0 ? std::log(log2_2k(k)) : 0.0;
  const double eps = 1e-12 * std::max(1.0, v_star);

  std::mt19937_64 rng(cfg.seed);
  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::vector<Side> side(static_cast<std::size_t>(n), Side::X);

  while (true) {
    const auto alive = pair_survives(inst, active);
    std::vector<int> surviving;
    for (int i = 0; i < k; ++i) {
      const auto& p = inst.pairs()[i];
      if (active[p.s] != active[p.t]) throw InternalError("surviving graph lost its symmetry");
      if (alive[i]) surviving.push_back(i);
    }
    if (surviving.empty()) break;

    const SeparatedSets sets = find_separated_sets(emb, inst, surviving, cfg.separation, rng);
    const double delta = sets.delta;
    BallState bs(inst, metric, sets.S, active, 0.0);
    BallState bt(inst, metric, sets.T, active, 0.0);
    const double a = delta / 16.0, b = delta / 8.0, c = delta / 4.0;
    const auto total = RadiusPredicate::total(cfg.c_total * v_t / delta);
    const auto vol = RadiusPredicate::volume(cfg.c_volume * ln_log / delta);

    const bool s_small = bs.volume(a) <= v_t + eps;
    const bool t_small = bt.volume(a) <= v_t + eps;
    double lo = 0.0, hi = 0.0;
    RadiusPredicate ps, pt;
    std::string regime;
    if (s_small && t_small) {
      regime = "small";
      lo = 0.0, hi = a;
      ps = pt = total;
    } else if (!s_small && !t_small) {
      regime = "large";
      lo = a, hi = b;
      ps = pt = vol;
    } else {
      const BallState& small_ball = s_small ? bs : bt;
      if (small_ball.volume(b) <= v_t + eps) {
        regime = "mixed-low";
        lo = a, hi = b;
        ps = s_small ? total : vol;
        pt = s_small ? vol : total;
      } else {
        regime = "mixed-high";
        lo = b, hi = c;
        ps = pt = vol;
      }
    }
    const auto r = find_common_radius(bs, bt, lo, hi, ps, pt);
    if (!r) {
      throw InternalError("round_sdp: no common good radius in " + describe_window(lo, hi) +
                          " (" + regime + ")");
    }

    TraceStep step;
    step.iteration = static_cast<int>(trace.steps.size());
    step.centers_x = sets.S;
    step.centers_xbar = sets.T;
    step.delta = delta;
    step.regime = regime;
    step.radius = *r;
    step.cert_x = certify(bs, *r, ps, lo, hi);
    step.cert_xbar = certify(bt, *r, pt, lo, hi);
    step.to_x = bs.ball(*r);
    step.to_xbar = bt.ball(*r);
    check_balls(step.to_x, step.to_xbar, partner, n);
    for (Vertex v : step.to_x) {
      side[v] = Side::X;
      active[v] = false;
    }
    for (Vertex v : step.to_xbar) {
      side[v] = Side::Xbar;
      active[v] = false;
    }
    const auto after = pair_survives(inst, active);
    step.remaining_pairs = static_cast<int>(std::count(after.begin(), after.end(), true));
    trace.steps.push_back(std::move(step));
  }

  trace.leftovers = active_vertices(active);
  for (Vertex v : trace.leftovers) {
    if (partner[v] >= 0) throw InternalError("terminal " + std::to_string(v) + " left unassigned");
  }
  place_leftovers(inst, side, trace.leftovers, cfg.greedy_leftovers);
  res.partition = make_bipartition(inst, std::move(side));
  trace.cut_value = res.partition.cut_value;
  return res;
}

TraceReport verify_trace(const BmcInstance& inst, const FiniteMetric& metric,
                         const RunTrace& trace, const Bipartition& partition) {
  TraceReport rep;
  auto fail = [&rep](bool& flag, const std::string& msg) {
    flag = false;
    rep.failures.push_back(msg);
  };

  const int n = inst.num_vertices();
  const int k = inst.num_pairs();
  if (metric.size() != n || static_cast<int>(partition.side.size()) != n || trace.num_pairs != k) {
    fail(rep.feasible, "trace, metric and partition do not match the instance");
    return rep;
  }
  const std::vector<Vertex> partner = inst.partners();
  const bool is_lp = trace.method == RoundingMethod::Lp;
  const double ln_log = k > 0 ? std::log(log2_2k(k)) : 0.0;
  const double v_t = threshold_volume(trace.v_star, k);
  auto close = [](double x, double y, double tol) {
    return std::abs(x - y) <= tol * (1.0 + std::abs(y));
  };

  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::vector<std::optional<Side>> replay(static_cast<std::size_t>(n));
  double budgets = 0.0;
  double delta_min = std::numeric_limits<double>::infinity();
  int surviving = k;

  for (const TraceStep& st : trace.steps) {
    const std::string at = "step " + std::to_string(st.iteration) + ": ";
    for (int i = 0; i < k; ++i) {
      const auto& p = inst.pairs()[i];
      if (active[p.s] != active[p.t]) {
        fail(rep.symmetric, at + "pair " + std::to_string(i) + " is half deleted");
      }
    }
    if (st.centers_x.size() != st.centers_xbar.size() || st.centers_x.empty()) {
      fail(rep.antipodal, at + "centre sets differ in size");
      continue;
    }
    bool centres_ok = true;
    for (std::size_t i = 0; i < st.centers_x.size(); ++i) {
      const Vertex u = st.centers_x[i], v = st.centers_xbar[i];
      if (u < 0 || u >= n || v < 0 || v >= n || partner[u] != v || !active[u] || !active[v]) {
        centres_ok = false;
      }
    }
    if (!centres_ok) {
      fail(rep.antipodal, at + "centres are not active antipodal terminals");
      continue;
    }

    BallState bx(inst, metric, st.centers_x, active, st.initial_volume);
    BallState bxbar(inst, metric, st.centers_xbar, active, st.initial_volume);
    auto sorted = [](std::vector<Vertex> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    const auto ball_x = bx.ball(st.radius);
    const auto ball_xbar = bxbar.ball(st.radius);
    if (ball_x != sorted(st.to_x) || ball_xbar != sorted(st.to_xbar)) {
      fail(rep.balls_match, at + "deleted vertices differ from the balls at the recorded radius");
    }
    try {
      check_balls(ball_x, ball_xbar, partner, n);
    } catch (const InternalError& e) {
      fail(rep.antipodal, at + e.what());
    }

    for (const auto* cert : {&st.cert_x, &st.cert_xbar}) {
      const BallState& bs = cert == &st.cert_x ? bx : bxbar;
      if (cert->radius != st.radius || !validate_certificate(bs, *cert)) {
        fail(rep.certificates, at + "certificate does not validate");
        continue;
      }
      bool shape = true;
      if (is_lp) {
        shape = cert->kind == RadiusKind::VolumeCharged &&
                close(cert->parameter, 16.0 * std::log(4.0 * k), 1e-12) &&
                st.radius > 0.0 && st.radius < 0.25 && cert->lo >= 0.0 && cert->hi <= 0.25;
      } else {
        const double want = cert->kind == RadiusKind::TotalCharged
                                ? trace.c_total * v_t / st.delta
                                : trace.c_volume * ln_log / st.delta;
        shape = close(cert->parameter, want, 1e-12) && cert->lo >= 0.0 &&
                cert->hi <= st.delta / 4.0 * (1.0 + 1e-12);
        if (cert->kind == RadiusKind::TotalCharged) budgets += cert->parameter;
      }
      if (!shape) fail(rep.certificates, at + "certificate is not a good-radius certificate");
    }

    if (!is_lp) {
      double sep = std::numeric_limits<double>::infinity();
      for (Vertex u : st.centers_x) {
        for (Vertex v : st.centers_xbar) sep = std::min(sep, metric(u, v));
      }
      if (sep < st.delta - 1e-9 * (1.0 + st.delta)) {
        fail(rep.antipodal, at + "centre sets are closer than the recorded separation");
      }
      delta_min = std::min(delta_min, st.delta);
    }

    for (Vertex v : st.to_x) {
      if (v >= 0 && v < n) replay[v] = Side::X, active[v] = false;
    }
    for (Vertex v : st.to_xbar) {
      if (v >= 0 && v < n) replay[v] = Side::Xbar, active[v] = false;
    }
    const auto alive = pair_survives(inst, active);
    const int left = static_cast<int>(std::count(alive.begin(), alive.end(), true));
    if (left != st.remaining_pairs || left >= surviving) {
      fail(rep.balls_match, at + "surviving pair count does not drop as recorded");
    }
    surviving = left;
  }

  const auto remaining = active_vertices(active);
  for (Vertex v : remaining) {
    if (partner[v] >= 0) fail(rep.feasible, "terminal " + std::to_string(v) + " never deleted");
  }
  std::vector<Vertex> leftovers = trace.leftovers;
  std::sort(leftovers.begin(), leftovers.end());
  if (leftovers != remaining) fail(rep.balls_match, "recorded leftovers differ from the replay");
  for (Vertex v = 0; v < n; ++v) {
    if (replay[v]) {
      if (partition.side[v] != *replay[v]) {
        fail(rep.balls_match, "vertex " + std::to_string(v) + " is on the wrong side");
      }
    } else if (!trace.greedy_leftovers && partition.side[v] != Side::X) {
      fail(rep.balls_match, "leftover vertex " + std::to_string(v) + " is not on X");
    }
  }
  if (!is_feasible(inst, partition.side)) fail(rep.feasible, "partition leaves a pair on one side");

  rep.cut = cut_value(inst, partition.side);
  if (!close(rep.cut, trace.cut_value, 1e-9) || !close(rep.cut, partition.cut_value, 1e-9)) {
    fail(rep.cut_replays, "recorded cut value does not match the partition");
  }
  if (!close(trace.v_star, metric.volume(inst), 1e-6)) {
    fail(rep.bound, "recorded V* differs from the metric volume");
  }
  if (k > 0) {
    if (is_lp) {
      rep.bound_value = 32.0 * std::log(4.0 * k) * trace.v_star;
    } else {
      const double dm = std::isfinite(delta_min) ? delta_min : 4.0;
      rep.bound_value = budgets + trace.c_volume * ln_log / dm * trace.v_star;
    }
    if (rep.cut > rep.bound_value + 1e-9 * (1.0 + rep.bound_value)) {
      fail(rep.bound, "cut exceeds the trace bound");
    }
  }
  return rep;
}

}  // namespace bmc
