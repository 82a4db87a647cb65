// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "bmc/exact.hpp"
#include "bmc/lp_relaxation.hpp"
#include "bmc/reductions.hpp"
#include "bmc/region_growing.hpp"
#include "bmc/report.hpp"
#include "bmc/rounding.hpp"
#include "bmc/sdp_relaxation.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace bmc;
using namespace bmc::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  int failures = 0;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    ++failures;
    if (ok) detail = what;
    ok = false;
  }
};

Bipartition exact_via_fusion(const BmcInstance& inst) {
  const auto fused = fuse_demands(inst);
  return fused.lift(inst, solve_exact(fused.instance));
}

/// The shared instance family of criteria 1 and 2.
std::vector<BmcInstance> small_family() {
  Rng rng(1001);
  std::vector<BmcInstance> out;
  for (int i = 0; i < 200; ++i) {
    const int k = 1 + static_cast<int>(rng() % 3);
    const int n = 2 * k + static_cast<int>(rng() % (13 - 2 * k));
    out.push_back(random_instance(rng, n, k, 10, 0.2 + 0.1 * (i % 5)));
  }
  return out;
}

Outcome exact_vs_brute() {
  Outcome o;
  int checked = 0;
  for (const auto& inst : small_family()) {
    const double ex = solve_exact(inst).cut_value;
    const double bf = brute_force(inst).cut_value;
    o.require(ex == bf, "solve_exact " + std::to_string(ex) + " != brute force " + std::to_string(bf));
    ++checked;
  }
  o.detail = o.ok ? std::to_string(checked) + " instances equal" : o.detail;
  return o;
}

Outcome relaxation_bounds() {
  Outcome o;
  double worst_lp = -1e100, worst_sdp = -1e100;
  for (const auto& inst : small_family()) {
    const double opt = *enumerate_optimum(inst);
    const auto lp = build_and_solve_lp(inst);
    worst_lp = std::max(worst_lp, lp.value - opt);
    o.require(lp.value <= opt + 1e-6, "LP value above OPT");
    const auto& d = lp.metric;
    o.require(triangle_excess(d) <= 1e-6, "LP triangle inequality");
    o.require(d.max_symmetry_violation(inst) <= 1e-6, "LP symmetry");
    o.require(d.min_entry() >= -1e-9, "LP negative distance");
    for (const auto& p : inst.pairs()) o.require(d(p.s, p.t) >= 1.0 - 1e-6, "LP pair distance");

    const auto g = build_and_solve_sdp(inst);
    worst_sdp = std::max(worst_sdp, g.value - opt);
    o.require(g.value <= opt + 1e-5, "SDP value above OPT");
    const auto emb = extract_vectors(g);
    const int n = inst.num_vertices();
    for (int v = 0; v < n; ++v) o.require(std::abs(g.Y(v, v) - 1) <= 1e-6, "SDP unit diagonal");
    for (const auto& p : inst.pairs()) {
      o.require(std::abs(g.Y(p.s, p.t) + 1) <= 1e-6, "SDP antipodal pair");
    }
    o.require(triangle_excess(emb.metric) <= 1e-5, "SDP triangle inequality");
    o.require(emb.metric.max_symmetry_violation(inst) <= 1e-5, "SDP symmetry");
    o.require(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g.Y).eigenvalues().minCoeff() >= -1e-6,
              "SDP not PSD");
  }
  std::ostringstream os;
  os << "max LP-OPT " << worst_lp << ", max SDP-OPT " << worst_sdp;
  if (o.ok) o.detail = os.str();
  return o;
}

Outcome lp_rounding() {
  Outcome o;
  Rng rng(1003);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int k = 1 + static_cast<int>(rng() % 6);
    const int n = std::max(2 * k, 10 + static_cast<int>(rng() % 21));
    const auto inst = random_instance(rng, n, k, 10, 0.15 + 0.05 * (i % 4));
    const auto lp = build_and_solve_lp(inst);
    const auto res = round_lp(inst, lp);
    o.require(is_feasible(inst, res.partition.side), "infeasible partition");
    const double bound = 32 * std::log(4.0 * k) * lp.value;
    o.require(res.partition.cut_value <= bound * (1 + 1e-9) + 1e-9, "cut above 32 ln(4k) V*");
    const double opt = exact_via_fusion(inst).cut_value;
    o.require(res.partition.cut_value >= opt - 1e-9, "cut below OPT");
    o.require(verify_trace(inst, lp.metric, res.trace, res.partition).ok(), "trace replay");
    if (lp.value > 0) worst = std::max(worst, res.partition.cut_value / lp.value);
  }
  if (o.ok) o.detail = "max cut/V* " + std::to_string(worst);
  return o;
}

struct SolvedSdp {
  BmcInstance inst;
  VectorEmbedding emb;
};

std::vector<SolvedSdp>& sdp_family() {
  static std::vector<SolvedSdp> family = [] {
    Rng rng(1004);
    std::vector<SolvedSdp> out;
    for (int i = 0; i < 50; ++i) {
      const int k = 1 + static_cast<int>(rng() % 5);
      const int n = std::max(2 * k, 8 + static_cast<int>(rng() % 13));
      auto inst = random_instance(rng, n, k, 10, 0.2 + 0.05 * (i % 4));
      auto emb = extract_vectors(build_and_solve_sdp(inst));
      out.push_back({std::move(inst), std::move(emb)});
    }
    return out;
  }();
  return family;
}

Outcome sdp_certificates() {
  Outcome o;
  int steps = 0;
  std::map<std::string, int> regimes;
  std::uint64_t seed = 1;
  for (const auto& s : sdp_family()) {
    SdpRoundingConfig cfg;
    cfg.seed = seed++;
    const auto res = round_sdp(s.inst, s.emb, cfg);
    const auto rep = verify_trace(s.inst, s.emb.metric, res.trace, res.partition);
    o.require(rep.certificates, "certificate failed recomputation");
    o.require(rep.symmetric && rep.antipodal && rep.balls_match, "per-step symmetry/antipodality");
    o.require(rep.ok(), rep.failures.empty() ? "trace" : rep.failures.front());
    o.require(static_cast<int>(res.trace.steps.size()) <=
                  sdp_iteration_bound(s.inst.num_pairs(), cfg.separation.beta),
              "iteration count above bound");
    o.require(is_feasible(s.inst, res.partition.side), "infeasible partition");
    steps += static_cast<int>(res.trace.steps.size());
    for (const auto& st : res.trace.steps) ++regimes[st.regime];
  }
  if (o.ok) {
    o.detail = std::to_string(steps) + " iterations certified;";
    for (const auto& [name, count] : regimes) o.detail += " " + name + "=" + std::to_string(count);
  }
  return o;
}

Outcome spreading() {
  Outcome o;
  Rng rng(1005);
  double worst = 0.0;
  for (const auto& s : sdp_family()) {
    const int k = s.inst.num_pairs();
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    for (int rep = 0; rep < 20; ++rep) {
      std::shuffle(idx.begin(), idx.end(), rng);
      const int l = 1 + static_cast<int>(rng() % k);
      std::vector<Vertex> subset;
      for (int i = 0; i < l; ++i) {
        subset.push_back(s.inst.pairs()[idx[i]].s);
        subset.push_back(s.inst.pairs()[idx[i]].t);
      }
      std::shuffle(subset.begin(), subset.end(), rng);
      const double err = std::abs(check_spreading(s.emb, s.inst, subset) - 4.0 * l * l);
      worst = std::max(worst, err / (l * l));
      o.require(err <= 1e-4 * l * l, "spreading identity off by " + std::to_string(err));
    }
  }
  if (o.ok) o.detail = "max error/l^2 " + std::to_string(worst);
  return o;
}

Outcome reductions() {
  Outcome o;
  Rng rng(1006);
  for (int i = 0; i < 100; ++i) {
    const auto mu = random_minuncut(rng, 1 + static_cast<int>(rng() % 8),
                                    static_cast<int>(rng() % 13));
    const auto inst = minuncut_to_bmc(mu);
    o.require(exact_via_fusion(inst).cut_value == 2 * minuncut_optimum(mu), "Min UnCut factor 2");
  }
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const int k = 1 + static_cast<int>(rng() % (n / 2));
    const auto inst = random_instance(rng, n, k, 10, 0.3 + 0.1 * (i % 3));
    const double opt = *enumerate_optimum(inst);
    const auto red = bmc_to_path(inst);
    const auto path_best = exact_via_fusion(red.path);
    o.require(path_best.cut_value == opt, "path layout changed the optimum");
    const auto back = red.back_map(inst, path_best);
    o.require(is_feasible(inst, back.side), "back-mapped partition infeasible");
    o.require(back.cut_value == path_best.cut_value, "back-mapped value differs");
  }
  for (int i = 0; i < 200; ++i) {
    const auto p = random_path(rng, 1 + static_cast<int>(rng() % 14), 8);
    const auto mc = path_multicut_dp(p);
    o.require(mc.value == path_subset_optimum(p), "path DP differs from subset enumeration");
    o.require(separates_all(p, mc.edges), "path DP edges do not separate");
  }
  if (o.ok) o.detail = "100 Min UnCut, 50 path layouts, 200 path DPs";
  return o;
}

double grid_fraction(const BallState& bs, double r1, double r2, const RadiusPredicate& pred) {
  constexpr int kPoints = 10000;
  int good = 0;
  for (int i = 0; i < kPoints; ++i) {
    const double r = r1 + (r2 - r1) * (i + 0.5) / kPoints;
    if (pred.holds(bs.cut(r), bs.volume(r))) ++good;
  }
  return static_cast<double>(good) / kPoints;
}

Outcome region_growing() {
  Outcome o;
  Rng rng(1007);
  double min_fraction = 1.0;
  for (int it = 0; it < 200; ++it) {
    const int n = 3 + static_cast<int>(rng() % 14);
    const auto m = random_graph_metric(rng, n, 0.5 + 0.5 * (it % 3));
    const auto inst = random_real_instance(rng, n, 0, 5.0, 0.5);
    auto act = all_active(n);
    for (int v = 1; v < n; ++v) act[v] = rng() % 6 != 0;
    std::vector<Vertex> centres{0};
    if (act[n - 1] && rng() % 2) centres.push_back(n - 1);
    const double v0 = (it % 3 == 0) ? 0.0 : 0.1 * (1 + it % 7);
    BallState bs(inst, m, centres, act, v0);

    const double top = 2.0;
    double prev = -1.0;
    for (int i = 0; i <= 400; ++i) {
      const double v = bs.volume(top * i / 400);
      o.require(v >= prev - 1e-12, "V not monotone");
      prev = v;
    }
    std::vector<double> pts{0.0};
    for (double b : bs.breakpoints()) {
      if (b > 0.0 && b < top) pts.push_back(b);
    }
    pts.push_back(top);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      // Discretised on each segment: C at interior points times the step.
      const int sub = 16;
      double integral = 0.0;
      for (int j = 0; j < sub; ++j) {
        const double a = pts[i] + (pts[i + 1] - pts[i]) * j / sub;
        const double b = pts[i] + (pts[i + 1] - pts[i]) * (j + 1) / sub;
        const double c = bs.cut(0.5 * (a + b));
        o.require(bs.volume(b) - bs.volume(a) >= c * (b - a) - 1e-9, "dV < C on a segment");
        integral += c * (b - a);
      }
      o.require(integral <= bs.volume(pts[i + 1]) - bs.volume(pts[i]) + 1e-9, "integral of C > dV");
    }

    const double r1 = 0.05 * (rng() % 10);
    const double r2 = r1 + 0.1 + 0.05 * (rng() % 20);
    const double dv = bs.volume(r2) - bs.volume(r1);
    const auto total = RadiusPredicate::total(4.0 * dv / (r2 - r1));
    const auto rt = find_radius_total_charged(bs, r1, r2, total.parameter);
    o.require(rt.has_value(), "total-charged search failed");
    if (rt) o.require(validate_certificate(bs, certify(bs, *rt, total, r1, r2)), "total certificate");
    const double ft = grid_fraction(bs, r1, r2, total);
    min_fraction = std::min(min_fraction, ft);
    o.require(ft >= 0.74, "total-charged good measure below 0.74");
    if (bs.volume(r1) > 0.0) {
      const double alpha = 4.0 * std::log(bs.volume(r2) / bs.volume(r1)) / (r2 - r1);
      const auto vol = RadiusPredicate::volume(alpha);
      const auto rv = find_radius_volume_charged(bs, r1, r2, alpha);
      o.require(rv.has_value(), "volume-charged search failed");
      if (rv) o.require(validate_certificate(bs, certify(bs, *rv, vol, r1, r2)), "volume certificate");
      const double fv = grid_fraction(bs, r1, r2, vol);
      min_fraction = std::min(min_fraction, fv);
      o.require(fv >= 0.74, "volume-charged good measure below 0.74");
    }
  }
  if (o.ok) o.detail = "min good fraction " + std::to_string(min_fraction);
  return o;
}

Outcome determinism() {
  Outcome o;
  Rng rng(1008);
  for (int i = 0; i < 5; ++i) {
    const auto inst = random_overlapping_instance(rng, 14, 4, 10, 0.35);
    if (!demands_graph(inst).bipartite()) continue;
    SolveOptions opt;
    opt.method = SolveMethod::Sdp;
    opt.seed = 42 + i;
    opt.keep_trace = true;
    const auto a = run_solve(inst, opt);
    const auto b = run_solve(inst, opt);
    o.require(report_json(a) == report_json(b), "reports differ");
    std::ostringstream ta, tb;
    write_trace(ta, *a.trace);
    write_trace(tb, *b.trace);
    o.require(ta.str() == tb.str(), "traces differ");
  }
  if (o.ok) o.detail = "reports and traces byte-identical";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact vs brute force", 10, exact_vs_brute},
      {2, "relaxation lower bounds", 300, relaxation_bounds},
      {3, "lp rounding guarantee", 120, lp_rounding},
      {4, "sdp rounding certificates", 600, sdp_certificates},
      {5, "spreading identity", 60, spreading},
      {6, "reductions", 300, reductions},
      {7, "region-growing calculus", 120, region_growing},
      {8, "determinism", 600, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs > c.limit_seconds) {
      o.ok = false;
      o.detail = "took longer than " + std::to_string(c.limit_seconds) + " s";
    }
    std::printf("criterion %d %-28s %s  (%.2f s) %s\n", c.id, c.name, o.ok ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
