#include <cmath>
#include <set>
#include <sstream>

#include "bmc/errors.hpp"
#include "bmc/lp_relaxation.hpp"
#include "bmc/rounding.hpp"
#include "bmc/sdp_relaxation.hpp"
#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"

using namespace bmc;
using namespace bmc::testing;

namespace {

std::vector<int> all_pairs(const BmcInstance& inst) {
  std::vector<int> out;
  for (int i = 0; i < inst.num_pairs(); ++i) out.push_back(i);
  return out;
}

std::vector<int> as_bits(const std::vector<Side>& side) {
  std::vector<int> out;
  for (Side s : side) out.push_back(s == Side::X ? 0 : 1);
  return out;
}

void check_result(const BmcInstance& inst, const FiniteMetric& metric, const RoundingResult& res) {
  CHECK(is_feasible(inst, res.partition.side));
  CHECK(crossing_weight(inst, as_bits(res.partition.side)) ==
        doctest::Approx(res.partition.cut_value).epsilon(1e-12));
  CHECK(res.partition.cut_value >= *enumerate_optimum(inst) - 1e-9);
  const auto report = verify_trace(inst, metric, res.trace, res.partition);
  for (const auto& f : report.failures) MESSAGE(f);
  CHECK(report.ok());
  CHECK(report.cut <= report.bound_value + 1e-9);
}

}  // namespace

TEST_SUITE("rounding") {
  TEST_CASE("lp rounding of a single edge") {
    BmcInstance inst(2, {{0, 1, 5}}, {{0, 1}});
    const auto lp = build_and_solve_lp(inst);
    const auto res = round_lp(inst, lp);
    CHECK(res.partition.cut_value == 5);
    CHECK(res.partition.side[0] != res.partition.side[1]);
    REQUIRE(res.trace.steps.size() == 1);
    CHECK(res.trace.steps[0].radius > 0.0);
    CHECK(res.trace.steps[0].radius < 0.25);
    check_result(inst, lp.metric, res);
  }

  TEST_CASE("sdp rounding of a single edge") {
    BmcInstance inst(2, {{0, 1, 5}}, {{0, 1}});
    const auto emb = extract_vectors(build_and_solve_sdp(inst));
    const auto res = round_sdp(inst, emb);
    CHECK(res.partition.cut_value == 5);
    check_result(inst, emb.metric, res);
  }

  TEST_CASE("lp rounding on random instances") {
    Rng rng(401);
    for (int it = 0; it < 60; ++it) {
      const int k = 1 + static_cast<int>(rng() % 3);
      const int n = 2 * k + static_cast<int>(rng() % (11 - 2 * k));
      const auto inst = random_instance(rng, n, k);
      const auto lp = build_and_solve_lp(inst);
      const auto res = round_lp(inst, lp);
      check_result(inst, lp.metric, res);
      CHECK(res.partition.cut_value <= 32 * std::log(4.0 * k) * lp.value + 1e-6);
    }
  }

  TEST_CASE("sdp rounding on random instances") {
    Rng rng(402);
    for (int it = 0; it < 40; ++it) {
      const int k = 1 + static_cast<int>(rng() % 3);
      const int n = 2 * k + static_cast<int>(rng() % (11 - 2 * k));
      const auto inst = random_instance(rng, n, k);
      const auto emb = extract_vectors(build_and_solve_sdp(inst));
      SdpRoundingConfig cfg;
      cfg.seed = it + 1;
      const auto res = round_sdp(inst, emb, cfg);
      check_result(inst, emb.metric, res);
      CHECK(static_cast<int>(res.trace.steps.size()) <= sdp_iteration_bound(k, 0.125));
    }
  }

  TEST_CASE("hypercube embeddings: certified runs") {
    Rng rng(403);
    for (int it = 0; it < 200; ++it) {
      const int k = 2 + static_cast<int>(rng() % 5);
      const int n = 2 * k + static_cast<int>(rng() % 8);
      const auto inst = random_real_instance(rng, n, k, 10.0, 0.3 + 0.1 * (it % 5));
      const auto emb = hypercube_embedding(rng, inst, 2 + static_cast<int>(rng() % 6));
      SdpRoundingConfig cfg;
      cfg.seed = 1000 + it;
      cfg.greedy_leftovers = it % 2;
      const auto res = round_sdp(inst, emb, cfg);
      CHECK(is_feasible(inst, res.partition.side));
      const auto report = verify_trace(inst, emb.metric, res.trace, res.partition);
      for (const auto& f : report.failures) MESSAGE(f);
      CHECK(report.ok());
    }
  }

  TEST_CASE("clustered embeddings reach every regime") {
    Rng rng(409);
    std::set<std::string> regimes;
    for (int it = 0; it < 150; ++it) {
      const int k = 2 + static_cast<int>(rng() % 7);
      const double prob = 0.1 + 0.2 * (it % 5);
      const auto ei = clustered_embedding(rng, k, 2 + static_cast<int>(rng() % 3), prob);
      SdpRoundingConfig cfg;
      cfg.seed = 2000 + it;
      const auto res = round_sdp(ei.instance, ei.embedding, cfg);
      CHECK(is_feasible(ei.instance, res.partition.side));
      const auto report = verify_trace(ei.instance, ei.embedding.metric, res.trace, res.partition);
      for (const auto& f : report.failures) MESSAGE(f);
      CHECK(report.ok());
      CHECK(static_cast<int>(res.trace.steps.size()) <= sdp_iteration_bound(k, 0.125));
      for (const auto& s : res.trace.steps) regimes.insert(s.regime);
    }
    for (const char* r : {"small", "large", "mixed-low", "mixed-high"}) {
      CAPTURE(r);
      CHECK(regimes.count(r) == 1);
    }
  }

  TEST_CASE("tampered traces are rejected") {
    Rng rng(404);
    const auto inst = random_instance(rng, 8, 3, 10, 0.5);
    const auto lp = build_and_solve_lp(inst);
    const auto res = round_lp(inst, lp);
    REQUIRE(verify_trace(inst, lp.metric, res.trace, res.partition).ok());

    auto radius = res.trace;
    radius.steps[0].radius += 0.1;
    CHECK_FALSE(verify_trace(inst, lp.metric, radius, res.partition).ok());

    auto count = res.trace;
    count.steps[0].remaining_pairs += 1;
    CHECK_FALSE(verify_trace(inst, lp.metric, count, res.partition).ok());

    auto cut = res.trace;
    cut.cut_value += 0.1;
    CHECK_FALSE(verify_trace(inst, lp.metric, cut, res.partition).ok());

    auto flipped = res.partition;
    for (auto& s : flipped.side) s = Side::X;
    CHECK_FALSE(verify_trace(inst, lp.metric, res.trace, flipped).ok());
  }

  TEST_CASE("lp rounding needs matching demands") {
    BmcInstance shared(3, {{0, 1, 1}}, {{0, 1}, {0, 2}});
    CHECK_THROWS(round_lp(shared, build_and_solve_lp(shared)));
  }

  TEST_CASE("iteration bound") {
    CHECK(sdp_iteration_bound(1, 0.125) == static_cast<int>(std::ceil(std::log(2.0) / std::log(8.0 / 7.0))) + 1);
    for (int k = 1; k < 200; ++k) {
      // Keeping a beta fraction each round leaves (1 - beta)^j 2k terminals.
      const int j = sdp_iteration_bound(k, 0.125) - 1;
      CHECK(2.0 * k * std::pow(7.0 / 8.0, j) <= 1.0 + 1e-12);
      CHECK(sdp_iteration_bound(k + 1, 0.125) >= sdp_iteration_bound(k, 0.125));
    }
  }
}

TEST_SUITE("separated-sets") {
  TEST_CASE("one pair gives its terminals") {
    BmcInstance inst(2, {{0, 1, 1}}, {{0, 1}});
    const auto emb = extract_vectors(build_and_solve_sdp(inst));
    std::mt19937_64 rng(1);
    const auto sep = find_separated_sets(emb, inst, {0}, {}, rng);
    CHECK(sep.S.size() == 1);
    CHECK(sep.T.size() == 1);
    CHECK(sep.delta == doctest::Approx(4).epsilon(1e-6));
  }

  TEST_CASE("sources at one pole") {
    // Every source at +e, every sink at -e: any selection has separation 4.
    const int k = 6;
    std::vector<DemandPair> pairs;
    for (int i = 0; i < k; ++i) pairs.push_back({2 * i, 2 * i + 1});
    BmcInstance inst(2 * k, {}, pairs);
    VectorEmbedding emb{Eigen::MatrixXd::Zero(3, 2 * k), FiniteMetric(2 * k, MetricOrigin::Sdp)};
    for (int i = 0; i < k; ++i) {
      emb.vectors(0, 2 * i) = 1;
      emb.vectors(0, 2 * i + 1) = -1;
    }
    for (int u = 0; u < 2 * k; ++u) {
      for (int v = u + 1; v < 2 * k; ++v) {
        emb.metric.set(u, v, (emb.vectors.col(u) - emb.vectors.col(v)).squaredNorm());
      }
    }
    std::mt19937_64 rng(2);
    const auto sep = find_separated_sets(emb, inst, all_pairs(inst), {}, rng);
    CHECK(sep.delta == doctest::Approx(4));
    CHECK(sep.S.size() == static_cast<std::size_t>(k));
  }

  TEST_CASE("random embeddings: size, antipodality and separation") {
    Rng gen(405);
    for (int it = 0; it < 100; ++it) {
      const int k = 4 + static_cast<int>(gen() % 12);
      const auto inst = random_instance(gen, 2 * k + 2, k, 5, 0.2);
      const auto emb = hypercube_embedding(gen, inst, 3 + static_cast<int>(gen() % 10));
      const auto partner = inst.partners();
      std::mt19937_64 rng(it);
      SeparationConfig cfg;
      const auto sep = find_separated_sets(emb, inst, all_pairs(inst), cfg, rng);
      CHECK(sep.S.size() == sep.T.size());
      CHECK(static_cast<int>(sep.S.size()) >= static_cast<int>(std::ceil(cfg.beta * 2 * k)));
      double delta = 1e100;
      std::set<Vertex> seen;
      for (std::size_t i = 0; i < sep.S.size(); ++i) {
        CHECK(partner[sep.S[i]] == sep.T[i]);
        CHECK(seen.insert(sep.S[i]).second);
        CHECK(seen.insert(sep.T[i]).second);
        for (Vertex t : sep.T) delta = std::min(delta, emb.metric(sep.S[i], t));
      }
      CHECK(sep.delta == doctest::Approx(delta).epsilon(1e-12));
      CHECK(sep.delta >= sep.target_delta - 1e-12);
      CHECK(sep.attempts >= 1);
    }
  }

  TEST_CASE("fixed seed is reproducible") {
    Rng gen(406);
    const auto inst = random_instance(gen, 20, 8, 5, 0.2);
    const auto emb = hypercube_embedding(gen, inst, 6);
    std::mt19937_64 a(9), b(9);
    const auto x = find_separated_sets(emb, inst, all_pairs(inst), {}, a);
    const auto y = find_separated_sets(emb, inst, all_pairs(inst), {}, b);
    CHECK(x.S == y.S);
    CHECK(x.delta == y.delta);
  }
}

TEST_SUITE("trace") {
  TEST_CASE("json lines round trip") {
    Rng rng(407);
    for (int it = 0; it < 10; ++it) {
      const auto inst = random_instance(rng, 10, 3);
      RunTrace trace;
      if (it % 2) {
        trace = round_lp(inst, build_and_solve_lp(inst)).trace;
      } else {
        trace = round_sdp(inst, hypercube_embedding(rng, inst, 4)).trace;
      }
      std::ostringstream first;
      write_trace(first, trace);
      std::istringstream in(first.str());
      const auto back = read_trace(in);
      std::ostringstream second;
      write_trace(second, back);
      CHECK(first.str() == second.str());
      CHECK(back.steps.size() == trace.steps.size());
      CHECK(back.cut_value == trace.cut_value);
    }
  }

  TEST_CASE("malformed trace reports its line") {
    BmcInstance inst(2, {{0, 1, 5}}, {{0, 1}});
    std::ostringstream out;
    write_trace(out, round_lp(inst, build_and_solve_lp(inst)).trace);
    const std::string text = out.str();
    std::istringstream in(text.substr(0, text.find('\n') + 1) + "not json\n");
    try {
      read_trace(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }

  TEST_CASE("greedy leftovers never raise the cut") {
    Rng rng(408);
    for (int it = 0; it < 40; ++it) {
      const auto inst = random_instance(rng, 12, 2, 10, 0.5);
      const auto lp = build_and_solve_lp(inst);
      const auto plain = round_lp(inst, lp);
      const auto greedy = round_lp(inst, lp, LpRoundingConfig{true});
      CHECK(greedy.partition.cut_value <= plain.partition.cut_value + 1e-12);
      CHECK(greedy.trace.greedy_leftovers);
      CHECK(verify_trace(inst, lp.metric, greedy.trace, greedy.partition).ok());
    }
  }
}
