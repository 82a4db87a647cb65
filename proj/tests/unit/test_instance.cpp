#include <set>
#include <sstream>

#include "bmc/errors.hpp"
#include "bmc/instance.hpp"
#include "bmc/io.hpp"
#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"

using namespace bmc;
using namespace bmc::testing;

TEST_SUITE("instance") {
  TEST_CASE("validate accepts a single edge with its pair") {
    BmcInstance inst(2, {{0, 1, 5}}, {{0, 1}});
    CHECK(validate(inst).ok());
    CHECK_NOTHROW(require_valid(inst));
  }

  TEST_CASE("validate reports a degenerate pair") {
    BmcInstance inst(2, {{0, 1, 5}}, {{0, 0}});
    const auto rep = validate(inst);
    CHECK_FALSE(rep.ok());
    CHECK(rep.has(ViolationKind::DegeneratePair));
    CHECK_THROWS_AS(require_valid(inst), std::invalid_argument);
  }

  TEST_CASE("validate reports a negative weight") {
    BmcInstance inst(2, {{0, 1, -1}}, {{0, 1}});
    CHECK(validate(inst).has(ViolationKind::NegativeWeight));
  }

  TEST_CASE("validate reports self loops and out of range ids") {
    BmcInstance inst(3, {{1, 1, 2}, {0, 3, 1}}, {{0, 5}});
    const auto rep = validate(inst);
    CHECK(rep.has(ViolationKind::SelfLoop));
    CHECK(rep.has(ViolationKind::VertexOutOfRange));
    CHECK(rep.violations.size() >= 3);
  }

  TEST_CASE("cut value examples") {
    BmcInstance edge(2, {{0, 1, 5}}, {{0, 1}});
    CHECK(cut_value(edge, {Side::X, Side::Xbar}) == 5);
    CHECK(cut_value(edge, {Side::X, Side::X}) == 0);
    BmcInstance tri(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}, {});
    CHECK(cut_value(tri, {Side::Xbar, Side::X, Side::X}) == 2);
    CHECK_THROWS_AS(cut_value(tri, {Side::X, Side::X}), std::invalid_argument);
  }

  TEST_CASE("parallel edges add up") {
    BmcInstance inst(2, {{0, 1, 2}, {1, 0, 3}}, {{0, 1}});
    CHECK(cut_value(inst, {Side::X, Side::Xbar}) == 5);
    CHECK(inst.total_weight() == 5);
  }

  TEST_CASE("cut value is invariant under swapping sides") {
    Rng rng(11);
    for (int it = 0; it < 50; ++it) {
      const auto inst = random_real_instance(rng, 9, 2);
      std::vector<Side> side(9), flipped(9);
      for (int v = 0; v < 9; ++v) {
        side[v] = rng() % 2 ? Side::X : Side::Xbar;
        flipped[v] = opposite(side[v]);
      }
      CHECK(cut_value(inst, side) == doctest::Approx(cut_value(inst, flipped)).epsilon(1e-12));
    }
  }

  TEST_CASE("fuse contracts a shared terminal") {
    // Path a-b-c, pairs (a,b) and (a,c): b and c end up together.
    BmcInstance inst(3, {{0, 1, 1}, {1, 2, 1}}, {{0, 1}, {0, 2}});
    const auto fused = fuse_demands(inst);
    CHECK(fused.instance.num_vertices() == 2);
    CHECK(fused.instance.num_pairs() == 1);
    CHECK(fused.vertex_map[1] == fused.vertex_map[2]);
    CHECK(fused.vertex_map[0] != fused.vertex_map[1]);
    CHECK(enumerate_optimum(fused.instance) == enumerate_optimum(inst));
    CHECK(*enumerate_optimum(inst) == 1);
  }

  TEST_CASE("fuse rejects an odd demand cycle") {
    BmcInstance inst(3, {{0, 1, 1}}, {{0, 1}, {1, 2}, {0, 2}});
    CHECK_THROWS_AS(fuse_demands(inst), InfeasibleInstance);
    CHECK_FALSE(demands_graph(inst).bipartite());
  }

  TEST_CASE("fuse keeps matching demands up to renaming") {
    BmcInstance inst(5, {{0, 1, 2}, {1, 2, 3}, {3, 4, 1}, {0, 4, 7}}, {{0, 3}, {2, 1}});
    const auto fused = fuse_demands(inst);
    CHECK(fused.instance.num_vertices() == 5);
    CHECK(fused.instance.num_pairs() == 2);
    std::set<Vertex> image(fused.vertex_map.begin(), fused.vertex_map.end());
    CHECK(image.size() == 5);
    CHECK(fused.instance.edges().size() == 4);
    CHECK(fused.instance.total_weight() == inst.total_weight());
  }

  TEST_CASE("a pair listed twice is deduplicated") {
    BmcInstance inst(3, {{0, 1, 1}, {1, 2, 1}}, {{0, 2}, {2, 0}, {0, 2}});
    const auto dg = demands_graph(inst);
    CHECK(dg.demands.size() == 1);
    CHECK(fuse_demands(inst).instance.num_pairs() == 1);
  }

  TEST_CASE("fusion preserves the optimum on random instances") {
    Rng rng(2024);
    int feasible = 0;
    for (int it = 0; it < 200; ++it) {
      const int n = 2 + static_cast<int>(rng() % 9);
      const int k = 1 + static_cast<int>(rng() % 4);
      const auto inst = random_overlapping_instance(rng, n, k);
      const auto before = enumerate_optimum(inst);
      if (!before) {
        CHECK_THROWS_AS(fuse_demands(inst), InfeasibleInstance);
        continue;
      }
      ++feasible;
      const auto fused = fuse_demands(inst);
      CHECK(fused.instance.has_matching_demands());
      std::set<Vertex> terminals;
      for (const auto& p : fused.instance.pairs()) {
        CHECK(p.s != p.t);
        terminals.insert(p.s);
        terminals.insert(p.t);
      }
      CHECK(terminals.size() == 2 * fused.instance.pairs().size());
      const auto after = enumerate_optimum(fused.instance);
      REQUIRE(after.has_value());
      CHECK(*after == doctest::Approx(*before).epsilon(1e-12));
    }
    CHECK(feasible > 50);
  }

  TEST_CASE("lift maps a fused partition to an equal cut") {
    Rng rng(5);
    for (int it = 0; it < 50; ++it) {
      const auto inst = random_overlapping_instance(rng, 8, 3);
      if (!demands_graph(inst).bipartite()) continue;
      const auto fused = fuse_demands(inst);
      std::vector<Side> side(fused.instance.num_vertices());
      for (auto& s : side) s = rng() % 2 ? Side::X : Side::Xbar;
      for (const auto& p : fused.instance.pairs()) side[p.t] = opposite(side[p.s]);
      const auto fp = make_bipartition(fused.instance, side);
      const auto lifted = fused.lift(inst, fp);
      CHECK(is_feasible(inst, lifted.side));
      CHECK(lifted.cut_value == doctest::Approx(fp.cut_value).epsilon(1e-12));
    }
  }
}

TEST_SUITE("io") {
  TEST_CASE("instance text round trip") {
    const std::string text =
        "# comment\n"
        "p bmc 3 2 1\n"
        "e 0 1 2.5\n"
        "e 1 2 3   # trailing\n"
        "\n"
        "d 0 2\n";
    const auto inst = parse_instance_string(text);
    CHECK(inst.num_vertices() == 3);
    CHECK(inst.edges().size() == 2);
    CHECK(inst.edges()[0].w == 2.5);
    CHECK(inst.pairs()[0].t == 2);
    std::ostringstream out;
    write_instance(out, inst);
    const auto back = parse_instance_string(out.str());
    CHECK(back.edges().size() == 2);
    CHECK(back.edges()[1].w == 3);
    CHECK(back.pairs()[0].s == 0);
  }

  TEST_CASE("real weights survive a round trip exactly") {
    Rng rng(3);
    const auto inst = random_real_instance(rng, 7, 2);
    std::ostringstream out;
    write_instance(out, inst);
    const auto back = parse_instance_string(out.str());
    REQUIRE(back.edges().size() == inst.edges().size());
    for (std::size_t i = 0; i < inst.edges().size(); ++i) CHECK(back.edges()[i].w == inst.edges()[i].w);
  }

  TEST_CASE("parse errors carry the line number") {
    auto line_of = [](const std::string& text) {
      try {
        parse_instance_string(text);
      } catch (const ParseError& e) {
        return e.line();
      }
      return std::size_t{999};
    };
    CHECK(line_of("p bmc 2\n") == 1);
    CHECK(line_of("p bmc 2 1 1\ne 0 1 x\nd 0 1\n") == 2);
    CHECK(line_of("p bmc 2 1 1\ne 0 1 1\nd 0 7\n") == 3);
    CHECK(line_of("e 0 1 1\n") == 1);
    CHECK(line_of("p bmc 2 2 0\ne 0 1 1\n") == 2);
    CHECK(line_of("p bmc 2 1 0\nq 1\n") == 2);
  }

  TEST_CASE("min uncut text round trip") {
    const auto mu = parse_minuncut_string("p minuncut 3 2\nc 0 1 1\nc 2 2 0\n");
    CHECK(mu.num_vars == 3);
    CHECK(mu.constraints.size() == 2);
    CHECK(mu.constraints[0].parity == 1);
    std::ostringstream out;
    write_minuncut(out, mu);
    CHECK(parse_minuncut_string(out.str()).constraints[1].i == 2);
    CHECK_THROWS_AS(parse_minuncut_string("p minuncut 2 1\nc 0 1 2\n"), ParseError);
  }
}
