#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "bmc/instance.hpp"
#include "bmc/lp_relaxation.hpp"
#include "bmc/metric.hpp"
#include "bmc/region_growing.hpp"
#include "bmc/sdp_relaxation.hpp"

namespace bmc {

/// Antipodal terminal sets: T[i] is the partner of S[i].
struct SeparatedSets {
  std::vector<Vertex> S;
  std::vector<Vertex> T;
  /// min over u in S, v in T of d(u, v).
  double delta = 0.0;
  /// Separation the accepted attempt was pruned against.
  double target_delta = 0.0;
  int attempts = 0;
};

struct SeparationConfig {
  double beta = 0.125;
  double delta0 = 1.0;
  int retries = 32;
};

/// Random projection plus greedy pruning. Each attempt draws a Gaussian
/// direction, takes from every surviving pair the terminal with positive
/// projection, and scans them in decreasing projection order, keeping u
/// whenever d(u, partner(w)) >= target for every kept w. An attempt is
/// accepted once ceil(beta * 2 k_i) terminals are kept; after `retries`
/// failures the target is halved. The first target is
/// delta0 / sqrt(log2(2 k_i)).
SeparatedSets find_separated_sets(const VectorEmbedding& emb, const BmcInstance& inst,
                                  const std::vector<int>& surviving_pairs,
                                  const SeparationConfig& cfg, std::mt19937_64& rng);

enum class RoundingMethod { Lp, Sdp };

std::string to_string(RoundingMethod method);

/// One iteration: two balls grown to a common radius, one per side.
struct TraceStep {
  int iteration = 0;
  /// Pair the balls were grown from (LP runs); -1 for SDP runs.
  int pair = -1;
  std::vector<Vertex> centers_x;
  std::vector<Vertex> centers_xbar;
  double initial_volume = 0.0;
  /// SDP runs: separation of the centre sets and the case that fixed the
  /// search window ("small", "large", "mixed-low", "mixed-high").
  double delta = 0.0;
  std::string regime;
  double radius = 0.0;
  RadiusCertificate cert_x;
  RadiusCertificate cert_xbar;
  std::vector<Vertex> to_x;
  std::vector<Vertex> to_xbar;
  /// Pairs still surviving after this step; strictly decreasing.
  int remaining_pairs = 0;
};

struct RunTrace {
  RoundingMethod method = RoundingMethod::Lp;
  int num_pairs = 0;
  double v_star = 0.0;
  std::uint64_t seed = 0;
  double beta = 0.125;
  double c_total = 64.0;
  double c_volume = 64.0;
  std::vector<TraceStep> steps;
  /// Non-terminals left once every pair is assigned, and whether they were
  /// placed greedily instead of all on X.
  std::vector<Vertex> leftovers;
  bool greedy_leftovers = false;
  double cut_value = 0.0;
};

struct RoundingResult {
  Bipartition partition;
  RunTrace trace;
};

struct LpRoundingConfig {
  bool greedy_leftovers = false;
};

struct SdpRoundingConfig {
  SeparationConfig separation;
  /// Constants of the two good-radius predicates.
  double c_total = 64.0;
  double c_volume = 64.0;
  std::uint64_t seed = 1;
  bool greedy_leftovers = false;
};

/// Region growing from each pair in turn with initial volume V*/2k, radius
/// in (0, 1/4). Requires matching demands. Throws InternalError if a
/// guaranteed radius is not found or the final cut exceeds 32 ln(4k) V*.
RoundingResult round_lp(const BmcInstance& inst, const LpSolution& lp,
                        const LpRoundingConfig& cfg = {});

/// Separated-set region growing in the vector metric of `g`, with V(0) = 0
/// for every ball and V* = sum over edges of w_e |x_u - x_v|^2.
RoundingResult round_sdp(const BmcInstance& inst, const GramSolution& g,
                         const SdpRoundingConfig& cfg = {});
RoundingResult round_sdp(const BmcInstance& inst, const VectorEmbedding& emb,
                         const SdpRoundingConfig& cfg = {});

/// ceil(log(2k) / log(1 / (1 - beta))) + 1.
int sdp_iteration_bound(int k, double beta);

struct TraceReport {
  bool symmetric = true;
  bool antipodal = true;
  bool balls_match = true;
  bool certificates = true;
  bool feasible = true;
  bool cut_replays = true;
  bool bound = true;
  double cut = 0.0;
  double bound_value = 0.0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Replays `trace` against `metric` (the LP metric or the vector metric the
/// SDP run used) and `partition`.
TraceReport verify_trace(const BmcInstance& inst, const FiniteMetric& metric,
                         const RunTrace& trace, const Bipartition& partition);

/// One JSON object per line: a "run" header, one "step" per iteration and
/// a closing "result".
void write_trace(std::ostream& out, const RunTrace& trace);
RunTrace read_trace(std::istream& in);

}  // namespace bmc
