#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bmc/instance.hpp"
#include "bmc/rounding.hpp"

namespace bmc {

enum class SolveMethod { Brute, Exact, Lp, Sdp };

std::string to_string(SolveMethod method);
/// "brute", "exact", "lp" or "sdp"; throws std::invalid_argument otherwise.
SolveMethod parse_solve_method(const std::string& name);

struct SolveOptions {
  SolveMethod method = SolveMethod::Exact;
  std::uint64_t seed = 1;
  bool keep_trace = false;
  bool greedy_leftovers = false;
};

struct SolveReport {
  SolveMethod method = SolveMethod::Exact;
  int num_vertices = 0;
  int num_pairs = 0;
  double cut_value = 0.0;
  /// Relaxation value (lp, sdp).
  std::optional<double> lower_bound;
  /// cut_value / lower_bound when the bound exceeds the solver tolerance (1e-6).
  std::optional<double> ratio;
  Bipartition partition;
  std::optional<std::uint64_t> seed;
  double wall_time = 0.0;
  /// Rounding trace, in the vertex ids of the fused instance.
  std::optional<RunTrace> trace;
};

/// Validates the instance, runs `opt.method` and maps the partition back to
/// the input vertices. The lp and sdp methods replay their own trace before
/// returning. Throws InfeasibleInstance when the demands graph is not
/// bipartite and InternalError when a produced partition fails re-checking.
SolveReport run_solve(const BmcInstance& inst, const SolveOptions& opt);

/// JSON object, keys in a fixed order. wall_time is written only when
/// `with_time` is set so that equal runs produce equal bytes.
std::string report_json(const SolveReport& report, bool with_time = false);

/// Aligned key/value lines followed by the partition.
std::string report_table(const SolveReport& report, bool with_time = true);

/// Partition file: either a JSON object with a "partition" array (as written
/// by report_json) or whitespace-separated 0/1 sides, '#' comments allowed.
/// Throws ParseError on malformed input or a length other than n.
std::vector<Side> parse_partition(const std::string& text, int n);
std::vector<Side> read_partition_file(const std::string& path, int n);

}  // namespace bmc
