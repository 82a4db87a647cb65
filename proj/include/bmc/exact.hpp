#pragma once

#include "bmc/instance.hpp"

namespace bmc {

struct ExactConfig {
  /// Largest number of pairs solve_exact accepts (2^(k-1) flow computations).
  int max_pairs = 20;
};

/// Exact optimum by trying every side assignment of the pairs (first pair
/// fixed), contracting each side's terminals into a super-source/sink and
/// taking the best minimum cut. Requires matching demands (see fuse_demands).
/// Throws std::invalid_argument if k exceeds cfg.max_pairs.
Bipartition solve_exact(const BmcInstance& inst, const ExactConfig& cfg = {});

/// Largest vertex count brute_force accepts.
inline constexpr int kBruteForceMaxVertices = 22;

/// Enumerates all 2^(n-1) bipartitions. Works on any well-formed instance
/// (demands need not be a matching). Throws InfeasibleInstance when no
/// bipartition separates every pair; std::invalid_argument when n > 22.
Bipartition brute_force(const BmcInstance& inst);

}  // namespace bmc
