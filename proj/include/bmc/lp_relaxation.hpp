#pragma once

#include <iosfwd>
#include <memory>

#include "bmc/instance.hpp"
#include "bmc/lp_backend.hpp"
#include "bmc/metric.hpp"

namespace bmc {

enum class TriangleMode {
  Auto,  // full below `lazy_threshold` vertices, lazy above
  Full,
  Lazy,
};

struct LpConfig {
  TriangleMode triangles = TriangleMode::Auto;
  int lazy_threshold = 40;
  /// Violated triangle rows added per lazy round.
  int batch = 2000;
  int max_rounds = 100;
  /// Triangle violation at which the lazy loop stops.
  double tolerance = 1e-9;
  /// nullptr: backend named by BMC_BACKEND.
  const LpBackend* backend = nullptr;
  /// If set, the final program is written here in the write_lp format.
  std::ostream* dump = nullptr;
};

struct LpSolution {
  FiniteMetric metric;
  /// V* = sum over edges of w_e d_e.
  double value = 0.0;
  LpStatus status = LpStatus::NumericalFailure;
  int rounds = 0;
  int num_rows = 0;
  int num_vars = 0;
};

/// Metric relaxation: d over all vertex pairs, full triangle inequalities,
/// d(u,v) = d(partner(u), partner(v)) for terminals, d(s_i,t_i) >= 1.
/// Requires matching demands. Throws SolverError when the backend fails.
LpSolution build_and_solve_lp(const BmcInstance& inst, const LpConfig& cfg = {});

/// Shortest paths in G under edge lengths d_e: true iff every pair is at
/// distance at least 1 - tol.
bool verify_path_constraints(const BmcInstance& inst, const FiniteMetric& metric,
                             double tol = 1e-8);

}  // namespace bmc
