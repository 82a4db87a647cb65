#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bmc {

enum class RowSense { GreaterEqual, LessEqual, Equal };

/// min c^T x  subject to sparse rows and x >= 0.
struct LinearProgram {
  struct Row {
    std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
    RowSense sense = RowSense::GreaterEqual;
    double rhs = 0.0;
  };

  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;

  explicit LinearProgram(int n = 0) : num_vars(n), objective(static_cast<std::size_t>(n), 0.0) {}

  void add_row(std::vector<std::pair<int, double>> coeffs, RowSense sense, double rhs) {
    rows.push_back({std::move(coeffs), sense, rhs});
  }

  /// Largest violation of any row or of x >= 0 at `x`.
  double max_violation(const std::vector<double>& x) const;
  double evaluate(const std::vector<double>& x) const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

std::string to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::NumericalFailure;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

/// Accuracy contract for every backend: rows satisfied to 1e-8, objective
/// within 1e-7 relative of the optimum.
class LpBackend {
 public:
  virtual ~LpBackend() = default;
  virtual std::string name() const = 0;
  virtual LpResult solve(const LinearProgram& lp) const = 0;
};

/// Mehrotra predictor-corrector interior point on the normal equations in
/// the variable space (rows are cheap, variables are not).
class InteriorPointLp final : public LpBackend {
 public:
  struct Options {
    int max_iterations = 200;
    double tolerance = 1e-10;
    /// Dual residual and gap accepted once the barrier parameter is exhausted.
    double acceptable = 1e-8;
  };
  InteriorPointLp() = default;
  explicit InteriorPointLp(Options opt) : opt_(opt) {}
  std::string name() const override { return "ipm"; }
  LpResult solve(const LinearProgram& lp) const override;

 private:
  Options opt_;
};

/// Dense two-phase tableau simplex. Meant for small programs and as an
/// independent check on the interior point backend.
class DenseSimplexLp final : public LpBackend {
 public:
  struct Options {
    int max_pivots = 200000;
    double tolerance = 1e-9;
  };
  DenseSimplexLp() = default;
  explicit DenseSimplexLp(Options opt) : opt_(opt) {}
  std::string name() const override { return "simplex"; }
  LpResult solve(const LinearProgram& lp) const override;

 private:
  Options opt_;
};

/// "ipm" or "simplex"; throws std::invalid_argument otherwise.
std::unique_ptr<LpBackend> make_lp_backend(std::string_view name);

/// Backend named by the BMC_BACKEND environment variable ("ipm" if unset).
std::unique_ptr<LpBackend> default_lp_backend();

/// Sparse text dump:
///   lp <rows> <cols> <nnz>
///   c <col> <cost>                 (nonzero costs)
///   r <row> <ge|le|eq> <rhs>
///   a <row> <col> <coefficient>
void write_lp(std::ostream& out, const LinearProgram& lp);

}  // namespace bmc
