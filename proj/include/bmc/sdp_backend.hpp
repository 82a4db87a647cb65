#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace bmc {

/// coef * X(p, q); X is symmetric so (p, q) and (q, p) are the same term.
struct SdpEntry {
  int p = 0;
  int q = 0;
  double coef = 0.0;
};

enum class SdpSense { Equal, GreaterEqual };

struct SdpConstraint {
  std::vector<SdpEntry> entries;
  SdpSense sense = SdpSense::Equal;
  double rhs = 0.0;
};

/// min <C, X>  s.t.  linear constraints on entries of X,  X PSD.
struct SdpProblem {
  int dim = 0;
  Eigen::MatrixXd objective;  // symmetric dim x dim
  std::vector<SdpConstraint> constraints;

  double evaluate(const SdpConstraint& c, const Eigen::MatrixXd& X) const;
  /// Largest violation of any constraint at X.
  double max_violation(const Eigen::MatrixXd& X) const;
};

enum class SdpStatus { Optimal, IterationLimit, NumericalFailure };

std::string to_string(SdpStatus status);

struct SdpResult {
  SdpStatus status = SdpStatus::NumericalFailure;
  Eigen::MatrixXd X;
  std::vector<double> y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

/// Contract: constraint residual <= 1e-7, relative duality gap <= 1e-6.
class SdpBackend {
 public:
  virtual ~SdpBackend() = default;
  virtual std::string name() const = 0;
  virtual SdpResult solve(const SdpProblem& problem) const = 0;
};

/// Dense primal-dual path-following method with the HKM search direction and
/// a Mehrotra corrector. Inequalities get explicit slacks.
class InteriorPointSdp final : public SdpBackend {
 public:
  struct Options {
    int max_iterations = 100;
    double tolerance = 1e-9;
    /// Accepted once progress stalls near machine precision.
    double acceptable = 1e-7;
  };
  InteriorPointSdp() = default;
  explicit InteriorPointSdp(Options opt) : opt_(opt) {}
  std::string name() const override { return "ipm"; }
  SdpResult solve(const SdpProblem& problem) const override;

 private:
  Options opt_;
};

/// "ipm". The LP-only name "simplex" also maps to "ipm", since the SDP has a
/// single implementation. Throws std::invalid_argument otherwise.
std::unique_ptr<SdpBackend> make_sdp_backend(std::string_view name);

/// Backend named by BMC_BACKEND ("ipm" if unset).
std::unique_ptr<SdpBackend> default_sdp_backend();

}  // namespace bmc
