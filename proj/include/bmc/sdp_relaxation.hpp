#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "bmc/instance.hpp"
#include "bmc/metric.hpp"
#include "bmc/sdp_backend.hpp"

namespace bmc {

struct SdpConfig {
  /// Violated triangle constraints added per round (the worst ones first).
  int batch = 500;
  /// Stop once no triangle is violated by more than this.
  double tolerance = 1e-6;
  int max_rounds = 50;
  /// nullptr: backend named by BMC_BACKEND.
  const SdpBackend* backend = nullptr;
};

/// Gram matrix of unit vectors x_v. Internally the SDP is solved over a
/// reduced Gram matrix with one row per source and per non-terminal: the
/// sink of a pair is represented as the negated source vector. Then
/// Y(u, v) = sign[u] * sign[v] * Yr(index[u], index[v]).
struct GramSolution {
  Eigen::MatrixXd Y;
  double value = 0.0;

  Eigen::MatrixXd reduced;
  std::vector<int> index;
  std::vector<int> sign;

  int rounds = 0;
  int num_constraints = 0;
  /// Per round: number of violated triangles found and the largest violation.
  std::vector<int> violated_per_round;
  std::vector<double> max_violation_per_round;

  /// Wraps an arbitrary symmetric matrix (identity reduction).
  static GramSolution from_matrix(const Eigen::MatrixXd& Y);

  /// Y(u,u) + Y(v,v) - 2 Y(u,v).
  double distance(Vertex u, Vertex v) const { return Y(u, u) + Y(v, v) - 2.0 * Y(u, v); }
};

/// min (1/4) sum_e w_e |x_u - x_v|^2 over unit vectors with x_t = -x_s for
/// every pair and the l2^2 triangle inequalities, added lazily. Requires
/// matching demands. Throws SolverError on backend failure or when the lazy
/// loop exceeds cfg.max_rounds.
GramSolution build_and_solve_sdp(const BmcInstance& inst, const SdpConfig& cfg = {});

/// max over triples of d(u,w) - d(u,v) - d(v,w) with d the Gram distance.
double max_gram_triangle_violation(const GramSolution& g);

struct VectorEmbedding {
  /// Column v is x_v.
  Eigen::MatrixXd vectors;
  /// d(u,v) = |x_u - x_v|^2.
  FiniteMetric metric;

  int dimension() const { return static_cast<int>(vectors.rows()); }
};

/// Factors the reduced Gram matrix by eigendecomposition. Eigenvalues in
/// [-1e-6, 0) are clamped to 0; anything more negative throws
/// std::invalid_argument.
VectorEmbedding extract_vectors(const GramSolution& g);

/// (1/2) sum_{i,j} (|x_si - x_sj|^2 + |x_ti - x_tj|^2 + |x_si - x_tj|^2 + |x_ti - x_sj|^2)
/// over the pairs whose terminals make up `subset`. Throws
/// std::invalid_argument if `subset` is not a union of whole pairs.
double check_spreading(const VectorEmbedding& emb, const BmcInstance& inst,
                       const std::vector<Vertex>& subset);

/// Line-oriented dumps: "gram <n>" then n rows; "embedding <n> <dim>" then
/// one "<v> <coords...>" line per vertex.
void write_gram(std::ostream& out, const GramSolution& g);
void write_embedding(std::ostream& out, const VectorEmbedding& emb);

}  // namespace bmc
