#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "proxdist/linalg.hpp"
#include "proxdist/projections.hpp"

namespace proxdist::problems {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using linalg::SparseMatrixXd;
using projections::SparsityMode;

/// A matrix stored dense or sparse. The storage kind is preserved through
/// serialization and drives the automatic dense/sparse solver routing.
class MatrixData {
 public:
  MatrixData() : data_(MatrixXd()) {}
  MatrixData(MatrixXd m) : data_(std::move(m)) {}
  MatrixData(SparseMatrixXd m) : data_(std::move(m)) {}

  bool is_sparse() const { return data_.index() == 1; }
  Eigen::Index rows() const;
  Eigen::Index cols() const;

  /// The stored dense matrix; throws if the storage is sparse.
  const MatrixXd& dense() const;
  /// The stored sparse matrix; throws if the storage is dense.
  const SparseMatrixXd& sparse() const;
  /// A dense copy regardless of storage.
  MatrixXd to_dense() const;

  VectorXd apply(const VectorXd& x) const;    // A x
  VectorXd apply_t(const VectorXd& x) const;  // A^T x

 private:
  std::variant<MatrixXd, SparseMatrixXd> data_;
};

/// minimize v^T x subject to A x = b, x >= 0.
struct LpProblem {
  MatrixData A;  // m x n, m <= n, full row rank
  VectorXd b;
  VectorXd v;
  void validate() const;
};

/// minimize (1/2) x^T A x + b^T x subject to x >= 0, A symmetric positive
/// definite.
struct NqpProblem {
  MatrixData A;  // n x n
  VectorXd b;
  void validate() const;
};

/// Find the closest kinship matrix (positive semidefinite, nonnegative,
/// diagonal 1/2) to a symmetric matrix Y in Frobenius norm.
struct KinshipProblem {
  MatrixXd Y;
  void validate() const;
};

/// Project x onto the second-order cone constraint {u: |A u + b| <= c^T u + d}.
struct SocProblem {
  VectorXd x;    // n
  MatrixData A;  // m x n
  VectorXd b;    // m
  VectorXd c;    // n
  double d = 0.0;
  void validate() const;
};

/// Variational index mu(M) = min x^T M x over the unit sphere intersected
/// with the nonnegative orthant.
struct CopositivityProblem {
  MatrixXd M;  // symmetric
  void validate() const;
};

/// Find x, y >= 0 with y = A x + b and x^T y = 0; loss (1/2)|y - A x - b|^2.
struct LcpProblem {
  MatrixXd A;  // n x n
  VectorXd b;
  void validate() const;
};

/// Sparse principal components: maximize tr(U^T S U) over p x q matrices
/// with orthonormal columns and at most r nonzero entries per column
/// (column mode) or in total (matrix mode). Either a centered n x p data
/// matrix X (then S = X^T X / n) or the covariance S itself is stored.
struct SpcaProblem {
  std::optional<MatrixXd> X;
  std::optional<MatrixXd> S;
  int q = 1;
  int r = 1;
  SparsityMode mode = SparsityMode::Column;

  int dim_p() const;
  /// S when stored, else X^T X / n.
  MatrixXd covariance() const;
  void validate() const;
};

using ProblemInstance =
    std::variant<LpProblem, NqpProblem, KinshipProblem, SocProblem,
                 CopositivityProblem, LcpProblem, SpcaProblem>;

/// Lowercase kind tag used in JSON envelopes and CLI arguments:
/// lp, nqp, kinship, soc, copositivity, lcp, spca.
std::string kind_of(const ProblemInstance& inst);

void validate(const ProblemInstance& inst);

/// JSON envelope {kind, dims, seed?, matrices...}. Dense matrices are nested
/// arrays; sparse matrices are 1-based coordinate triples. Serialization is
/// byte-deterministic for a given instance.
std::string to_json_string(const ProblemInstance& inst,
                           std::optional<std::uint64_t> seed = {});
ProblemInstance from_json_string(const std::string& text,
                                 std::optional<std::uint64_t>* seed_out = nullptr);

void save_instance(const std::string& path, const ProblemInstance& inst,
                   std::optional<std::uint64_t> seed = {});
/// Parse or validation failures are reported with the file path and, for
/// malformed JSON, the offending line.
ProblemInstance load_instance(const std::string& path,
                              std::optional<std::uint64_t>* seed_out = nullptr);

// Seeded generators. All draws go through a single Rng stream per call, so
// regeneration with the same arguments is bit-identical.

/// Standard normal A; b = A xhat for a nonnegative xhat (feasible); and
/// v = A^T u + w with w > 0 (bounded optimum at a vertex). Sparse mode fills
/// A at the given density and guarantees no empty row.
LpProblem make_lp(int m, int n, std::uint64_t seed, bool sparse = false,
                  double density = 0.01);

/// A = M^T M + 0.001 I with standard normal M; sparse mode fills M at
/// density log10(n)/n.
NqpProblem make_nqp(int n, std::uint64_t seed, bool sparse = false);

/// Standard normal matrix symmetrized by averaging opposing off-diagonals.
KinshipProblem make_kinship(int n, std::uint64_t seed);

/// Standard normal A, b, c, x; d is set so the constraint set has a strictly
/// feasible point. Sparse mode fills A at the given density.
SocProblem make_soc(int m, int n, std::uint64_t seed, bool sparse = false,
                    double density = 0.01);

/// Symmetrized standard normal matrix.
CopositivityProblem make_copositivity(int n, std::uint64_t seed);

/// The n x n Horn pattern: unit diagonal, -1 on the cyclic neighbor bands,
/// +1 elsewhere. For n = 5 this is the classical Horn matrix with
/// variational index 0.
CopositivityProblem make_horn(int n = 5);

/// Standard normal A with b = y* - A x* for a random complementary pair
/// (x*, y*), so a zero-loss solution is guaranteed to exist.
LcpProblem make_lcp(int n, std::uint64_t seed);

/// Standard normal n x p data matrix with centered columns.
SpcaProblem make_spca(int n_samples, int p, int q, int r, SparsityMode mode,
                      std::uint64_t seed);

}  // namespace proxdist::problems
