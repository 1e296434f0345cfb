#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <functional>
#include <stdexcept>
#include <string>

namespace proxdist::linalg {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SparseMatrixXd = Eigen::SparseMatrix<double>;

/// Thrown when a linear system has no usable solution (rank deficiency,
/// indefinite shift, negative curvature in CG).
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetric eigendecomposition A = V diag(d) V^T with eigenvalues ascending
/// and orthonormal eigenvector columns.
struct SymEig {
  VectorXd eigenvalues;
  MatrixXd eigenvectors;
};

/// Thin SVD of a p x q matrix (p >= q): U = left * diag(singular) * right^T.
/// Singular values are nonnegative and descending; both factors have
/// orthonormal columns.
struct ThinSvd {
  MatrixXd left;        // p x q
  VectorXd singular;    // q, descending
  MatrixXd right;       // q x q
};

/// Largest relative asymmetry |A - A^T| / (1 + |A|_F).
double asymmetry(const MatrixXd& a);

/// Eigendecomposition of a symmetric matrix. Rejects inputs whose relative
/// asymmetry exceeds 1e-10, reporting the offending magnitude.
SymEig sym_eig(const MatrixXd& a);

/// Thin SVD of a p x q matrix with p >= q.
ThinSvd thin_svd(const MatrixXd& u);

/// Solves (A + rho I) x = b from a cached eigendecomposition of A.
/// Cost is two matrix-vector products plus a diagonal scale. Requires every
/// eigenvalue + rho to be positive.
VectorXd shifted_solve(const SymEig& eig, double rho, const VectorXd& b);

struct CgResult {
  VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Conjugate gradients on a symmetric positive definite operator given as a
/// matrix-vector product. Throws SingularSystemError on negative curvature.
CgResult cg_solve(const std::function<VectorXd(const VectorXd&)>& apply,
                  const VectorXd& b, double tol = 1e-10, int max_iters = 0);

struct LsqrResult {
  VectorXd x;
  int iterations = 0;
  bool converged = false;
};

/// Operator form of a (possibly rectangular) matrix for iterative solvers.
struct LinearOperator {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::function<VectorXd(const VectorXd&)> apply;    // A v
  std::function<VectorXd(const VectorXd&)> apply_t;  // A^T u

  static LinearOperator from_dense(const MatrixXd& a);
  static LinearOperator from_sparse(const SparseMatrixXd& a);
};

/// LSQR (Paige-Saunders): damped least squares min |Ax-b|^2 + damp^2 |x|^2.
/// Stops once the estimated normal-equation residual falls below tol times
/// its natural scale; max_iters defaults to 4 * max(rows, cols).
LsqrResult lsqr_solve(const LinearOperator& a, const VectorXd& b,
                      double damp = 0.0, double tol = 1e-10,
                      int max_iters = 0);
LsqrResult lsqr_solve(const MatrixXd& a, const VectorXd& b, double damp = 0.0,
                      double tol = 1e-10, int max_iters = 0);
LsqrResult lsqr_solve(const SparseMatrixXd& a, const VectorXd& b,
                      double damp = 0.0, double tol = 1e-10,
                      int max_iters = 0);

}  // namespace proxdist::linalg
