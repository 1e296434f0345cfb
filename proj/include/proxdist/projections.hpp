#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace proxdist::projections {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Nearest point of a constraint set together with the Euclidean (Frobenius)
/// distance from the query point.
struct ProjectionResult {
  VectorXd point;
  double distance = 0.0;
};

/// A named projection map. `project` must return the nearest point of the
/// target set under the documented tie-breaking; operator() also reports the
/// distance travelled.
struct ProjectionOperator {
  std::string name;
  std::function<VectorXd(const VectorXd&)> project;

  ProjectionResult operator()(const VectorXd& x) const {
    ProjectionResult r;
    r.point = project(x);
    r.distance = (x - r.point).norm();
    return r;
  }
};

/// Componentwise clamp onto the nonnegative orthant.
VectorXd project_nonnegative(const VectorXd& x);

/// Projection of a symmetric matrix onto the positive semidefinite cone by
/// truncating negative eigenvalues. Rejects asymmetric input.
MatrixXd project_psd(const MatrixXd& x);

/// Projection onto the Lorentz cone {(w, r): |w| <= r}. Interior points are
/// fixed, points in the polar cone map to the origin, and everything else
/// lands on the boundary ray through w.
std::pair<VectorXd, double> project_lorentz(const VectorXd& w, double r);

/// Projection onto the unit sphere intersected with the nonnegative orthant.
/// If some component is positive: clamp negatives to zero and normalize.
/// Otherwise the projection is a standard basis vector along the largest
/// (least negative) component; ties and the all-zero input take the lowest
/// index.
VectorXd project_sphere_orthant(const VectorXd& y);

enum class SparsityMode { Column, Matrix };

/// Projection onto the sparsity set: in column mode each column keeps its r
/// largest-magnitude entries; in matrix mode the r largest-magnitude entries
/// of the whole matrix are kept. Equal magnitudes keep the smaller
/// column-major linear index.
MatrixXd project_sparsity(const MatrixXd& u, int r,
                          SparsityMode mode = SparsityMode::Column);

struct StiefelProjection {
  MatrixXd point;
  /// Set when the smallest singular value is below 1e-12 times the largest;
  /// the projection is multi-valued there and the returned factor is the
  /// SVD backend's choice.
  bool rank_deficient = false;
};

/// Projection of a p x q matrix (p >= q) onto the Stiefel manifold of
/// orthonormal-column matrices, via the thin SVD's V W^T.
StiefelProjection project_stiefel(const MatrixXd& u);

/// Projection onto the kinship structure set: diagonal entries reset to 1/2,
/// off-diagonals clamped to be nonnegative. Rejects asymmetric input.
MatrixXd project_kinship_structure(const MatrixXd& x);

/// Pairwise projection onto the complementarity set
/// {(x, y): x, y >= 0 and x_i y_i = 0}. The first branch wins the tie
/// u_i = v_i > 0.
std::pair<VectorXd, VectorXd> project_complementarity(const VectorXd& u,
                                                      const VectorXd& v);

/// Projection onto the affine set {x: A x = b} for full-row-rank A, with the
/// Cholesky factor of A A^T cached at construction.
class AffineProjector {
 public:
  AffineProjector(MatrixXd a, VectorXd b);
  VectorXd operator()(const VectorXd& x) const;
  const MatrixXd& matrix() const { return a_; }
  const VectorXd& rhs() const { return b_; }

 private:
  MatrixXd a_;
  VectorXd b_;
  Eigen::LLT<MatrixXd> gram_llt_;
};

VectorXd project_affine(const VectorXd& x, const MatrixXd& a,
                        const VectorXd& b);

/// Projection of (u, v) onto the splitting manifold {(x, y): A x = y}.
/// Eliminates through the r x r Gramian when r < s and the s x s Gramian
/// otherwise; both are shifted by the identity and always invertible.
std::pair<VectorXd, VectorXd> project_splitting(const VectorXd& u,
                                                const VectorXd& v,
                                                const MatrixXd& a);

/// Proximal map of the quadratic loss (1/2)|z - x|^2 at anchor z:
/// the convex combination (z + rho y) / (1 + rho).
VectorXd prox_quadratic_loss(const VectorXd& z, const VectorXd& y, double rho);

/// Proximal map of the linear loss v^T x: the shifted point y - v / rho.
VectorXd prox_linear_loss(const VectorXd& v, const VectorXd& y, double rho);

// Membership predicates at the documented 1e-10 absolute tolerance on the
// defining residuals. Used by tests and the sampling oracle.
bool in_nonnegative(const VectorXd& x, double tol = 1e-10);
bool in_psd(const MatrixXd& x, double tol = 1e-10);
bool in_lorentz(const VectorXd& w, double r, double tol = 1e-10);
bool in_sphere_orthant(const VectorXd& y, double tol = 1e-10);
bool in_sparsity(const MatrixXd& u, int r, SparsityMode mode);
bool in_stiefel(const MatrixXd& u, double tol = 1e-10);
bool in_kinship_structure(const MatrixXd& x, double tol = 1e-10);
bool in_complementarity(const VectorXd& x, const VectorXd& y,
                        double tol = 1e-10);
bool in_affine(const VectorXd& x, const MatrixXd& a, const VectorXd& b,
               double tol = 1e-10);
bool in_splitting(const VectorXd& x, const VectorXd& y, const MatrixXd& a,
                  double tol = 1e-10);

}  // namespace proxdist::projections
