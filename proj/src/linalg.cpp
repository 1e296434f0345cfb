#include "proxdist/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace proxdist::linalg {

double asymmetry(const MatrixXd& a) {
  if (a.rows() != a.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  const double gap = (a - a.transpose()).cwiseAbs().maxCoeff();
  return gap / (1.0 + a.norm());
}

SymEig sym_eig(const MatrixXd& a) {
  const double skew = asymmetry(a);
  if (skew > 1e-10) {
    std::ostringstream msg;
    msg << "sym_eig: input is not symmetric (max relative asymmetry " << skew
        << ")";
    throw std::invalid_argument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw SingularSystemError("sym_eig: eigendecomposition failed");
  }
  return SymEig{solver.eigenvalues(), solver.eigenvectors()};
}

ThinSvd thin_svd(const MatrixXd& u) {
  if (u.rows() < u.cols()) {
    std::ostringstream msg;
    msg << "thin_svd: need rows >= cols, got " << u.rows() << " x " << u.cols();
    throw std::invalid_argument(msg.str());
  }
  Eigen::JacobiSVD<MatrixXd> svd(u, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return ThinSvd{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

VectorXd shifted_solve(const SymEig& eig, double rho, const VectorXd& b) {
  const double floor = (eig.eigenvalues.array() + rho).minCoeff();
  if (floor <= 0.0) {
    std::ostringstream msg;
    msg << "shifted_solve: A + rho I is singular or indefinite (min shifted "
           "eigenvalue "
        << floor << ")";
    throw SingularSystemError(msg.str());
  }
  const VectorXd projected = eig.eigenvectors.transpose() * b;
  const VectorXd scaled =
      projected.array() / (eig.eigenvalues.array() + rho);
  return eig.eigenvectors * scaled;
}

CgResult cg_solve(const std::function<VectorXd(const VectorXd&)>& apply,
                  const VectorXd& b, double tol, int max_iters) {
  const Eigen::Index n = b.size();
  if (max_iters <= 0) max_iters = static_cast<int>(4 * n) + 10;
  const double bnorm = b.norm();
  CgResult result;
  result.x = VectorXd::Zero(n);
  if (bnorm == 0.0) {
    result.converged = true;
    return result;
  }
  VectorXd r = b;
  VectorXd p = r;
  double rr = r.squaredNorm();
  for (int iter = 1; iter <= max_iters; ++iter) {
    const VectorXd ap = apply(p);
    const double curvature = p.dot(ap);
    if (curvature <= 0.0) {
      std::ostringstream msg;
      msg << "cg_solve: negative curvature (p'Ap = " << curvature
          << "), operator is not positive definite";
      throw SingularSystemError(msg.str());
    }
    const double alpha = rr / curvature;
    result.x += alpha * p;
    r -= alpha * ap;
    const double rr_next = r.squaredNorm();
    result.iterations = iter;
    result.relative_residual = std::sqrt(rr_next) / bnorm;
    if (result.relative_residual <= tol) {
      result.converged = true;
      return result;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return result;
}

LinearOperator LinearOperator::from_dense(const MatrixXd& a) {
  LinearOperator op;
  op.rows = a.rows();
  op.cols = a.cols();
  op.apply = [a](const VectorXd& v) { return VectorXd(a * v); };
  op.apply_t = [a](const VectorXd& u) { return VectorXd(a.transpose() * u); };
  return op;
}

LinearOperator LinearOperator::from_sparse(const SparseMatrixXd& a) {
  LinearOperator op;
  op.rows = a.rows();
  op.cols = a.cols();
  op.apply = [a](const VectorXd& v) { return VectorXd(a * v); };
  op.apply_t = [a](const VectorXd& u) { return VectorXd(a.transpose() * u); };
  return op;
}

LsqrResult lsqr_solve(const LinearOperator& a, const VectorXd& b, double damp,
                      double tol, int max_iters) {
  if (b.size() != a.rows) {
    throw std::invalid_argument("lsqr_solve: b length does not match rows");
  }
  if (max_iters <= 0) {
    max_iters = static_cast<int>(4 * std::max(a.rows, a.cols)) + 10;
  }

  LsqrResult result;
  result.x = VectorXd::Zero(a.cols);

  // Golub-Kahan bidiagonalization state.
  VectorXd u = b;
  double beta = u.norm();
  if (beta == 0.0) {
    result.converged = true;
    return result;
  }
  u /= beta;
  VectorXd v = a.apply_t(u);
  double alpha = v.norm();
  if (alpha == 0.0) {
    result.converged = true;  // b is orthogonal to range(A); x = 0 is optimal
    return result;
  }
  v /= alpha;
  VectorXd w = v;

  double phibar = beta;
  double rhobar = alpha;
  const double bnorm = beta;
  double anorm2 = 0.0;   // running |A|_F^2 estimate
  double ddnorm = 0.0;
  double res2 = 0.0;     // damping contribution to the residual

  for (int iter = 1; iter <= max_iters; ++iter) {
    u = a.apply(v) - alpha * u;
    beta = u.norm();
    anorm2 += alpha * alpha + beta * beta + damp * damp;
    if (beta > 0.0) {
      u /= beta;
      v = a.apply_t(u) - beta * v;
      alpha = v.norm();
      if (alpha > 0.0) v /= alpha;
    }

    // Eliminate the damping term with a plane rotation.
    double rhobar1 = rhobar;
    if (damp > 0.0) {
      rhobar1 = std::hypot(rhobar, damp);
      const double cs1 = rhobar / rhobar1;
      const double sn1 = damp / rhobar1;
      const double psi = sn1 * phibar;
      phibar = cs1 * phibar;
      res2 += psi * psi;
    }

    // Rotation annihilating the subdiagonal of the bidiagonal system.
    const double rho = std::hypot(rhobar1, beta);
    const double cs = rhobar1 / rho;
    const double sn = beta / rho;
    const double theta = sn * alpha;
    rhobar = -cs * alpha;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    ddnorm += w.squaredNorm() / (rho * rho);
    result.x += (phi / rho) * w;
    w = v - (theta / rho) * w;
    result.iterations = iter;

    const double anorm = std::sqrt(anorm2);
    const double rnorm = std::sqrt(phibar * phibar + res2);
    const double arnorm = alpha * std::abs(sn * phi);  // |A^T r| estimate
    const double xnorm = result.x.norm();

    // Paige-Saunders stopping rules with atol = btol = tol.
    if (rnorm <= tol * bnorm + tol * anorm * xnorm ||
        arnorm <= tol * anorm * rnorm || anorm * std::sqrt(ddnorm) * tol >= 1.0) {
      result.converged = true;
      return result;
    }
    if (alpha == 0.0 || beta == 0.0) {
      result.converged = true;  // Krylov space exhausted; solution is exact
      return result;
    }
  }
  return result;
}

LsqrResult lsqr_solve(const MatrixXd& a, const VectorXd& b, double damp,
                      double tol, int max_iters) {
  return lsqr_solve(LinearOperator::from_dense(a), b, damp, tol, max_iters);
}

LsqrResult lsqr_solve(const SparseMatrixXd& a, const VectorXd& b, double damp,
                      double tol, int max_iters) {
  return lsqr_solve(LinearOperator::from_sparse(a), b, damp, tol, max_iters);
}

}  // namespace proxdist::linalg
