#include "proxdist/projections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "proxdist/linalg.hpp"

namespace proxdist::projections {

namespace {

void require_symmetric(const MatrixXd& x, const char* who) {
  const double skew = linalg::asymmetry(x);
  if (skew > 1e-10) {
    std::ostringstream msg;
    msg << who << ": input is not symmetric (max relative asymmetry " << skew
        << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

VectorXd project_nonnegative(const VectorXd& x) {
  return x.cwiseMax(0.0);
}

MatrixXd project_psd(const MatrixXd& x) {
  require_symmetric(x, "project_psd");
  const linalg::SymEig eig = linalg::sym_eig(x);
  if (eig.eigenvalues(0) >= 0.0) return x;  // already PSD
  const VectorXd clipped = eig.eigenvalues.cwiseMax(0.0);
  MatrixXd out = eig.eigenvectors * clipped.asDiagonal() *
                 eig.eigenvectors.transpose();
  out = 0.5 * (out + out.transpose());  // kill roundoff skew
  return out;
}

std::pair<VectorXd, double> project_lorentz(const VectorXd& w, double r) {
  const double norm = w.norm();
  if (norm <= r) return {w, r};
  if (norm <= -r) return {VectorXd::Zero(w.size()), 0.0};
  const double alpha = 0.5 * (norm + r);
  return {(alpha / norm) * w, alpha};
}

VectorXd project_sphere_orthant(const VectorXd& y) {
  if (y.size() < 1) {
    throw std::invalid_argument("project_sphere_orthant: empty vector");
  }
  VectorXd out = VectorXd::Zero(y.size());
  if (y.maxCoeff() > 0.0) {
    out = y.cwiseMax(0.0);
    out /= out.norm();
    return out;
  }
  // No positive component: the best unit direction is the one along the
  // largest (least negative) entry. First index wins ties; the all-zero
  // input lands on e_1.
  Eigen::Index best = 0;
  y.maxCoeff(&best);
  out(best) = 1.0;
  return out;
}

MatrixXd project_sparsity(const MatrixXd& u, int r, SparsityMode mode) {
  const Eigen::Index p = u.rows();
  const Eigen::Index q = u.cols();
  if (mode == SparsityMode::Column) {
    if (r < 1 || r > p) {
      std::ostringstream msg;
      msg << "project_sparsity: column budget " << r << " out of range [1, "
          << p << "]";
      throw std::invalid_argument(msg.str());
    }
    if (r == p) return u;
    MatrixXd out = MatrixXd::Zero(p, q);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < q; ++j) {
      std::iota(order.begin(), order.end(), Eigen::Index{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](Eigen::Index a, Eigen::Index b) {
                         return std::abs(u(a, j)) > std::abs(u(b, j));
                       });
      for (int k = 0; k < r; ++k) {
        const Eigen::Index i = order[static_cast<std::size_t>(k)];
        out(i, j) = u(i, j);
      }
    }
    return out;
  }
  const Eigen::Index total = p * q;
  if (r < 1 || r > total) {
    std::ostringstream msg;
    msg << "project_sparsity: matrix budget " << r << " out of range [1, "
        << total << "]";
    throw std::invalid_argument(msg.str());
  }
  if (r == total) return u;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  // Column-major linear indices; stable_sort keeps the smaller index on ties.
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return std::abs(u(a % p, a / p)) >
                            std::abs(u(b % p, b / p));
                   });
  MatrixXd out = MatrixXd::Zero(p, q);
  for (int k = 0; k < r; ++k) {
    const Eigen::Index idx = order[static_cast<std::size_t>(k)];
    out(idx % p, idx / p) = u(idx % p, idx / p);
  }
  return out;
}

StiefelProjection project_stiefel(const MatrixXd& u) {
  const linalg::ThinSvd svd = linalg::thin_svd(u);
  StiefelProjection out;
  out.point = svd.left * svd.right.transpose();
  const double sigma_max = svd.singular.size() > 0 ? svd.singular(0) : 0.0;
  const double sigma_min =
      svd.singular.size() > 0 ? svd.singular(svd.singular.size() - 1) : 0.0;
  out.rank_deficient = sigma_min < 1e-12 * sigma_max || sigma_max == 0.0;
  return out;
}

MatrixXd project_kinship_structure(const MatrixXd& x) {
  require_symmetric(x, "project_kinship_structure");
  MatrixXd out = x.cwiseMax(0.0);
  out.diagonal().setConstant(0.5);
  return out;
}

std::pair<VectorXd, VectorXd> project_complementarity(const VectorXd& u,
                                                      const VectorXd& v) {
  if (u.size() != v.size()) {
    std::ostringstream msg;
    msg << "project_complementarity: length mismatch " << u.size() << " vs "
        << v.size();
    throw std::invalid_argument(msg.str());
  }
  VectorXd x = VectorXd::Zero(u.size());
  VectorXd y = VectorXd::Zero(v.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) >= std::max(v(i), 0.0)) {
      x(i) = u(i);
    } else if (v(i) >= std::max(u(i), 0.0)) {
      y(i) = v(i);
    }
    // otherwise both coordinates stay at zero
  }
  return {x, y};
}

AffineProjector::AffineProjector(MatrixXd a, VectorXd b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != b_.size()) {
    throw std::invalid_argument("AffineProjector: A rows must match b length");
  }
  const MatrixXd gram = a_ * a_.transpose();
  gram_llt_.compute(gram);
  // LLT alone can slip past mild rank deficiency; check the pivots too.
  bool deficient = gram_llt_.info() != Eigen::Success;
  if (!deficient) {
    const VectorXd pivots = gram_llt_.matrixLLT().diagonal();
    deficient = pivots.minCoeff() <=
                1e-13 * std::max(1.0, pivots.maxCoeff());
  }
  if (deficient) {
    throw linalg::SingularSystemError(
        "AffineProjector: A A^T is rank deficient; A must have full row rank");
  }
}

VectorXd AffineProjector::operator()(const VectorXd& x) const {
  const VectorXd residual = a_ * x - b_;
  return x - a_.transpose() * gram_llt_.solve(residual);
}

VectorXd project_affine(const VectorXd& x, const MatrixXd& a,
                        const VectorXd& b) {
  return AffineProjector(a, b)(x);
}

std::pair<VectorXd, VectorXd> project_splitting(const VectorXd& u,
                                                const VectorXd& v,
                                                const MatrixXd& a) {
  const Eigen::Index r = a.rows();
  const Eigen::Index s = a.cols();
  if (u.size() != s || v.size() != r) {
    throw std::invalid_argument(
        "project_splitting: u must have A's column count, v its row count");
  }
  if (r < s) {
    MatrixXd gram = a * a.transpose();
    gram.diagonal().array() += 1.0;
    const VectorXd lambda = Eigen::LLT<MatrixXd>(gram).solve(a * u - v);
    VectorXd x = u - a.transpose() * lambda;
    VectorXd y = v + lambda;
    return {std::move(x), std::move(y)};
  }
  MatrixXd gram = a.transpose() * a;
  gram.diagonal().array() += 1.0;
  VectorXd x = Eigen::LLT<MatrixXd>(gram).solve(a.transpose() * v + u);
  VectorXd y = a * x;
  return {std::move(x), std::move(y)};
}

VectorXd prox_quadratic_loss(const VectorXd& z, const VectorXd& y,
                             double rho) {
  if (rho <= 0.0) {
    throw std::invalid_argument("prox_quadratic_loss: rho must be positive");
  }
  return (z + rho * y) / (1.0 + rho);
}

VectorXd prox_linear_loss(const VectorXd& v, const VectorXd& y, double rho) {
  if (rho <= 0.0) {
    throw std::invalid_argument("prox_linear_loss: rho must be positive");
  }
  return y - v / rho;
}

bool in_nonnegative(const VectorXd& x, double tol) {
  return x.size() == 0 || x.minCoeff() >= -tol;
}

bool in_psd(const MatrixXd& x, double tol) {
  if (linalg::asymmetry(x) > tol) return false;
  const MatrixXd sym = 0.5 * (x + x.transpose());
  return linalg::sym_eig(sym).eigenvalues(0) >= -tol;
}

bool in_lorentz(const VectorXd& w, double r, double tol) {
  return w.norm() <= r + tol;
}

bool in_sphere_orthant(const VectorXd& y, double tol) {
  return std::abs(y.norm() - 1.0) <= tol && y.minCoeff() >= -tol;
}

bool in_sparsity(const MatrixXd& u, int r, SparsityMode mode) {
  auto nnz_col = [&](Eigen::Index j) {
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      if (u(i, j) != 0.0) ++count;
    }
    return count;
  };
  if (mode == SparsityMode::Column) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      if (nnz_col(j) > r) return false;
    }
    return true;
  }
  Eigen::Index total = 0;
  for (Eigen::Index j = 0; j < u.cols(); ++j) total += nnz_col(j);
  return total <= r;
}

bool in_stiefel(const MatrixXd& u, double tol) {
  const MatrixXd gram = u.transpose() * u;
  return (gram - MatrixXd::Identity(u.cols(), u.cols()))
             .cwiseAbs()
             .maxCoeff() <= tol;
}

bool in_kinship_structure(const MatrixXd& x, double tol) {
  if (linalg::asymmetry(x) > tol) return false;
  if ((x.diagonal().array() - 0.5).abs().maxCoeff() > tol) return false;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (i != j && x(i, j) < -tol) return false;
    }
  }
  return true;
}

bool in_complementarity(const VectorXd& x, const VectorXd& y, double tol) {
  if (x.size() != y.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) < -tol || y(i) < -tol) return false;
    if (std::min(std::abs(x(i)), std::abs(y(i))) > tol) return false;
  }
  return true;
}

bool in_affine(const VectorXd& x, const MatrixXd& a, const VectorXd& b,
               double tol) {
  return (a * x - b).cwiseAbs().maxCoeff() <= tol;
}

bool in_splitting(const VectorXd& x, const VectorXd& y, const MatrixXd& a,
                  double tol) {
  return (a * x - y).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace proxdist::projections
