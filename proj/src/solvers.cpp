#include "proxdist/solvers.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <nlohmann/json.hpp>

#include "proxdist/linalg.hpp"
#include "proxdist/projections.hpp"
#include "proxdist/rng.hpp"

namespace proxdist::solvers {

namespace {

using engine::MmProblem;
using engine::MmResult;
using linalg::LinearOperator;
using linalg::SingularSystemError;
using linalg::SymEig;
using problems::MatrixData;
using namespace proxdist::projections;

constexpr double kRhoCapDefault = 4194304.0;  // 2^22

VectorXd vec(const MatrixXd& m) {
  return Eigen::Map<const VectorXd>(m.data(), m.size());
}

MatrixXd unvec(const VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const MatrixXd>(v.data(), rows, cols);
}

MatrixXd symmetrize(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

SymEig nonnegative_eig(const MatrixXd& gram) {
  SymEig eig = linalg::sym_eig(gram);
  // The Gramians fed through here are positive semidefinite by construction;
  // clip the roundoff negatives so shifted solves stay well-posed.
  eig.eigenvalues = eig.eigenvalues.cwiseMax(0.0);
  return eig;
}

MatrixXd normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  MatrixXd a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = rng.normal();
  }
  return a;
}

}  // namespace

bool sparse_route(const MatrixData& a, Strategy strategy) {
  switch (strategy) {
    case Strategy::Dense:
      return false;
    case Strategy::Sparse:
      return true;
    case Strategy::Auto:
    default:
      return a.is_sparse() || std::max(a.rows(), a.cols()) > 512;
  }
}

bool sparse_route(Eigen::Index n, Strategy strategy) {
  switch (strategy) {
    case Strategy::Dense:
      return false;
    case Strategy::Sparse:
      return true;
    case Strategy::Auto:
    default:
      return n > 512;
  }
}

PenaltySchedule lp_schedule(bool sparse) {
  PenaltySchedule s;
  if (sparse) {
    s.rho0 = 1.0;
    s.multiplier = 1.5;
    s.interval = 50;
  } else {
    s.rho0 = 1.0;
    s.multiplier = 2.0;
    s.interval = 100;
  }
  return s;
}

PenaltySchedule nqp_schedule(bool sparse) {
  PenaltySchedule s;
  if (sparse) {
    s.rho0 = 1e-4;
    s.multiplier = 1.5;
    s.interval = 100;
  } else {
    s.rho0 = 1.0;
    s.multiplier = 1.5;
    s.interval = 200;
  }
  return s;
}

PenaltySchedule kinship_schedule(KinshipVariant variant) {
  PenaltySchedule s;
  if (variant == KinshipVariant::PD1) {
    s.rho0 = 1.2;
    s.multiplier = 1.2;
    s.interval = 1;
    s.rho_cap = kRhoCapDefault;
  } else {
    s.rho0 = 1.0;
    s.multiplier = 5.0;
    s.interval = 100;
  }
  return s;
}

PenaltySchedule soc_schedule(bool sparse) {
  PenaltySchedule s;
  if (sparse) {
    s.rho0 = 0.01;
    s.multiplier = 2.5;
    s.interval = 10;
  } else {
    s.rho0 = 1.0;
    s.multiplier = 2.0;
    s.interval = 100;
  }
  return s;
}

PenaltySchedule copositivity_schedule() {
  PenaltySchedule s;
  s.rho0 = 1.2;
  s.multiplier = 1.2;
  s.interval = 1;
  s.rho_cap = 1e30;  // effectively uncapped over any realistic budget
  return s;
}

PenaltySchedule lcp_schedule() {
  PenaltySchedule s;
  s.rho0 = 1.0;
  s.multiplier = 1.5;
  s.interval = 100;
  return s;
}

PenaltySchedule spca_schedule() {
  PenaltySchedule s;
  s.rho0 = 1.0;
  s.multiplier = 1.5;
  s.interval = 100;
  return s;
}

PenaltySchedule default_schedule(const problems::ProblemInstance& inst,
                                 Strategy strategy, KinshipVariant variant) {
  return std::visit(
      [&](const auto& p) -> PenaltySchedule {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, problems::LpProblem>) {
          return lp_schedule(sparse_route(p.A, strategy));
        } else if constexpr (std::is_same_v<T, problems::NqpProblem>) {
          return nqp_schedule(sparse_route(p.A, strategy));
        } else if constexpr (std::is_same_v<T, problems::KinshipProblem>) {
          return kinship_schedule(variant);
        } else if constexpr (std::is_same_v<T, problems::SocProblem>) {
          return soc_schedule(sparse_route(p.A, strategy));
        } else if constexpr (std::is_same_v<T, problems::CopositivityProblem>) {
          return copositivity_schedule();
        } else if constexpr (std::is_same_v<T, problems::LcpProblem>) {
          return lcp_schedule();
        } else {
          return spca_schedule();
        }
      },
      inst);
}

SolveResult solve_lp(const problems::LpProblem& inst,
                     const PenaltySchedule& schedule,
                     const ConvergenceCriteria& criteria,
                     const SolveOptions& options) {
  inst.validate();
  const Eigen::Index n = inst.A.cols();
  const bool iterative = sparse_route(inst.A, options.strategy);

  MmProblem problem;
  problem.loss = [&inst](const VectorXd& x) { return inst.v.dot(x); };
  problem.distance = [](const VectorXd& x) {
    return (x - x.cwiseMax(0.0)).norm();
  };

  MatrixXd pinv;  // A^T (A A^T)^{-1}, cached for the dense route
  LinearOperator op;
  if (iterative) {
    op = inst.A.is_sparse() ? LinearOperator::from_sparse(inst.A.sparse())
                            : LinearOperator::from_dense(inst.A.dense());
    problem.step = [&inst, op](const VectorXd& z, double rho) {
      const VectorXd w = z.cwiseMax(0.0) - inst.v / rho;
      const VectorXd r = op.apply(w) - inst.b;
      const linalg::LsqrResult sol = linalg::lsqr_solve(op, r);
      if ((op.apply(sol.x) - r).norm() > 1e-6 * (1.0 + r.norm())) {
        throw SingularSystemError(
            "solve_lp: normal system did not close; A A^T may be rank "
            "deficient");
      }
      return VectorXd(w - sol.x);
    };
  } else {
    const MatrixXd a = inst.A.to_dense();
    const MatrixXd gram = a * a.transpose();
    Eigen::LLT<MatrixXd> llt(gram);
    // Cholesky pivots scale as square roots of the Gram eigenvalues, so the
    // rank cutoff is sqrt-scaled too.
    const VectorXd pivots = llt.matrixLLT().diagonal();
    if (llt.info() != Eigen::Success ||
        pivots.minCoeff() <= 1e-7 * pivots.maxCoeff()) {
      throw SingularSystemError("solve_lp: A A^T is rank deficient");
    }
    pinv = llt.solve(a).transpose();
    problem.step = [&inst, a, pinv](const VectorXd& z, double rho) {
      const VectorXd w = z.cwiseMax(0.0) - inst.v / rho;
      return VectorXd(w - pinv * (a * w - inst.b));
    };
  }

  MmResult mm = engine::run_mm(problem, VectorXd::Zero(n), schedule, criteria,
                               options);
  SolveResult result;
  result.x = std::move(mm.x);
  result.loss = inst.v.dot(result.x);
  result.dist = problem.distance(result.x);
  result.trace = std::move(mm.trace);
  result.status = result.trace.status;
  return result;
}

SolveResult solve_nqp(const problems::NqpProblem& inst,
                      const PenaltySchedule& schedule,
                      const ConvergenceCriteria& criteria,
                      const SolveOptions& options) {
  inst.validate();
  const Eigen::Index n = inst.A.rows();
  const bool iterative = sparse_route(inst.A, options.strategy);

  MmProblem problem;
  problem.loss = [&inst](const VectorXd& x) {
    return 0.5 * x.dot(inst.A.apply(x)) + inst.b.dot(x);
  };
  problem.distance = [](const VectorXd& x) {
    return (x - x.cwiseMax(0.0)).norm();
  };

  SymEig eig;
  if (iterative) {
    problem.step = [&inst, n](const VectorXd& z, double rho) {
      const VectorXd rhs = rho * z.cwiseMax(0.0) - inst.b;
      LinearOperator shifted;
      shifted.rows = n;
      shifted.cols = n;
      shifted.apply = [&inst, rho](const VectorXd& v) {
        return VectorXd(rho * v + inst.A.apply(v));
      };
      shifted.apply_t = shifted.apply;  // rho I + A is symmetric
      return linalg::lsqr_solve(shifted, rhs).x;
    };
  } else {
    eig = linalg::sym_eig(inst.A.to_dense());
    if (eig.eigenvalues(0) <= 0.0) {
      throw std::invalid_argument("solve_nqp: A is not positive definite");
    }
    problem.step = [&inst, &eig](const VectorXd& z, double rho) {
      return linalg::shifted_solve(eig, rho, rho * z.cwiseMax(0.0) - inst.b);
    };
  }

  MmResult mm = engine::run_mm(problem, VectorXd::Zero(n), schedule, criteria,
                               options);
  SolveResult result;
  result.x = std::move(mm.x);
  result.loss = problem.loss(result.x);
  result.dist = problem.distance(result.x);
  result.trace = std::move(mm.trace);
  result.status = result.trace.status;
  return result;
}

SolveResult project_kinship(const problems::KinshipProblem& inst,
                            const PenaltySchedule& schedule,
                            const ConvergenceCriteria& criteria,
                            const SolveOptions& options,
                            KinshipVariant variant) {
  inst.validate();
  const Eigen::Index n = inst.Y.rows();
  const MatrixXd& y = inst.Y;

  MmProblem problem;
  problem.loss = [&y, n](const VectorXd& xv) {
    return 0.5 * (unvec(xv, n, n) - y).squaredNorm();
  };

  if (variant == KinshipVariant::PD3) {
    problem.step = [&y, n](const VectorXd& zv, double rho) {
      const MatrixXd z = symmetrize(unvec(zv, n, n));
      const MatrixXd blend =
          (y + rho * project_kinship_structure(z)) / (1.0 + rho);
      return vec(project_psd(symmetrize(blend)));
    };
    problem.distance = [n](const VectorXd& xv) {
      const MatrixXd x = symmetrize(unvec(xv, n, n));
      return (x - project_kinship_structure(x)).norm();
    };
  } else {
    problem.step = [&y, n](const VectorXd& zv, double rho) {
      const MatrixXd z = symmetrize(unvec(zv, n, n));
      const MatrixXd sum = project_psd(z) + project_kinship_structure(z);
      return vec(MatrixXd((y + 0.5 * rho * sum) / (1.0 + rho)));
    };
    problem.distance = [n](const VectorXd& xv) {
      const MatrixXd x = symmetrize(unvec(xv, n, n));
      return std::max((x - project_psd(x)).norm(),
                      (x - project_kinship_structure(x)).norm());
    };
    problem.penalty = [n](const VectorXd& xv) {
      const MatrixXd x = symmetrize(unvec(xv, n, n));
      const double d1 = (x - project_psd(x)).norm();
      const double d2 = (x - project_kinship_structure(x)).norm();
      return 0.25 * (d1 * d1 + d2 * d2);
    };
  }

  SolveOptions opts = options;
  if (variant == KinshipVariant::PD1) opts.accelerate = false;

  MmResult mm = engine::run_mm(problem, vec(project_kinship_structure(y)),
                               schedule, criteria, opts);
  SolveResult result;
  result.X = symmetrize(unvec(mm.x, n, n));
  result.x = vec(result.X);
  result.loss = 0.5 * (result.X - y).squaredNorm();
  result.dist = problem.distance(result.x);
  result.trace = std::move(mm.trace);
  result.status = result.trace.status;
  return result;
}

SolveResult solve_soc_projection(const problems::SocProblem& inst,
                                 const PenaltySchedule& schedule,
                                 const ConvergenceCriteria& criteria,
                                 const SolveOptions& options) {
  inst.validate();
  const bool iterative = sparse_route(inst.A, options.strategy);

  auto lorentz_parts = [&inst](const VectorXd& u) {
    return std::pair<VectorXd, double>(inst.A.apply(u) + inst.b,
                                       inst.c.dot(u) + inst.d);
  };

  MmProblem problem;
  problem.loss = [&inst](const VectorXd& u) {
    return 0.5 * (u - inst.x).squaredNorm();
  };
  problem.distance = [lorentz_parts](const VectorXd& u) {
    const auto [w, r] = lorentz_parts(u);
    const auto [wt, rt] = project_lorentz(w, r);
    return std::sqrt((w - wt).squaredNorm() + (r - rt) * (r - rt));
  };

  SymEig eig;
  if (!iterative) {
    const MatrixXd a = inst.A.to_dense();
    eig = nonnegative_eig(a.transpose() * a +
                          inst.c * inst.c.transpose());
  }
  problem.step = [&inst, &eig, iterative, lorentz_parts](const VectorXd& z,
                                                         double rho) {
    const auto [w, r] = lorentz_parts(z);
    const auto [wt, rt] = project_lorentz(w, r);
    const VectorXd rhs =
        inst.x / rho + inst.A.apply_t(wt - inst.b) + (rt - inst.d) * inst.c;
    if (iterative) {
      auto apply = [&inst, rho](const VectorXd& v) {
        return VectorXd(v / rho + inst.A.apply_t(inst.A.apply(v)) +
                        inst.c * inst.c.dot(v));
      };
      return linalg::cg_solve(apply, rhs).x;
    }
    return linalg::shifted_solve(eig, 1.0 / rho, rhs);
  };

  MmResult mm =
      engine::run_mm(problem, inst.x, schedule, criteria, options);
  SolveResult result;
  result.x = std::move(mm.x);
  result.loss = problem.loss(result.x);
  result.dist = problem.distance(result.x);
  result.trace = std::move(mm.trace);
  result.status = result.trace.status;
  return result;
}

SolveResult copositivity_index(const problems::CopositivityProblem& inst,
                               const PenaltySchedule& schedule,
                               const ConvergenceCriteria& criteria,
                               const SolveOptions& options, int restarts) {
  inst.validate();
  if (restarts < 1) {
    throw std::invalid_argument("copositivity_index: restarts must be >= 1");
  }
  const Eigen::Index n = inst.M.rows();
  const SymEig eig = linalg::sym_eig(inst.M);
  const double lambda_min = eig.eigenvalues(0);

  PenaltySchedule sched = schedule;
  if (lambda_min <= 0.0) {
    // Keep every shifted system positive definite with a clear margin.
    sched.rho0 = std::max(schedule.rho0, -1.5 * lambda_min + 1e-12);
    sched.rho_cap = std::max(sched.rho_cap, sched.rho0);
  }

  MmProblem problem;
  problem.loss = [&inst](const VectorXd& x) {
    return 0.5 * x.dot(inst.M * x);
  };
  problem.distance = [](const VectorXd& x) {
    return (x - project_sphere_orthant(x)).norm();
  };
  problem.step = [&eig](const VectorXd& z, double rho) {
    return linalg::shifted_solve(eig, rho,
                                 VectorXd(rho * project_sphere_orthant(z)));
  };

  Rng rng(options.seed);
  SolveResult best;
  bool have_best = false;
  for (int t = 0; t < restarts; ++t) {
    const VectorXd start =
        project_sphere_orthant(normal_matrix(rng, n, 1).col(0).cwiseAbs());
    MmResult mm = engine::run_mm(problem, start, sched, criteria, options);
    const VectorXd on_set = project_sphere_orthant(mm.x);
    const double mu = on_set.dot(inst.M * on_set);
    if (!have_best || mu < best.loss) {
      have_best = true;
      best.x = on_set;
      best.loss = mu;
      best.dist = problem.distance(mm.x);
      best.trace = std::move(mm.trace);
      best.status = best.trace.status;
    }
  }
  return best;
}

SolveResult solve_lcp(const problems::LcpProblem& inst,
                      const PenaltySchedule& schedule,
                      const ConvergenceCriteria& criteria,
                      const SolveOptions& options, int restarts) {
  inst.validate();
  if (restarts < 1) {
    throw std::invalid_argument("solve_lcp: restarts must be >= 1");
  }
  const Eigen::Index n = inst.A.rows();
  const MatrixXd& a = inst.A;
  const bool iterative = sparse_route(n, options.strategy);

  MmProblem problem;
  problem.loss = [&inst, &a, n](const VectorXd& z) {
    return 0.5 * (z.tail(n) - a * z.head(n) - inst.b).squaredNorm();
  };
  problem.distance = [n](const VectorXd& z) {
    const auto [xt, yt] = project_complementarity(z.head(n), z.tail(n));
    return std::sqrt((z.head(n) - xt).squaredNorm() +
                     (z.tail(n) - yt).squaredNorm());
  };

  SymEig eig;
  if (!iterative) eig = nonnegative_eig(a.transpose() * a);
  problem.step = [&inst, &a, &eig, iterative, n](const VectorXd& z,
                                                 double rho) {
    const auto [xt, yt] = project_complementarity(z.head(n), z.tail(n));
    const VectorXd rhs = a.transpose() * (yt - inst.b) + (1.0 + rho) * xt;
    VectorXd xn;
    if (iterative) {
      auto apply = [&a, rho](const VectorXd& v) {
        return VectorXd((1.0 + rho) * v + a.transpose() * (a * v));
      };
      xn = linalg::cg_solve(apply, rhs).x;
    } else {
      xn = linalg::shifted_solve(eig, 1.0 + rho, rhs);
    }
    VectorXd next(2 * n);
    next.head(n) = xn;
    next.tail(n) = (a * xn + inst.b + rho * yt) / (1.0 + rho);
    return next;
  };

  // Exact refinement: the iteration usually identifies the right active
  // pattern long before the residual reaches zero, so solve the pattern's
  // square system directly and keep the result when it is a feasible
  // complementary pair.
  auto polish = [&a, &inst, n](const VectorXd& z) -> std::optional<VectorXd> {
    const auto [xt, yt] = project_complementarity(z.head(n), z.tail(n));
    std::vector<Eigen::Index> sup;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (xt(i) > yt(i)) sup.push_back(i);
    }
    VectorXd x = VectorXd::Zero(n);
    if (!sup.empty()) {
      const Eigen::Index k = static_cast<Eigen::Index>(sup.size());
      MatrixXd ass(k, k);
      VectorXd bs(k);
      for (Eigen::Index i = 0; i < k; ++i) {
        bs(i) = inst.b(sup[i]);
        for (Eigen::Index j = 0; j < k; ++j) ass(i, j) = a(sup[i], sup[j]);
      }
      Eigen::FullPivLU<MatrixXd> lu(ass);
      if (!lu.isInvertible()) return std::nullopt;
      const VectorXd xs = lu.solve(-bs);
      if (xs.minCoeff() < -1e-9) return std::nullopt;
      for (Eigen::Index i = 0; i < k; ++i) x(sup[i]) = std::max(0.0, xs(i));
    }
    const VectorXd y = a * x + inst.b;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (x(i) == 0.0 && y(i) < -1e-9) return std::nullopt;
    }
    VectorXd z2(2 * n);
    z2.head(n) = x;
    z2.tail(n) = y;
    return z2;
  };

  // The loss landscape over the complementarity set has spurious basins, so
  // try the origin first and then seeded nonnegative random starts, keeping
  // the lowest residual. A start that certifies an exact solution ends the
  // sweep.
  Rng rng(options.seed);
  SolveResult best;
  bool have_best = false;
  for (int t = 0; t < restarts; ++t) {
    VectorXd z0 = VectorXd::Zero(2 * n);
    if (t > 0) z0 = normal_matrix(rng, 2 * n, 1).col(0).cwiseAbs();
    MmResult mm = engine::run_mm(problem, z0, schedule, criteria, options);
    VectorXd z = mm.x;
    SolveStatus status = mm.trace.status;
    if (const std::optional<VectorXd> exact = polish(z)) {
      if (problem.loss(*exact) <= problem.loss(z)) {
        z = *exact;
        status = SolveStatus::Converged;
      }
    }
    const double loss = problem.loss(z);
    if (!have_best || loss < best.loss) {
      have_best = true;
      best.x = z.head(n);
      best.y = z.tail(n);
      best.loss = loss;
      best.dist = problem.distance(z);
      best.trace = std::move(mm.trace);
      best.status = status;
    }
    if (best.status == SolveStatus::Converged && best.loss <= 1e-12) break;
  }
  return best;
}

SolveResult solve_spca(const problems::SpcaProblem& inst,
                       const PenaltySchedule& schedule,
                       const ConvergenceCriteria& criteria,
                       const SolveOptions& options, bool warm_start,
                       const std::optional<MatrixXd>& init) {
  inst.validate();
  const MatrixXd s = symmetrize(inst.covariance());
  const Eigen::Index p = s.rows();
  const Eigen::Index q = inst.q;
  const SymEig eig = linalg::sym_eig(s);
  if (eig.eigenvalues(0) < -1e-8 * (1.0 + std::abs(eig.eigenvalues(p - 1)))) {
    throw std::invalid_argument(
        "solve_spca: covariance is not positive semidefinite");
  }

  const int r = inst.r;
  const SparsityMode mode = inst.mode;

  MmProblem problem;
  problem.loss = [&s, p, q](const VectorXd& uv) {
    const MatrixXd u = unvec(uv, p, q);
    return -0.5 * (u.transpose() * s * u).trace();
  };
  problem.distance = [p, q, r, mode](const VectorXd& uv) {
    const MatrixXd u = unvec(uv, p, q);
    return (u - project_sparsity(u, r, mode)).norm();
  };
  problem.step = [&s, p, q, r, mode](const VectorXd& zv, double rho) {
    const MatrixXd z = unvec(zv, p, q);
    const MatrixXd target = s * z + rho * project_sparsity(z, r, mode);
    return vec(project_stiefel(target).point);
  };

  MatrixXd u0(p, q);
  if (init) {
    if (init->rows() != p || init->cols() != q) {
      throw std::invalid_argument("solve_spca: init must be p x q");
    }
    u0 = project_stiefel(*init).point;
  } else if (warm_start) {
    // Columns of the eigenvector factor are ascending; take the top q.
    for (Eigen::Index j = 0; j < q; ++j) {
      u0.col(j) = eig.eigenvectors.col(p - 1 - j);
    }
  } else {
    Rng rng(options.seed);
    u0 = project_stiefel(normal_matrix(rng, p, q)).point;
  }

  MmResult mm = engine::run_mm(problem, vec(u0), schedule, criteria, options);
  SolveResult result;
  result.X = unvec(mm.x, p, q);
  result.x = std::move(mm.x);
  result.loss = problem.loss(result.x);
  result.dist = problem.distance(result.x);
  result.trace = std::move(mm.trace);
  result.status = result.trace.status;
  return result;
}

double compute_pve(const MatrixXd& x, const MatrixXd& u) {
  if (x.cols() != u.rows()) {
    throw std::invalid_argument("compute_pve: loading rows must match data columns");
  }
  const double total = x.squaredNorm();
  if (total <= 0.0) {
    throw std::invalid_argument("compute_pve: data matrix is zero");
  }
  const MatrixXd gram = u.transpose() * u;
  Eigen::FullPivLU<MatrixXd> lu(gram);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("compute_pve: U^T U is singular");
  }
  const MatrixXd xq = x * u * lu.solve(u.transpose());
  return xq.squaredNorm() / total;
}

double nqp_kkt_residual(const problems::NqpProblem& inst, const VectorXd& x) {
  const VectorXd grad = inst.A.apply(x) + inst.b;
  return x.cwiseMin(grad).cwiseAbs().maxCoeff();
}

SolveResult solve(const problems::ProblemInstance& inst,
                  const SolveConfig& config) {
  const PenaltySchedule schedule = config.schedule.value_or(default_schedule(
      inst, config.options.strategy, config.kinship_variant));
  return std::visit(
      [&](const auto& p) -> SolveResult {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, problems::LpProblem>) {
          return solve_lp(p, schedule, config.criteria, config.options);
        } else if constexpr (std::is_same_v<T, problems::NqpProblem>) {
          return solve_nqp(p, schedule, config.criteria, config.options);
        } else if constexpr (std::is_same_v<T, problems::KinshipProblem>) {
          return project_kinship(p, schedule, config.criteria, config.options,
                                 config.kinship_variant);
        } else if constexpr (std::is_same_v<T, problems::SocProblem>) {
          return solve_soc_projection(p, schedule, config.criteria,
                                      config.options);
        } else if constexpr (std::is_same_v<T, problems::CopositivityProblem>) {
          return copositivity_index(p, schedule, config.criteria,
                                    config.options, config.restarts);
        } else if constexpr (std::is_same_v<T, problems::LcpProblem>) {
          return solve_lcp(p, schedule, config.criteria, config.options,
                           config.restarts);
        } else {
          return solve_spca(p, schedule, config.criteria, config.options,
                            config.spca_warm_start);
        }
      },
      inst);
}

std::string result_to_json_string(const std::string& kind,
                                  const SolveResult& result,
                                  const std::string& trace_path) {
  nlohmann::ordered_json out;
  out["kind"] = kind;
  out["status"] = engine::to_string(result.status);
  out["loss"] = result.loss;
  out["dist"] = result.dist;
  out["iters"] = result.trace.iterations();
  out["seconds"] = result.trace.seconds();
  nlohmann::ordered_json sol = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < result.x.size(); ++i) sol.push_back(result.x(i));
  out["solution"] = std::move(sol);
  if (result.y.size() > 0) {
    nlohmann::ordered_json yv = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < result.y.size(); ++i) yv.push_back(result.y(i));
    out["y"] = std::move(yv);
  }
  if (result.X.size() > 0) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < result.X.rows(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (Eigen::Index j = 0; j < result.X.cols(); ++j) {
        row.push_back(result.X(i, j));
      }
      rows.push_back(std::move(row));
    }
    out["matrix"] = std::move(rows);
  }
  if (!trace_path.empty()) out["trace"] = trace_path;
  return out.dump(2) + "\n";
}

}  // namespace proxdist::solvers
