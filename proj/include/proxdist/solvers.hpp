#pragma once

#include <optional>
#include <string>

#include "proxdist/engine.hpp"
#include "proxdist/problems.hpp"

namespace proxdist::solvers {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using engine::ConvergenceCriteria;
using engine::PenaltySchedule;
using engine::SolveOptions;
using engine::SolveStatus;
using engine::SolveTrace;
using engine::Strategy;

/// Outcome of one solve. `x` is always the flat solution vector; matrix
/// problems also expose the matrix shape in `X`, and the linear
/// complementarity solver fills the partner vector `y`. `loss` is the
/// headline objective: for the copositivity index it is the quadratic form
/// at the sphere-and-orthant point, while the trace records the internal
/// objective x^T M x / 2.
struct SolveResult {
  VectorXd x;
  MatrixXd X;
  VectorXd y;
  double loss = 0.0;
  double dist = 0.0;
  SolveTrace trace;
  SolveStatus status = SolveStatus::IterationLimit;
};

/// Kinship algorithm variants: PD1 is the plain two-penalty iteration on a
/// geometric 1.2 schedule (acceleration forced off), PD2 the accelerated
/// two-penalty iteration, PD3 the accelerated iteration with the positive
/// semidefinite constraint folded into the domain of the loss. PD3 is the
/// default.
enum class KinshipVariant { PD1, PD2, PD3 };

/// True when a solver should take its matrix-free iterative route: always
/// under Strategy::Sparse, never under Strategy::Dense, and under
/// Strategy::Auto when the matrix is stored sparse or its larger dimension
/// exceeds 512.
bool sparse_route(const problems::MatrixData& a, Strategy strategy);
bool sparse_route(Eigen::Index n, Strategy strategy);

// Tuning defaults per problem family.
PenaltySchedule lp_schedule(bool sparse);
PenaltySchedule nqp_schedule(bool sparse);
PenaltySchedule kinship_schedule(KinshipVariant variant);
PenaltySchedule soc_schedule(bool sparse);
PenaltySchedule copositivity_schedule();
PenaltySchedule lcp_schedule();
PenaltySchedule spca_schedule();

/// The default schedule the dispatching solve() would use for an instance.
PenaltySchedule default_schedule(const problems::ProblemInstance& inst,
                                 Strategy strategy = Strategy::Auto,
                                 KinshipVariant variant = KinshipVariant::PD3);

/// minimize v^T x over A x = b, x >= 0. Every iterate satisfies the affine
/// constraint exactly (up to the linear solver's accuracy); nonnegativity is
/// penalized. The dense route caches the pseudoinverse of A; the sparse
/// route solves each normal system with LSQR.
SolveResult solve_lp(const problems::LpProblem& inst,
                     const PenaltySchedule& schedule,
                     const ConvergenceCriteria& criteria = {},
                     const SolveOptions& options = {});

/// minimize x^T A x / 2 + b^T x over x >= 0 for symmetric positive definite
/// A. Dense route uses the cached spectral decomposition of A.
SolveResult solve_nqp(const problems::NqpProblem& inst,
                      const PenaltySchedule& schedule,
                      const ConvergenceCriteria& criteria = {},
                      const SolveOptions& options = {});

/// Closest kinship matrix (positive semidefinite, nonnegative entries,
/// diagonal 1/2) to Y in Frobenius norm.
SolveResult project_kinship(const problems::KinshipProblem& inst,
                            const PenaltySchedule& schedule,
                            const ConvergenceCriteria& criteria = {},
                            const SolveOptions& options = {},
                            KinshipVariant variant = KinshipVariant::PD3);

/// Projection of x onto {u: |A u + b| <= c^T u + d}. Dense route caches the
/// spectral decomposition of A^T A + c c^T; the sparse route runs conjugate
/// gradients on the shifted Gramian.
SolveResult solve_soc_projection(const problems::SocProblem& inst,
                                 const PenaltySchedule& schedule,
                                 const ConvergenceCriteria& criteria = {},
                                 const SolveOptions& options = {});

/// Variational index mu(M): the best of `restarts` runs from seeded random
/// sphere-and-orthant starting points. If M + rho0 I is not positive
/// definite, the starting rho is shifted up so every shifted solve is
/// well-posed.
SolveResult copositivity_index(const problems::CopositivityProblem& inst,
                               const PenaltySchedule& schedule,
                               const ConvergenceCriteria& criteria = {},
                               const SolveOptions& options = {},
                               int restarts = 10);

/// Linear complementarity: x, y >= 0, y = A x + b, x^T y = 0, by minimizing
/// |y - A x - b|^2 / 2 over the complementarity set. The landscape has
/// spurious local minima, so the solve runs from the origin and then from
/// `restarts - 1` seeded nonnegative random starts, keeping the lowest
/// residual; a start that certifies the solution (converged, residual at
/// roundoff) ends the sweep early.
SolveResult solve_lcp(const problems::LcpProblem& inst,
                      const PenaltySchedule& schedule,
                      const ConvergenceCriteria& criteria = {},
                      const SolveOptions& options = {}, int restarts = 1);

/// Sparse principal components: maximize tr(U^T S U) over the Stiefel
/// manifold with the sparsity set penalized. `warm_start` seeds U with the
/// top-q eigenvectors instead of an orthonormalized Gaussian matrix. An
/// explicit `init` (orthonormalized before use) overrides both and lets a
/// matrix-budget solve continue from a column-budget solution.
SolveResult solve_spca(const problems::SpcaProblem& inst,
                       const PenaltySchedule& schedule,
                       const ConvergenceCriteria& criteria = {},
                       const SolveOptions& options = {},
                       bool warm_start = false,
                       const std::optional<MatrixXd>& init = std::nullopt);

/// Proportion of variance explained by loadings U on data X:
/// tr(Xq^T Xq) / tr(X^T X) with Xq = X U (U^T U)^{-1} U^T.
double compute_pve(const MatrixXd& x, const MatrixXd& u);

/// Max-norm of min(x, A x + b), the complementarity form of the NQP
/// optimality conditions.
double nqp_kkt_residual(const problems::NqpProblem& inst, const VectorXd& x);

struct SolveConfig {
  std::optional<PenaltySchedule> schedule;
  ConvergenceCriteria criteria;
  SolveOptions options;
  int restarts = 10;  // copositivity and lcp multistart budget
  KinshipVariant kinship_variant = KinshipVariant::PD3;
  bool spca_warm_start = false;
};

/// Dispatch on the instance kind, using the family default schedule when
/// none is given.
SolveResult solve(const problems::ProblemInstance& inst,
                  const SolveConfig& config = {});

/// Result JSON: kind, status, loss, dist, iters, seconds, solution, the
/// matrix or partner vector when present, and the trace path when given.
std::string result_to_json_string(const std::string& kind,
                                  const SolveResult& result,
                                  const std::string& trace_path = "");

}  // namespace proxdist::solvers
