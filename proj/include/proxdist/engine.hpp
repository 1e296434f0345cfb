#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxdist/projections.hpp"

namespace proxdist::engine {

using Eigen::VectorXd;
using projections::ProjectionOperator;

/// Annealing schedule for the penalty constant: rho starts at rho0 and is
/// multiplied by `multiplier` every `interval` iterations, clamped at
/// rho_cap. max_outer_iters bounds the total iteration count.
struct PenaltySchedule {
  double rho0 = 1.0;
  double multiplier = 2.0;
  int interval = 100;
  double rho_cap = 4194304.0;  // 2^22
  int max_outer_iters = 10000;

  void validate() const;
};

/// Convergence is declared when the relative loss change and the constraint
/// distance criteria hold simultaneously:
///   |f(x_k) - f(x_{k-1})| <= eps1 (|f(x_{k-1})| + 1)  and  dist(x_k, C) <= eps2.
struct ConvergenceCriteria {
  double eps1 = 1e-6;
  double eps2 = 1e-4;
};

enum class Strategy { Auto, Dense, Sparse };

struct SolveOptions {
  bool accelerate = true;
  int nesterov_offset = 3;  // d in the shift coefficient (k-1)/(k+d-1)
  /// When set, an accelerated step that raises the penalized loss is redone
  /// from the unshifted iterate. Off by default: the shifted map is applied
  /// unconditionally.
  bool monotone_safeguard = false;
  Strategy strategy = Strategy::Auto;
  std::uint64_t seed = 0;
};

/// Momentum bookkeeping for one fixed-rho stage. The counter restarts at 1
/// whenever rho changes.
struct AccelerationState {
  VectorXd previous;
  int k = 1;
  int offset = 3;
  bool enabled = true;
};

enum class SolveStatus { Converged, IterationLimit };

std::string to_string(SolveStatus status);

struct TraceRecord {
  int iter = 0;
  double rho = 0.0;
  double loss = 0.0;       // raw loss f
  double penalty = 0.0;    // q(x)
  double penalized = 0.0;  // f + rho q
  double dist = 0.0;       // constraint distance
  double seconds = 0.0;    // elapsed since solve start
};

struct SolveTrace {
  std::vector<TraceRecord> records;
  SolveStatus status = SolveStatus::IterationLimit;

  int iterations() const { return static_cast<int>(records.size()); }
  double seconds() const {
    return records.empty() ? 0.0 : records.back().seconds;
  }
};

/// One iteration of the trace as a JSON object per line, fields
/// iter, rho, loss, penalty, penalized, dist, seconds.
void write_trace_jsonl(std::ostream& out, const SolveTrace& trace);

/// Raised when an iterate turns non-finite; carries the trace up to the
/// failure for post-mortems.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(std::string what, SolveTrace trace)
      : std::runtime_error(std::move(what)), trace(std::move(trace)) {}
  SolveTrace trace;
};

/// Problem callbacks consumed by run_mm. `step` performs one MM iteration at
/// fixed rho and must decrease the penalized surrogate when applied
/// unaccelerated. `penalty` defaults to dist^2 / 2 when absent.
struct MmProblem {
  std::function<VectorXd(const VectorXd&, double)> step;
  std::function<double(const VectorXd&)> loss;
  std::function<double(const VectorXd&)> distance;
  std::function<double(const VectorXd&)> penalty;
};

struct MmResult {
  VectorXd x;
  SolveTrace trace;
};

/// The proximal distance driver: anneals rho along the schedule, applies the
/// step map (with Nesterov shift when enabled, restarting momentum at each
/// rho update), records the trace, and stops when both convergence criteria
/// hold or the iteration budget runs out.
MmResult run_mm(const MmProblem& problem, VectorXd x0,
                const PenaltySchedule& schedule,
                const ConvergenceCriteria& criteria,
                const SolveOptions& options = {});

/// Nesterov shift z = x_k + (k-1)/(k+d-1) (x_k - x_prev). Requires k >= 1 and
/// d >= 3. An affine combination, so affine constraints satisfied by both
/// iterates are preserved.
VectorXd nesterov_step(const VectorXd& x_k, const VectorXd& x_prev, int k,
                       int d = 3);

/// Double-majorization gradient step
/// x - (1/(L+rho)) [grad_f(x) + rho grad_q(x)] for losses with an
/// L-Lipschitz gradient; no proximal map involved.
VectorXd lipschitz_gradient_step(
    const VectorXd& x, const std::function<VectorXd(const VectorXd&)>& grad_f,
    double lipschitz, const std::function<VectorXd(const VectorXd&)>& grad_q,
    double rho);

/// Mean of half squared distances (1/2m) sum_i dist(x, C_i)^2.
double penalty_value(const VectorXd& x,
                     std::span<const ProjectionOperator> projections);

/// Arithmetic mean of the m projections of x.
VectorXd averaged_projection(const VectorXd& x,
                             std::span<const ProjectionOperator> projections);

}  // namespace proxdist::engine
