#include "proxdist/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

namespace proxdist::engine {

void PenaltySchedule::validate() const {
  if (!(rho0 > 0.0)) throw std::invalid_argument("schedule: rho0 must be > 0");
  if (!(multiplier > 1.0)) {
    throw std::invalid_argument("schedule: multiplier must be > 1");
  }
  if (interval < 1) throw std::invalid_argument("schedule: interval must be >= 1");
  if (!(rho_cap > 0.0) || rho0 > rho_cap) {
    throw std::invalid_argument("schedule: need 0 < rho0 <= rho_cap");
  }
  if (max_outer_iters < 1) {
    throw std::invalid_argument("schedule: max_outer_iters must be >= 1");
  }
}

std::string to_string(SolveStatus status) {
  return status == SolveStatus::Converged ? "converged" : "iteration-limit";
}

void write_trace_jsonl(std::ostream& out, const SolveTrace& trace) {
  for (const TraceRecord& rec : trace.records) {
    nlohmann::ordered_json line;
    line["iter"] = rec.iter;
    line["rho"] = rec.rho;
    line["loss"] = rec.loss;
    line["penalty"] = rec.penalty;
    line["penalized"] = rec.penalized;
    line["dist"] = rec.dist;
    line["seconds"] = rec.seconds;
    out << line.dump() << '\n';
  }
}

VectorXd nesterov_step(const VectorXd& x_k, const VectorXd& x_prev, int k,
                       int d) {
  if (k < 1) throw std::invalid_argument("nesterov_step: k must be >= 1");
  if (d < 3) throw std::invalid_argument("nesterov_step: d must be >= 3");
  const double coeff = static_cast<double>(k - 1) / static_cast<double>(k + d - 1);
  return x_k + coeff * (x_k - x_prev);
}

namespace {

double default_penalty(const MmProblem& problem, const VectorXd& x) {
  if (problem.penalty) return problem.penalty(x);
  const double d = problem.distance(x);
  return 0.5 * d * d;
}

}  // namespace

MmResult run_mm(const MmProblem& problem, VectorXd x0,
                const PenaltySchedule& schedule,
                const ConvergenceCriteria& criteria,
                const SolveOptions& options) {
  schedule.validate();
  if (!problem.step || !problem.loss || !problem.distance) {
    throw std::invalid_argument("run_mm: step, loss, and distance are required");
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  MmResult result;
  result.x = std::move(x0);
  result.trace.status = SolveStatus::IterationLimit;

  AccelerationState accel;
  accel.previous = result.x;
  accel.k = 1;
  accel.offset = options.nesterov_offset;
  accel.enabled = options.accelerate;

  double rho = schedule.rho0;
  double loss_prev = std::numeric_limits<double>::quiet_NaN();

  for (int iter = 1; iter <= schedule.max_outer_iters; ++iter) {
    if (iter > 1 && (iter - 1) % schedule.interval == 0) {
      const double bumped = std::min(rho * schedule.multiplier,
                                     schedule.rho_cap);
      if (bumped != rho) {
        rho = bumped;
        accel.k = 1;  // momentum restarts with each subproblem
        accel.previous = result.x;
      }
    }

    VectorXd z = (accel.enabled && accel.k >= 2)
                     ? nesterov_step(result.x, accel.previous, accel.k,
                                     accel.offset)
                     : result.x;
    VectorXd next = problem.step(z, rho);
    if (!next.allFinite()) {
      throw DivergedError("run_mm: iterate diverged (non-finite values) at "
                          "iteration " +
                              std::to_string(iter),
                          std::move(result.trace));
    }

    if (options.monotone_safeguard && accel.enabled && accel.k >= 2) {
      const double before =
          problem.loss(result.x) + rho * default_penalty(problem, result.x);
      const double after =
          problem.loss(next) + rho * default_penalty(problem, next);
      if (after > before) {
        next = problem.step(result.x, rho);
        if (!next.allFinite()) {
          throw DivergedError(
              "run_mm: safeguarded iterate diverged at iteration " +
                  std::to_string(iter),
              std::move(result.trace));
        }
      }
    }

    const double loss = problem.loss(next);
    const double dist = problem.distance(next);
    const double penalty = default_penalty(problem, next);

    TraceRecord rec;
    rec.iter = iter;
    rec.rho = rho;
    rec.loss = loss;
    rec.penalty = penalty;
    rec.penalized = loss + rho * penalty;
    rec.dist = dist;
    rec.seconds = elapsed();
    result.trace.records.push_back(rec);

    accel.previous = result.x;
    accel.k += 1;
    result.x = std::move(next);

    // The eps1 test compares consecutive post-step losses, so it first
    // applies on the second iteration.
    const bool loss_settled =
        std::isfinite(loss_prev) &&
        std::abs(loss - loss_prev) <= criteria.eps1 * (std::abs(loss_prev) + 1.0);
    loss_prev = loss;
    if (loss_settled && dist <= criteria.eps2) {
      result.trace.status = SolveStatus::Converged;
      break;
    }
  }
  return result;
}

VectorXd lipschitz_gradient_step(
    const VectorXd& x, const std::function<VectorXd(const VectorXd&)>& grad_f,
    double lipschitz, const std::function<VectorXd(const VectorXd&)>& grad_q,
    double rho) {
  if (!(lipschitz > 0.0)) {
    throw std::invalid_argument("lipschitz_gradient_step: L must be > 0");
  }
  return x - (grad_f(x) + rho * grad_q(x)) / (lipschitz + rho);
}

double penalty_value(const VectorXd& x,
                     std::span<const ProjectionOperator> projections) {
  if (projections.empty()) {
    throw std::invalid_argument("penalty_value: need at least one set");
  }
  double total = 0.0;
  for (const ProjectionOperator& op : projections) {
    const double d = op(x).distance;
    total += 0.5 * d * d;
  }
  return total / static_cast<double>(projections.size());
}

VectorXd averaged_projection(const VectorXd& x,
                             std::span<const ProjectionOperator> projections) {
  if (projections.empty()) {
    throw std::invalid_argument("averaged_projection: need at least one set");
  }
  VectorXd sum = VectorXd::Zero(x.size());
  for (const ProjectionOperator& op : projections) {
    sum += op.project(x);
  }
  return sum / static_cast<double>(projections.size());
}

}  // namespace proxdist::engine
