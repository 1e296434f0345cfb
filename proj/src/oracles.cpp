#include "proxdist/oracles.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "proxdist/projections.hpp"

namespace proxdist::oracles {

using projections::project_kinship_structure;
using projections::project_psd;

DykstraResult dykstra_project(const MatrixXd& y, int max_iters, double tol) {
  if (y.rows() != y.cols()) {
    throw std::invalid_argument("dykstra_project: matrix must be square");
  }
  if (max_iters < 1) {
    throw std::invalid_argument("dykstra_project: max_iters must be >= 1");
  }
  MatrixXd x = 0.5 * (y + y.transpose());
  MatrixXd p = MatrixXd::Zero(x.rows(), x.cols());
  MatrixXd q = p;
  DykstraResult out;
  for (int iter = 1; iter <= max_iters; ++iter) {
    const MatrixXd s = project_psd(x + p);
    p = x + p - s;
    const MatrixXd x_next = project_kinship_structure(s + q);
    q = s + q - x_next;
    const double shift = (x_next - x).norm();
    x = x_next;
    out.iterations = iter;
    if (shift <= tol) {
      out.converged = true;
      break;
    }
  }
  out.X = std::move(x);
  return out;
}

LpVertexResult lp_vertex_oracle(const problems::LpProblem& inst) {
  inst.validate();
  const MatrixXd a = inst.A.to_dense();
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (m > n) {
    throw std::invalid_argument("lp_vertex_oracle: need at least as many columns as rows");
  }

  std::vector<Eigen::Index> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  LpVertexResult out;
  MatrixXd basis(m, m);
  while (true) {
    for (Eigen::Index j = 0; j < m; ++j) basis.col(j) = a.col(idx[j]);
    Eigen::FullPivLU<MatrixXd> lu(basis);
    if (lu.isInvertible()) {
      const VectorXd xb = lu.solve(inst.b);
      if ((xb.array() >= -1e-9).all()) {
        double objective = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) objective += inst.v(idx[j]) * xb(j);
        if (!out.feasible || objective < out.optimum) {
          out.feasible = true;
          out.optimum = objective;
          out.x = VectorXd::Zero(n);
          for (Eigen::Index j = 0; j < m; ++j) out.x(idx[j]) = std::max(xb(j), 0.0);
        }
      }
    }
    // next m-combination in lexicographic order
    Eigen::Index i = m - 1;
    while (i >= 0 && idx[i] == n - m + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (Eigen::Index j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

NqpActiveSetResult nqp_activeset_oracle(const problems::NqpProblem& inst) {
  inst.validate();
  const MatrixXd a = inst.A.to_dense();
  const Eigen::Index n = a.rows();
  if (n > 20) {
    throw std::invalid_argument("nqp_activeset_oracle: dimension too large for exhaustive search");
  }

  NqpActiveSetResult out;
  std::vector<Eigen::Index> free;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    free.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) free.push_back(i);
    }
    VectorXd x = VectorXd::Zero(n);
    if (!free.empty()) {
      const Eigen::Index k = static_cast<Eigen::Index>(free.size());
      MatrixXd aff(k, k);
      VectorXd bf(k);
      for (Eigen::Index r = 0; r < k; ++r) {
        bf(r) = inst.b(free[r]);
        for (Eigen::Index c = 0; c < k; ++c) aff(r, c) = a(free[r], free[c]);
      }
      Eigen::LLT<MatrixXd> llt(aff);  // principal submatrix of a PD matrix
      if (llt.info() != Eigen::Success) continue;
      const VectorXd xf = llt.solve(-bf);
      if ((xf.array() < -1e-10).any()) continue;
      for (Eigen::Index r = 0; r < k; ++r) x(free[r]) = std::max(xf(r), 0.0);
    }
    const VectorXd grad = a * x + inst.b;
    bool dual_ok = true;
    for (Eigen::Index i = 0; i < n && dual_ok; ++i) {
      if (!((mask >> i) & 1u) && grad(i) < -1e-10) dual_ok = false;
    }
    if (!dual_ok) continue;
    const double objective = 0.5 * x.dot(a * x) + inst.b.dot(x);
    if (!out.found || objective < out.optimum) {
      out.found = true;
      out.optimum = objective;
      out.x = x;
    }
  }
  return out;
}

LcpEnumerationResult lcp_enumeration_oracle(const problems::LcpProblem& inst) {
  inst.validate();
  const Eigen::Index n = inst.A.rows();
  if (n > 20) {
    throw std::invalid_argument("lcp_enumeration_oracle: dimension too large for exhaustive search");
  }

  LcpEnumerationResult out;
  std::vector<Eigen::Index> support;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    support.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) support.push_back(i);
    }
    VectorXd x = VectorXd::Zero(n);
    if (!support.empty()) {
      const Eigen::Index k = static_cast<Eigen::Index>(support.size());
      MatrixXd ass(k, k);
      VectorXd bs(k);
      for (Eigen::Index r = 0; r < k; ++r) {
        bs(r) = inst.b(support[r]);
        for (Eigen::Index c = 0; c < k; ++c) {
          ass(r, c) = inst.A(support[r], support[c]);
        }
      }
      Eigen::FullPivLU<MatrixXd> lu(ass);
      if (!lu.isInvertible()) continue;
      const VectorXd xs = lu.solve(-bs);
      if ((xs.array() < -1e-9).any()) continue;
      for (Eigen::Index r = 0; r < k; ++r) x(support[r]) = std::max(xs(r), 0.0);
    }
    const VectorXd y = inst.A * x + inst.b;
    bool feasible = true;
    for (Eigen::Index i = 0; i < n && feasible; ++i) {
      if (!((mask >> i) & 1u) && y(i) < -1e-9) feasible = false;
    }
    if (!feasible) continue;
    out.solutions += 1;
    if (!out.solved) {
      out.solved = true;
      out.x = x;
      out.y = y.cwiseMax(0.0);
    }
  }
  return out;
}

CopositivityGridResult copositivity_grid_oracle(const MatrixXd& m,
                                                double step) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("copositivity_grid_oracle: matrix must be square");
  }
  const Eigen::Index n = m.rows();
  if (n < 1 || n > 6) {
    throw std::invalid_argument("copositivity_grid_oracle: dimension must be in [1, 6]");
  }
  if (!(step > 0.0 && step <= 1.0)) {
    throw std::invalid_argument("copositivity_grid_oracle: step must lie in (0, 1]");
  }
  const int k = std::max(1, static_cast<int>(std::lround(1.0 / step)));

  CopositivityGridResult out;
  out.minimum = std::numeric_limits<double>::infinity();
  VectorXd c = VectorXd::Zero(n);
  // walk every integer composition of k into n nonnegative parts
  auto visit = [&](auto&& self, Eigen::Index coord, int remaining) -> void {
    if (coord == n - 1) {
      c(coord) = remaining;
      const VectorXd x = c / c.norm();
      const double value = x.dot(m * x);
      out.points += 1;
      if (value < out.minimum) {
        out.minimum = value;
        out.x = x;
      }
      return;
    }
    for (int take = 0; take <= remaining; ++take) {
      c(coord) = take;
      self(self, coord + 1, remaining - take);
    }
  };
  visit(visit, 0, k);
  return out;
}

SamplingCheck projection_sampling_oracle(
    const VectorXd& query, const VectorXd& candidate,
    const std::function<VectorXd()>& sample_feasible, int samples,
    double slack) {
  if (samples < 1) {
    throw std::invalid_argument("projection_sampling_oracle: samples must be >= 1");
  }
  SamplingCheck out;
  out.candidate_distance = (query - candidate).norm();
  out.best_sample_distance = std::numeric_limits<double>::infinity();
  for (int t = 0; t < samples; ++t) {
    const VectorXd s = sample_feasible();
    out.best_sample_distance =
        std::min(out.best_sample_distance, (query - s).norm());
  }
  out.optimal = out.candidate_distance <= out.best_sample_distance + slack;
  return out;
}

}  // namespace proxdist::oracles
