#pragma once

#include <functional>

#include <Eigen/Core>

#include "proxdist/problems.hpp"

namespace proxdist::oracles {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Dykstra's alternating scheme for projecting onto the intersection of the
// positive semidefinite cone with the kinship structure set. Independent of
// the penalized iteration, so it can vouch for it.
struct DykstraResult {
  MatrixXd X;
  int iterations = 0;
  bool converged = false;
};

DykstraResult dykstra_project(const MatrixXd& y, int max_iters = 100000,
                              double tol = 1e-10);

// Exhaustive vertex enumeration for min v'x subject to Ax = b, x >= 0.
// Cost grows as C(n, m); callers keep the dimensions small.
struct LpVertexResult {
  VectorXd x;
  double optimum = 0.0;
  bool feasible = false;
};

LpVertexResult lp_vertex_oracle(const problems::LpProblem& inst);

// Exhaustive active-set search for min 0.5 x'Ax + b'x subject to x >= 0.
// A positive definite makes the KKT point the unique global optimum.
struct NqpActiveSetResult {
  VectorXd x;
  double optimum = 0.0;
  bool found = false;
};

NqpActiveSetResult nqp_activeset_oracle(const problems::NqpProblem& inst);

// Exhaustive support enumeration for y = Ax + b, x >= 0, y >= 0, x'y = 0.
struct LcpEnumerationResult {
  VectorXd x;
  VectorXd y;
  bool solved = false;
  int solutions = 0;
};

LcpEnumerationResult lcp_enumeration_oracle(const problems::LcpProblem& inst);

// Grid scan of x'Mx over unit vectors in the nonnegative orthant, built from
// integer compositions of round(1/step). A brute-force reference for the
// copositivity index in low dimensions.
struct CopositivityGridResult {
  VectorXd x;
  double minimum = 0.0;
  long points = 0;
};

CopositivityGridResult copositivity_grid_oracle(const MatrixXd& m,
                                                double step = 0.05);

// Verifies a candidate projection by sampling feasible points: the candidate
// must sit at least as close to the query as every sample drawn.
struct SamplingCheck {
  bool optimal = false;
  double candidate_distance = 0.0;
  double best_sample_distance = 0.0;
};

SamplingCheck projection_sampling_oracle(
    const VectorXd& query, const VectorXd& candidate,
    const std::function<VectorXd()>& sample_feasible, int samples = 1000,
    double slack = 1e-9);

}  // namespace proxdist::oracles
