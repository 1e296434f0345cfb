#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "proxdist/linalg.hpp"
#include "proxdist/oracles.hpp"
#include "proxdist/problems.hpp"
#include "proxdist/projections.hpp"
#include "proxdist/rng.hpp"
#include "proxdist/solvers.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace proxdist;
using namespace proxdist::solvers;

namespace {

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::abs(b));
}

engine::SolveOptions with_strategy(engine::Strategy s) {
  engine::SolveOptions o;
  o.strategy = s;
  return o;
}

}  // namespace

TEST_SUITE("solvers") {

TEST_CASE("lp solves the forced-sum program") {
  problems::LpProblem p;
  p.A = problems::MatrixData(MatrixXd::Ones(1, 2));
  p.b = VectorXd::Ones(1);
  p.v = VectorXd::Ones(2);
  const SolveResult r = solve_lp(p, lp_schedule(false));
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(r.loss == doctest::Approx(1.0).epsilon(1e-6));
  CHECK((p.A.to_dense() * r.x - p.b).norm() <= 1e-10);
  CHECK(r.x.minCoeff() >= -1e-4);
}

TEST_CASE("lp with zero cost settles on a feasible point") {
  problems::LpProblem p = problems::make_lp(3, 6, 47);
  p.v.setZero();
  const SolveResult r = solve_lp(p, lp_schedule(false));
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(std::abs(r.loss) <= 1e-12);
  CHECK((p.A.to_dense() * r.x - p.b).norm() <= 1e-8 * (1.0 + p.b.norm()));
  CHECK(r.x.minCoeff() >= -1e-4);
}

TEST_CASE("lp matches the vertex oracle to four digits") {
  const problems::LpProblem p = problems::make_lp(4, 8, 11);
  const oracles::LpVertexResult vertex = oracles::lp_vertex_oracle(p);
  REQUIRE(vertex.feasible);
  const SolveResult r = solve_lp(p, lp_schedule(false));
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(close_rel(r.loss, vertex.optimum, 1e-4));
  CHECK((p.A.to_dense() * r.x - p.b).norm() <= 1e-8 * (1.0 + p.b.norm()));
  CHECK(r.x.minCoeff() >= -2e-4);
}

TEST_CASE("lp rejects rank-deficient constraint rows") {
  problems::LpProblem p;
  MatrixXd a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0;
  p.A = problems::MatrixData(a);
  p.b = VectorXd::Ones(2);
  p.v = VectorXd::Ones(2);
  CHECK_THROWS_AS(solve_lp(p, lp_schedule(false)), linalg::SingularSystemError);
}

TEST_CASE("lp iterative route agrees with the direct route") {
  const problems::LpProblem p = problems::make_lp(4, 8, 5);
  const SolveResult dense =
      solve_lp(p, lp_schedule(false), {}, with_strategy(engine::Strategy::Dense));
  const SolveResult sparse =
      solve_lp(p, lp_schedule(false), {}, with_strategy(engine::Strategy::Sparse));
  CHECK(dense.status == engine::SolveStatus::Converged);
  CHECK(sparse.status == engine::SolveStatus::Converged);
  CHECK(close_rel(sparse.loss, dense.loss, 1e-6));
}

TEST_CASE("lp handles sparse-stored instances") {
  const problems::LpProblem p = problems::make_lp(10, 40, 7, true, 0.05);
  REQUIRE(p.A.is_sparse());
  const SolveResult r = solve_lp(p, lp_schedule(true));
  CHECK(r.status == engine::SolveStatus::Converged);
  const VectorXd residual = p.A.apply(r.x) - p.b;
  CHECK(residual.norm() <= 1e-6 * (1.0 + p.b.norm()));
  CHECK(r.x.minCoeff() >= -2e-4);
}

TEST_CASE("nqp separates a diagonal program") {
  problems::NqpProblem p;
  p.A = problems::MatrixData(MatrixXd::Identity(2, 2));
  VectorXd b(2);
  b << -1.0, 1.0;
  p.b = b;
  const SolveResult r = solve_nqp(p, nqp_schedule(false));
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(r.loss == doctest::Approx(-0.5).epsilon(5e-4));
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(r.x(1)) <= 1.001e-4);  // the distance tolerance
  CHECK(nqp_kkt_residual(p, r.x) <= 1e-3);

  // a tighter distance tolerance sharpens the solution accordingly
  const SolveResult tight =
      solve_nqp(p, nqp_schedule(false), ConvergenceCriteria{1e-10, 1e-6});
  CHECK(tight.status == engine::SolveStatus::Converged);
  CHECK(tight.loss == doctest::Approx(-0.5).epsilon(1e-5));
  CHECK(std::abs(tight.x(1)) <= 2e-6);
}

TEST_CASE("nqp stays at the origin for nonnegative costs") {
  problems::NqpProblem p = problems::make_nqp(6, 3);
  p.b = p.b.cwiseAbs();
  const SolveResult r = solve_nqp(p, nqp_schedule(false));
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(std::abs(r.loss) <= 1e-3);
  CHECK(r.x.norm() <= 1e-3);
}

TEST_CASE("nqp matches the active-set oracle") {
  const problems::NqpProblem p = problems::make_nqp(12, 17);
  const oracles::NqpActiveSetResult best = oracles::nqp_activeset_oracle(p);
  REQUIRE(best.found);
  const SolveResult r = solve_nqp(p, nqp_schedule(false));
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(close_rel(r.loss, best.optimum, 1e-3));
  CHECK(nqp_kkt_residual(p, r.x) <= 1e-3);
}

TEST_CASE("nqp rejects indefinite matrices") {
  problems::NqpProblem p;
  MatrixXd a(2, 2);
  a << 1.0, 0.0, 0.0, -1.0;
  p.A = problems::MatrixData(a);
  p.b = VectorXd::Zero(2);
  CHECK_THROWS_AS(solve_nqp(p, nqp_schedule(false)), std::invalid_argument);
}

TEST_CASE("kinship projection fixes points already in the set") {
  problems::KinshipProblem p;
  MatrixXd y(2, 2);
  y << 0.5, 0.2, 0.2, 0.5;
  p.Y = y;
  const SolveResult r = project_kinship(p, kinship_schedule(KinshipVariant::PD3));
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(r.loss <= 1e-8);
  CHECK((r.X - y).norm() <= 1e-3);
}

TEST_CASE("kinship projection clips a negative off-diagonal pair") {
  problems::KinshipProblem p;
  MatrixXd y(2, 2);
  y << 0.5, -0.2, -0.2, 0.5;
  p.Y = y;
  const SolveResult r = project_kinship(p, kinship_schedule(KinshipVariant::PD3));
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(r.loss == doctest::Approx(0.04).epsilon(1e-4));
  CHECK(r.X(0, 0) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(r.X(1, 1) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(std::abs(r.X(0, 1)) <= 1e-4);
}

TEST_CASE("kinship projection tracks the alternating-projection oracle") {
  const problems::KinshipProblem p = problems::make_kinship(16, 21);
  const oracles::DykstraResult ref = oracles::dykstra_project(p.Y);
  REQUIRE(ref.converged);
  const double ref_loss = 0.5 * (ref.X - p.Y).squaredNorm();
  const SolveResult r = project_kinship(p, kinship_schedule(KinshipVariant::PD3));
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(std::abs(r.loss - ref_loss) <= 1e-3 * (1.0 + ref_loss));
  // result lies (nearly) in both constraint sets
  CHECK(linalg::sym_eig(r.X).eigenvalues(0) >= -1e-8);
  CHECK((r.X.diagonal().array() - 0.5).abs().maxCoeff() <= 2e-4);
  CHECK(r.X.minCoeff() >= -2e-4);
}

TEST_CASE("kinship variants land on the same projection") {
  const problems::KinshipProblem p = problems::make_kinship(8, 9);
  const SolveResult pd1 = project_kinship(p, kinship_schedule(KinshipVariant::PD1),
                                          {}, {}, KinshipVariant::PD1);
  const SolveResult pd2 = project_kinship(p, kinship_schedule(KinshipVariant::PD2),
                                          {}, {}, KinshipVariant::PD2);
  const SolveResult pd3 = project_kinship(p, kinship_schedule(KinshipVariant::PD3),
                                          {}, {}, KinshipVariant::PD3);
  CHECK(pd1.status == engine::SolveStatus::Converged);
  CHECK(pd2.status == engine::SolveStatus::Converged);
  CHECK(pd3.status == engine::SolveStatus::Converged);
  CHECK(close_rel(pd1.loss, pd3.loss, 1e-2));
  CHECK(close_rel(pd2.loss, pd3.loss, 1e-2));
}

TEST_CASE("soc projection returns feasible points unchanged") {
  problems::SocProblem p = problems::make_soc(4, 8, 35);
  // widen the cone so the query point itself is strictly feasible
  p.d = (p.A.to_dense() * p.x + p.b).norm() - p.c.dot(p.x) + 1.0;
  const SolveResult r = solve_soc_projection(p, soc_schedule(false));
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(r.loss <= 1e-8);
  CHECK((r.x - p.x).norm() <= 1e-4);
}

TEST_CASE("soc projection clamps the scalar interval case") {
  problems::SocProblem p;
  p.A = problems::MatrixData(MatrixXd::Identity(1, 1));
  p.b = VectorXd::Zero(1);
  p.c = VectorXd::Zero(1);
  p.d = 1.0;  // constraint |u| <= 1
  p.x = 3.0 * VectorXd::Ones(1);
  const SolveResult r = solve_soc_projection(p, soc_schedule(false));
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(r.loss == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("soc projection agrees with a high-accuracy reference") {
  const problems::SocProblem p = problems::make_soc(8, 16, 13);
  const SolveResult r = solve_soc_projection(p, soc_schedule(false));
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(r.dist <= 1e-4);

  PenaltySchedule tight = soc_schedule(false);
  tight.rho_cap = 1e8;
  tight.max_outer_iters = 100000;
  const SolveResult ref =
      solve_soc_projection(p, tight, ConvergenceCriteria{1e-14, 1e-6});
  CHECK(close_rel(r.loss, ref.loss, 1e-3));
}

TEST_CASE("copositivity scores the identity at one") {
  problems::CopositivityProblem p;
  p.M = MatrixXd::Identity(4, 4);
  const SolveResult r = copositivity_index(p, copositivity_schedule());
  CHECK(r.loss == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(r.x.norm() - 1.0) <= 1e-8);
  CHECK(r.x.minCoeff() >= -1e-12);
}

TEST_CASE("copositivity certifies the horn matrix") {
  const problems::CopositivityProblem horn = problems::make_horn();
  const SolveResult r = copositivity_index(horn, copositivity_schedule());
  CHECK(std::abs(r.loss) <= 1e-5);
  CHECK(std::abs(r.x.norm() - 1.0) <= 1e-8);
  CHECK(r.x.minCoeff() >= -1e-12);

  // the minimizers are cyclic shifts of two support patterns
  VectorXd sorted = r.x;
  std::sort(sorted.data(), sorted.data() + sorted.size(),
            std::greater<double>());
  VectorXd pair(5), triple(5);
  pair << 1.0, 1.0, 0.0, 0.0, 0.0;
  pair /= std::sqrt(2.0);
  triple << 2.0, 1.0, 1.0, 0.0, 0.0;
  triple /= std::sqrt(6.0);
  const double gap =
      std::min((sorted - pair).norm(), (sorted - triple).norm());
  CHECK(gap <= 0.05);
}

TEST_CASE("copositivity matches the simplex grid search") {
  // the grid is coarse and the solver stops at finite tolerance, so the two
  // estimates agree to grid resolution without either dominating
  for (std::uint64_t seed : {2ull, 9ull, 14ull}) {
    CAPTURE(seed);
    const problems::CopositivityProblem p = problems::make_copositivity(6, seed);
    const SolveResult r = copositivity_index(p, copositivity_schedule(),
                                             ConvergenceCriteria{1e-9, 1e-6});
    const oracles::CopositivityGridResult grid =
        oracles::copositivity_grid_oracle(p.M, 0.02);
    CHECK(std::abs(r.loss - grid.minimum) <=
          5e-3 * (1.0 + std::abs(grid.minimum)));
    CHECK(r.loss <= p.M.diagonal().minCoeff() + 1e-8);
  }
}

TEST_CASE("copositivity rejects a nonpositive restart count") {
  problems::CopositivityProblem p;
  p.M = MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(copositivity_index(p, copositivity_schedule(), {}, {}, 0),
                  std::invalid_argument);
}

TEST_CASE("lcp takes the trivial branch when b is nonnegative") {
  problems::LcpProblem p;
  p.A = MatrixXd::Identity(3, 3);
  VectorXd b(3);
  b << 1.0, 2.0, 3.0;
  p.b = b;
  const SolveResult r = solve_lcp(p, lcp_schedule());
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(r.loss <= 1e-8);
  CHECK(r.x.norm() <= 1e-4);
  CHECK((r.y - b).norm() <= 1e-3);
}

TEST_CASE("lcp pivots the scalar case") {
  problems::LcpProblem p;
  p.A = MatrixXd::Ones(1, 1);
  p.b = -VectorXd::Ones(1);
  const SolveResult r = solve_lcp(p, lcp_schedule());
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(r.y(0)) <= 1e-3);
  CHECK(r.loss <= 1e-8);
}

TEST_CASE("lcp solves generated instances to complementarity") {
  for (std::uint64_t seed : {1ull, 5ull, 9ull}) {
    CAPTURE(seed);
    const problems::LcpProblem p = problems::make_lcp(8, seed);
    const SolveResult r =
        solve_lcp(p, lcp_schedule(), ConvergenceCriteria{1e-10, 1e-6}, {}, 10);
    CHECK(r.status == engine::SolveStatus::Converged);
    CHECK(r.loss <= 1e-10);
    CHECK(std::abs(r.x.dot(r.y)) <= 1e-8);
    CHECK(r.x.minCoeff() >= -1e-9);
    CHECK(r.y.minCoeff() >= -1e-9);

    const oracles::LcpEnumerationResult ref = oracles::lcp_enumeration_oracle(p);
    REQUIRE(ref.solved);
    if (ref.solutions == 1) {
      CHECK((r.x - ref.x).norm() <= 1e-6 * (1.0 + ref.x.norm()));
    }
  }
}

TEST_CASE("spca with a full budget recovers the leading eigenvalues") {
  const problems::SpcaProblem p =
      problems::make_spca(60, 10, 2, 10, projections::SparsityMode::Column, 31);
  const SolveResult r = solve_spca(p, spca_schedule(),
                                   ConvergenceCriteria{1e-10, 1e-4});
  CHECK(r.status == engine::SolveStatus::Converged);
  const linalg::SymEig eig = linalg::sym_eig(p.covariance());
  const int pp = static_cast<int>(eig.eigenvalues.size());
  const double top2 = eig.eigenvalues(pp - 1) + eig.eigenvalues(pp - 2);
  CHECK(close_rel(-2.0 * r.loss, top2, 1e-4));
}

TEST_CASE("spca isolates dominant coordinates of a diagonal covariance") {
  problems::SpcaProblem p;
  VectorXd d(3);
  d << 4.0, 3.0, 1.0;
  p.S = MatrixXd(d.asDiagonal());
  p.q = 2;
  p.r = 1;
  p.mode = projections::SparsityMode::Column;
  const SolveResult r = solve_spca(p, spca_schedule(), {}, {}, true);
  CHECK(r.status == engine::SolveStatus::Converged);
  CHECK(r.loss == doctest::Approx(-3.5).epsilon(1e-6));
  // each loading column concentrates on one of the two top coordinates
  for (int j = 0; j < 2; ++j) {
    Eigen::Index top;
    r.X.col(j).cwiseAbs().maxCoeff(&top);
    CHECK(top == j);
    CHECK(std::abs(r.X(top, j)) == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("spca matrix budget explains at least the column budget") {
  problems::SpcaProblem col =
      problems::make_spca(80, 8, 2, 3, projections::SparsityMode::Column, 41);
  problems::SpcaProblem mat = col;
  mat.mode = projections::SparsityMode::Matrix;
  mat.r = col.r * col.q;
  const SolveResult rc = solve_spca(col, spca_schedule(), {}, {}, true);
  // the annealed run explores; chaining from the column solution guarantees
  // the pooled budget never loses to the per-column one
  const SolveResult annealed = solve_spca(mat, spca_schedule(), {}, {}, true);
  const SolveResult chained =
      solve_spca(mat, spca_schedule(), {}, {}, false, rc.X);
  const SolveResult& rm = annealed.loss <= chained.loss ? annealed : chained;
  const double pve_col = compute_pve(*col.X, rc.X);
  const double pve_mat = compute_pve(*mat.X, rm.X);
  CHECK(pve_mat >= pve_col - 1e-8);
}

TEST_CASE("pve reproduces variance ratios") {
  const problems::SpcaProblem p =
      problems::make_spca(50, 6, 2, 6, projections::SparsityMode::Column, 3);
  const MatrixXd& x = *p.X;

  CHECK(compute_pve(x, MatrixXd::Identity(6, 6)) == doctest::Approx(1.0));

  const linalg::ThinSvd svd = linalg::thin_svd(x);
  const MatrixXd top2 = svd.right.leftCols(2);
  const double expected = (svd.singular(0) * svd.singular(0) +
                           svd.singular(1) * svd.singular(1)) /
                          svd.singular.squaredNorm();
  CHECK(std::abs(compute_pve(x, top2) - expected) <= 1e-10);

  Rng rng(77);
  MatrixXd g(6, 3);
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
  const MatrixXd u = projections::project_stiefel(g).point;
  const double direct =
      (x * u * u.transpose()).squaredNorm() / x.squaredNorm();
  CHECK(std::abs(compute_pve(x, u) - direct) <= 1e-10);
}

TEST_CASE("pve rejects malformed inputs") {
  const problems::SpcaProblem p =
      problems::make_spca(20, 4, 1, 4, projections::SparsityMode::Column, 8);
  const MatrixXd& x = *p.X;
  CHECK_THROWS_AS(compute_pve(x, MatrixXd::Identity(5, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(compute_pve(MatrixXd::Zero(3, 4), MatrixXd::Identity(4, 2)),
                  std::invalid_argument);
  MatrixXd duplicated(4, 2);
  duplicated.col(0) = VectorXd::Ones(4);
  duplicated.col(1) = VectorXd::Ones(4);
  CHECK_THROWS_AS(compute_pve(x, duplicated), std::invalid_argument);
}

TEST_CASE("dispatch routes every instance kind") {
  std::vector<problems::ProblemInstance> instances;
  instances.push_back(problems::make_lp(3, 6, 1));
  instances.push_back(problems::make_nqp(6, 2));
  instances.push_back(problems::make_kinship(4, 3));
  instances.push_back(problems::make_soc(4, 8, 4));
  instances.push_back(problems::make_copositivity(4, 5));
  instances.push_back(problems::make_lcp(6, 6));
  instances.push_back(
      problems::make_spca(40, 6, 2, 3, projections::SparsityMode::Column, 7));

  for (const problems::ProblemInstance& inst : instances) {
    CAPTURE(problems::kind_of(inst));
    const SolveResult r = solve(inst);
    CHECK(r.status == engine::SolveStatus::Converged);
    CHECK(r.dist <= 1e-4 + 1e-12);  // converged implies the distance criterion
    CHECK(r.x.size() > 0);
  }
}

TEST_CASE("result json carries the solve summary") {
  problems::NqpProblem p;
  p.A = problems::MatrixData(MatrixXd::Identity(2, 2));
  VectorXd b(2);
  b << -1.0, 1.0;
  p.b = b;
  const SolveResult r = solve_nqp(p, nqp_schedule(false));
  const nlohmann::json out =
      nlohmann::json::parse(result_to_json_string("nqp", r, "trace.jsonl"));
  CHECK(out.at("kind") == "nqp");
  CHECK(out.at("status") == "converged");
  CHECK(out.at("loss").get<double>() == doctest::Approx(-0.5).epsilon(5e-4));
  CHECK(out.at("solution").size() == 2);
  CHECK(out.at("trace") == "trace.jsonl");
  CHECK(out.at("iters").get<int>() > 0);

  problems::LcpProblem lcp;
  lcp.A = MatrixXd::Identity(2, 2);
  lcp.b = VectorXd::Ones(2);
  const SolveResult rl = solve_lcp(lcp, lcp_schedule());
  const nlohmann::json lout =
      nlohmann::json::parse(result_to_json_string("lcp", rl));
  CHECK(lout.at("y").size() == 2);
  CHECK(!lout.contains("trace"));

  const problems::KinshipProblem kp = problems::make_kinship(3, 1);
  const SolveResult rk = project_kinship(kp, kinship_schedule(KinshipVariant::PD3));
  const nlohmann::json kout =
      nlohmann::json::parse(result_to_json_string("kinship", rk));
  CHECK(kout.at("matrix").size() == 3);
  CHECK(kout.at("matrix").at(0).size() == 3);
}

}  // TEST_SUITE
