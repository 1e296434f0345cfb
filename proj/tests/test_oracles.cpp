#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "proxdist/oracles.hpp"
#include "proxdist/problems.hpp"
#include "proxdist/projections.hpp"
#include "proxdist/rng.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace proxdist;
using namespace proxdist::oracles;

TEST_SUITE("oracles") {

TEST_CASE("dykstra returns a valid kinship matrix unchanged") {
  MatrixXd y(2, 2);
  y << 0.5, 0.2, 0.2, 0.5;  // PSD with unit-half diagonal and nonneg entries
  const DykstraResult r = dykstra_project(y);
  CHECK(r.converged);
  CHECK((r.X - y).norm() <= 1e-8);
}

TEST_CASE("dykstra clips the 2x2 negative off-diagonal case") {
  MatrixXd y(2, 2);
  y << 0.5, -0.2, -0.2, 0.5;
  const DykstraResult r = dykstra_project(y);
  CHECK(r.converged);
  CHECK(r.X(0, 0) == doctest::Approx(0.5));
  CHECK(r.X(1, 1) == doctest::Approx(0.5));
  CHECK(std::abs(r.X(0, 1)) <= 1e-8);
  CHECK(std::abs(r.X(1, 0)) <= 1e-8);
}

TEST_CASE("dykstra lands in both constraint sets") {
  const problems::KinshipProblem p = problems::make_kinship(8, 5);
  const DykstraResult r = dykstra_project(p.Y);
  CHECK(r.converged);
  CHECK(projections::in_psd(r.X, 1e-7));
  CHECK(projections::in_kinship_structure(r.X, 1e-7));
}

TEST_CASE("vertex oracle solves the forced-sum program") {
  problems::LpProblem p;
  p.A = problems::MatrixData(MatrixXd::Ones(1, 2));
  p.b = VectorXd::Ones(1);
  p.v = VectorXd::Ones(2);
  const LpVertexResult r = lp_vertex_oracle(p);
  REQUIRE(r.feasible);
  CHECK(r.optimum == doctest::Approx(1.0));
  // the winning vertex is (1,0) or (0,1)
  CHECK(r.x.maxCoeff() == doctest::Approx(1.0));
  CHECK(r.x.minCoeff() == doctest::Approx(0.0));
}

TEST_CASE("vertex oracle with zero right-hand side stays at the origin") {
  problems::LpProblem p = problems::make_lp(3, 6, 19);
  p.b.setZero();
  const LpVertexResult r = lp_vertex_oracle(p);
  REQUIRE(r.feasible);
  CHECK(r.optimum <= 1e-9);
}

TEST_CASE("vertex oracle finds an optimum on seeded instances") {
  const problems::LpProblem p = problems::make_lp(4, 8, 1);
  const LpVertexResult r = lp_vertex_oracle(p);
  REQUIRE(r.feasible);
  CHECK(std::isfinite(r.optimum));
  CHECK((p.A.to_dense() * r.x - p.b).norm() <= 1e-8 * (1.0 + p.b.norm()));
  CHECK(r.x.minCoeff() >= -1e-9);
}

TEST_CASE("active-set oracle separates a diagonal program") {
  problems::NqpProblem p;
  p.A = problems::MatrixData(MatrixXd::Identity(2, 2));
  VectorXd b(2);
  b << -1.0, 1.0;
  p.b = b;
  const NqpActiveSetResult r = nqp_activeset_oracle(p);
  REQUIRE(r.found);
  CHECK(r.x(0) == doctest::Approx(1.0));
  CHECK(r.x(1) == doctest::Approx(0.0));
  CHECK(r.optimum == doctest::Approx(-0.5));
}

TEST_CASE("active-set oracle returns the origin when b is nonnegative") {
  problems::NqpProblem p = problems::make_nqp(5, 23);
  p.b = p.b.cwiseAbs();
  const NqpActiveSetResult r = nqp_activeset_oracle(p);
  REQUIRE(r.found);
  CHECK(r.x.norm() == 0.0);
  CHECK(r.optimum == doctest::Approx(0.0));
}

TEST_CASE("active-set oracle satisfies its own KKT conditions") {
  const problems::NqpProblem p = problems::make_nqp(8, 29);
  const NqpActiveSetResult r = nqp_activeset_oracle(p);
  REQUIRE(r.found);
  const VectorXd grad = p.A.to_dense() * r.x + p.b;
  CHECK(r.x.minCoeff() >= -1e-10);
  CHECK(grad.minCoeff() >= -1e-9);
  CHECK(std::abs(r.x.dot(grad)) <= 1e-8);
}

TEST_CASE("lcp enumeration takes the trivial branch when b is nonnegative") {
  problems::LcpProblem p;
  p.A = MatrixXd::Identity(3, 3);
  p.b = VectorXd::Ones(3);
  const LcpEnumerationResult r = lcp_enumeration_oracle(p);
  REQUIRE(r.solved);
  CHECK(r.x.norm() == 0.0);
  CHECK((r.y - p.b).norm() == 0.0);
}

TEST_CASE("lcp enumeration solves the 1-d pivot case") {
  problems::LcpProblem p;
  p.A = MatrixXd::Ones(1, 1);
  p.b = -VectorXd::Ones(1);
  const LcpEnumerationResult r = lcp_enumeration_oracle(p);
  REQUIRE(r.solved);
  CHECK(r.x(0) == doctest::Approx(1.0));
  CHECK(r.y(0) == doctest::Approx(0.0));
}

TEST_CASE("lcp enumeration certifies generated instances") {
  const problems::LcpProblem p = problems::make_lcp(8, 3);
  const LcpEnumerationResult r = lcp_enumeration_oracle(p);
  REQUIRE(r.solved);
  CHECK(r.x.minCoeff() >= -1e-9);
  CHECK(r.y.minCoeff() >= -1e-9);
  CHECK((r.y - (p.A * r.x + p.b)).norm() <= 1e-8);
  CHECK(std::abs(r.x.dot(r.y)) <= 1e-7);
}

TEST_CASE("grid oracle scores the identity at one") {
  const CopositivityGridResult r = copositivity_grid_oracle(MatrixXd::Identity(4, 4));
  CHECK(r.minimum == doctest::Approx(1.0));  // every feasible point scores 1
  CHECK(r.points > 0);
  CHECK(std::abs(r.x.norm() - 1.0) <= 1e-12);
  CHECK(r.x.minCoeff() >= 0.0);
}

TEST_CASE("grid oracle finds the horn matrix boundary") {
  const problems::CopositivityProblem horn = problems::make_horn();
  const CopositivityGridResult r = copositivity_grid_oracle(horn.M, 0.05);
  CHECK(r.minimum <= 1e-3);
  CHECK(r.minimum >= -1e-9);  // horn is copositive
}

TEST_CASE("grid oracle scores the negated identity at minus one") {
  const CopositivityGridResult r =
      copositivity_grid_oracle(-MatrixXd::Identity(3, 3));
  CHECK(r.minimum == doctest::Approx(-1.0));
}

TEST_CASE("grid oracle rejects oversized and malformed inputs") {
  CHECK_THROWS(copositivity_grid_oracle(MatrixXd::Identity(7, 7)));
  CHECK_THROWS(copositivity_grid_oracle(MatrixXd::Ones(2, 3)));
  CHECK_THROWS(copositivity_grid_oracle(MatrixXd::Identity(3, 3), 0.0));
}

TEST_CASE("sampling oracle accepts the orthant projection") {
  Rng rng(31);
  VectorXd x(2);
  x << -1.0, 2.0;
  VectorXd candidate(2);
  candidate << 0.0, 2.0;
  const SamplingCheck check = projection_sampling_oracle(
      x, candidate,
      [&rng]() {
        VectorXd c(2);
        c << std::abs(rng.normal()), std::abs(rng.normal());
        return c;
      },
      1000);
  CHECK(check.optimal);
  CHECK(check.candidate_distance == doctest::Approx(1.0));
}

TEST_CASE("sampling oracle rejects a clearly suboptimal candidate") {
  Rng rng(37);
  VectorXd x(2);
  x << -1.0, 2.0;
  VectorXd candidate(2);
  candidate << 5.0, 5.0;
  const SamplingCheck check = projection_sampling_oracle(
      x, candidate,
      [&rng]() {
        VectorXd c(2);
        c << std::abs(rng.normal()), std::abs(rng.normal());
        return c;
      },
      1000);
  CHECK(!check.optimal);
}

}  // TEST_SUITE
