#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <Eigen/Dense>

#include "proxdist/linalg.hpp"
#include "proxdist/oracles.hpp"
#include "proxdist/problems.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace proxdist;
using namespace proxdist::problems;

TEST_SUITE("problems") {

TEST_CASE("generators are bit-deterministic under a fixed seed") {
  const LpProblem a = make_lp(4, 8, 1);
  const LpProblem b = make_lp(4, 8, 1);
  CHECK(to_json_string(a, 1) == to_json_string(b, 1));
  const LpProblem c = make_lp(4, 8, 2);
  CHECK(to_json_string(a, 1) != to_json_string(c, 2));
}

TEST_CASE("nqp construction is symmetric positive definite") {
  const NqpProblem p = make_nqp(8, 7);
  const MatrixXd a = p.A.to_dense();
  CHECK((a - a.transpose()).norm() <= 1e-12);
  const linalg::SymEig eig = linalg::sym_eig(a);
  CHECK(eig.eigenvalues(0) > 0.0);
}

TEST_CASE("sparse nqp stays symmetric positive definite") {
  const NqpProblem p = make_nqp(40, 3, true);
  REQUIRE(p.A.is_sparse());
  const MatrixXd a = p.A.to_dense();
  CHECK((a - a.transpose()).norm() <= 1e-10);
  const linalg::SymEig eig = linalg::sym_eig(0.5 * (a + a.transpose()));
  CHECK(eig.eigenvalues(0) > 0.0);
}

TEST_CASE("lp generator produces a full-rank feasible program") {
  const LpProblem p = make_lp(3, 6, 5);
  p.validate();
  Eigen::FullPivLU<MatrixXd> lu(p.A.to_dense());
  CHECK(lu.rank() == 3);
  const auto vertex = oracles::lp_vertex_oracle(p);
  CHECK(vertex.feasible);  // b = A xhat with xhat >= 0 guarantees a vertex
}

TEST_CASE("sparse lp has no empty rows") {
  const LpProblem p = make_lp(20, 100, 11, true, 0.01);
  REQUIRE(p.A.is_sparse());
  const MatrixXd a = p.A.to_dense();
  for (int i = 0; i < a.rows(); ++i) {
    CHECK(a.row(i).cwiseAbs().maxCoeff() > 0.0);
  }
}

TEST_CASE("kinship generator symmetrizes its draw") {
  const KinshipProblem p = make_kinship(6, 9);
  CHECK((p.Y - p.Y.transpose()).norm() == 0.0);
}

TEST_CASE("soc generator admits a strictly feasible point") {
  const SocProblem p = make_soc(4, 8, 13);
  p.validate();
  // d was anchored so that |A u0 + b| < c'u0 + d for some u0; at least the
  // instance must not be trivially infeasible at large radius
  CHECK(p.d > -1e9);
}

TEST_CASE("horn pattern matches the classical matrix") {
  const CopositivityProblem horn = make_horn();
  REQUIRE(horn.M.rows() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(horn.M(i, i) == 1.0);
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      const bool neighbor = (j == (i + 1) % 5) || (i == (j + 1) % 5);
      CHECK(horn.M(i, j) == (neighbor ? -1.0 : 1.0));
    }
  }
  CHECK_THROWS(make_horn(2));
}

TEST_CASE("lcp generator embeds a complementary solution") {
  const LcpProblem p = make_lcp(8, 3);
  p.validate();
  // by construction b = y* - A x* with x*, y* >= 0 and disjoint supports
  CHECK(p.A.rows() == 8);
  CHECK(p.b.size() == 8);
}

TEST_CASE("spca generator centers its columns") {
  const SpcaProblem p = make_spca(50, 6, 2, 3, projections::SparsityMode::Column, 21);
  REQUIRE(p.X.has_value());
  const VectorXd means = p.X->colwise().mean();
  CHECK(means.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(p.dim_p() == 6);
}

TEST_CASE("json roundtrip preserves every kind") {
  std::vector<ProblemInstance> instances;
  instances.push_back(make_lp(3, 6, 1));
  instances.push_back(make_nqp(5, 2));
  instances.push_back(make_kinship(4, 3));
  instances.push_back(make_soc(3, 5, 4));
  instances.push_back(make_copositivity(4, 5));
  instances.push_back(make_lcp(4, 6));
  instances.push_back(make_spca(20, 5, 2, 2, projections::SparsityMode::Matrix, 7));
  for (const ProblemInstance& inst : instances) {
    const std::string text = to_json_string(inst, 42);
    std::optional<std::uint64_t> seed;
    const ProblemInstance back = from_json_string(text, &seed);
    CHECK(kind_of(back) == kind_of(inst));
    REQUIRE(seed.has_value());
    CHECK(*seed == 42);
    CHECK(to_json_string(back, 42) == text);  // stable bytes through a cycle
  }
}

TEST_CASE("sparse matrices stay sparse through serialization") {
  const ProblemInstance inst{make_lp(10, 50, 4, true, 0.05)};
  const std::string text = to_json_string(inst);
  const ProblemInstance back = from_json_string(text);
  const auto& lp = std::get<LpProblem>(back);
  CHECK(lp.A.is_sparse());
  CHECK((lp.A.to_dense() - std::get<LpProblem>(inst).A.to_dense()).norm() == 0.0);
}

TEST_CASE("instance files roundtrip on disk") {
  const std::string path = "problems_roundtrip_test.json";
  const ProblemInstance inst{make_nqp(4, 17)};
  save_instance(path, inst, 17);
  std::optional<std::uint64_t> seed;
  const ProblemInstance back = load_instance(path, &seed);
  CHECK(kind_of(back) == "nqp");
  REQUIRE(seed.has_value());
  CHECK(*seed == 17);
  std::remove(path.c_str());
}

TEST_CASE("malformed json reports the offending line") {
  const std::string path = "problems_malformed_test.json";
  {
    std::ofstream out(path);
    out << "{\n  \"kind\": \"nqp\",\n  \"dims\": oops\n}\n";
  }
  try {
    load_instance(path);
    FAIL("expected a parse error");
  } catch (const std::exception& e) {
    const std::string what = e.what();
    CHECK(what.find(path) != std::string::npos);
    CHECK(what.find(":3") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("unknown kinds and missing fields are rejected") {
  CHECK_THROWS(from_json_string("{\"kind\": \"mystery\"}"));
  CHECK_THROWS(from_json_string("{\"kind\": \"lp\"}"));
  CHECK_THROWS(from_json_string("[1, 2, 3]"));
}

TEST_CASE("validation rejects inconsistent instances") {
  NqpProblem nqp;
  MatrixXd a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;  // asymmetric
  nqp.A = MatrixData(a);
  nqp.b = VectorXd::Zero(2);
  CHECK_THROWS(nqp.validate());

  LpProblem lp;
  lp.A = MatrixData(MatrixXd::Ones(2, 4));
  lp.b = VectorXd::Zero(3);  // wrong length
  lp.v = VectorXd::Zero(4);
  CHECK_THROWS(lp.validate());

  SpcaProblem spca = make_spca(10, 4, 2, 3, projections::SparsityMode::Column, 1);
  spca.r = 9;  // exceeds p in column mode
  CHECK_THROWS(spca.validate());
  spca.r = 2;
  spca.q = 0;
  CHECK_THROWS(spca.validate());
}

TEST_CASE("generator argument checks") {
  CHECK_THROWS(make_lp(0, 4, 1));
  CHECK_THROWS(make_lp(4, 3, 1));  // wide matrix required
  CHECK_THROWS(make_nqp(0, 1));
  CHECK_THROWS(make_spca(5, 4, 5, 2, projections::SparsityMode::Column, 1));
}

}  // TEST_SUITE
