// Copyright 2026 The Prefrank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "prefrank/errors.hpp"
#include "prefrank/sensitivity.hpp"

using namespace prefrank;

namespace {

Eigen::MatrixXd Sample3() {
  Eigen::MatrixXd p(3, 3);
  p << .5, .3, .2, .2, .6, .2, .3, .3, .4;
  return p;
}

// Sup-norm distance relative to the sup-norm of the reference.
double RelErr(const Eigen::RowVectorXd& got, const Eigen::RowVectorXd& want) {
  return (got - want).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff();
}

// Full-length derivative vector from (target, others).
Eigen::RowVectorXd Assemble(const Derivative& d, std::size_t i, std::size_t n) {
  Eigen::RowVectorXd out(static_cast<Eigen::Index>(n));
  std::size_t k = 0;
  for (std::size_t a = 0; a < n; ++a) {
    out(static_cast<Eigen::Index>(a)) =
        a == i ? d.target : d.others(static_cast<Eigen::Index>(k++));
  }
  return out;
}

}  // namespace

TEST_CASE("partition pieces") {
  const Eigen::MatrixXd p = Sample3();
  RowPartition part = partition_row(p, 1);
  CHECK(part.kept == std::vector<std::size_t>{0, 2});
  CHECK(part.alpha.sum() == doctest::Approx(1 - p(1, 1)).epsilon(1e-12));
  CHECK(part.z(0, 1) == p(2, 0));
  CHECK(part.z(1, 0) == p(0, 2));
  Eigen::VectorXd g = part.gamma(p, 2);
  CHECK(g.sum() == doctest::Approx(1 - p(2, 2) - p(2, 1)).epsilon(1e-12));
}

TEST_CASE("two-by-two closed form") {
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(2, 2, 0.5);
  Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(2, 0.5);
  // pi_1 = (1 - b) / (2 - a - b) with a = P_11, b = P_22 after the
  // row-1 rescale; d/da at a = b = .5 is (1 - b) / (2 - a - b)^2 = .5.
  Derivative d = d_pi_d_pii(p, pi, 0);
  CHECK(d.target == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.others(0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(elasticity_vector(p, pi)(0) == doctest::Approx(0.5).epsilon(1e-12));
  // No entries left to rescale for a cross shock when n = 2.
  CHECK_THROWS_AS(d_pi_d_pji(p, pi, 1, 0), DegenerateError);
  SensitivityReport r = partnership_matrix(p, pi);
  CHECK_FALSE(r.applicable[0][1]);
  CHECK_FALSE(r.partnership[0][1]);
}

TEST_CASE("uniform three-by-three cross derivative") {
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(3, 3, 1.0 / 3);
  Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(3, 1.0 / 3);
  CHECK(d_pi_d_pji(p, pi, 1, 0).target ==
        doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(d_pi_d_pji(p, pi, 2, 0).target ==
        doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(RelErr(Assemble(d_pi_d_pji(p, pi, 1, 0), 0, 3),
               oracle::FiniteDiffCross(p, 1, 0, 1e-6)) < 1e-4);
  Eigen::VectorXd e = elasticity_vector(p, pi);
  CHECK(e(0) == doctest::Approx(e(1)));
  CHECK(e(1) == doctest::Approx(e(2)));
  SensitivityReport r = partnership_matrix(p, pi);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      CHECK(r.partnership[i][j] == r.partnership[0][1]);
      CHECK(r.cross_elasticities(i, j) ==
            doctest::Approx(r.cross_elasticities(0, 1)));
    }
  }
}

TEST_CASE("finite differences on the three-by-three sample") {
  const Eigen::MatrixXd p = Sample3();
  const Eigen::RowVectorXd pi = oracle::StationaryDirect(p);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(RelErr(Assemble(d_pi_d_pii(p, pi, i), i, 3),
                 oracle::FiniteDiffDiagonal(p, i, 1e-6)) < 1e-4);
    for (std::size_t j = 0; j < 3; ++j) {
      if (j == i) continue;
      CHECK(RelErr(Assemble(d_pi_d_pji(p, pi, j, i), i, 3),
                   oracle::FiniteDiffCross(p, j, i, 1e-6)) < 1e-4);
    }
  }
}

TEST_CASE("random matrices: finite differences, mass and sign laws") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const Eigen::MatrixXd p = oracle::RandomIrreducible(n, rng);
    const Eigen::RowVectorXd pi = oracle::StationaryDirect(p);
    SensitivitySolver solver(p, pi);
    for (std::size_t i = 0; i < n; ++i) {
      const Derivative d = solver.d_pi_d_pii(i);
      CHECK(d.target >= 0.0);
      CHECK(d.others.maxCoeff() <= 0.0);
      CHECK(std::abs(d.target + d.others.sum()) <= 1e-10);
      CHECK(RelErr(Assemble(d, i, n), oracle::FiniteDiffDiagonal(p, i, 1e-6)) <
            1e-4);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || !solver.cross_applicable(j, i)) continue;
        const Derivative c = solver.d_pi_d_pji(j, i);
        CHECK(c.target >= 0.0);
        CHECK(std::abs(c.target + c.others.sum()) <= 1e-10);
        CHECK(RelErr(Assemble(c, i, n),
                     oracle::FiniteDiffCross(p, j, i, 1e-6)) < 1e-4);
      }
    }
  }
}

TEST_CASE("report agrees with single derivatives") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd p = oracle::RandomIrreducible(5, rng, 0.0);
  const Eigen::RowVectorXd pi = oracle::StationaryDirect(p);
  SensitivityReport r = partnership_matrix(p, pi);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto a = static_cast<Eigen::Index>(i);
    CHECK(r.self_derivatives(a) == d_pi_d_pii(p, pi, i).target);
    CHECK(r.cross_elasticities(a, a) == r.self_elasticities(a));
    for (std::size_t j = 0; j < 5; ++j) {
      if (i == j) continue;
      const auto b = static_cast<Eigen::Index>(j);
      const Derivative d = d_pi_d_pji(p, pi, j, i);
      const double d_j = d.others(static_cast<Eigen::Index>(j < i ? j : j - 1));
      CHECK(r.d_target(a, b) == doctest::Approx(d.target).epsilon(1e-14));
      CHECK(r.d_partner(a, b) == doctest::Approx(d_j).epsilon(1e-14));
      CHECK(r.partnership[i][j] == (d_j >= 0.0));
      CHECK(r.cross_elasticities(a, b) ==
            doctest::Approx(p(b, a) / pi(a) * d.target));
      CHECK(r.partner_elasticities(a, b) ==
            doctest::Approx(p(b, a) / pi(b) * d_j));
    }
  }
}

TEST_CASE("degenerate diagonal") {
  Eigen::MatrixXd p(2, 2);
  p << 1, 0, .5, .5;
  Eigen::RowVectorXd pi(2);
  pi << 1, 0;
  CHECK_THROWS_AS(d_pi_d_pii(p, pi, 0), DegenerateError);
}

TEST_CASE("scenario rerank") {
  const Eigen::MatrixXd p = Sample3();
  TransitionMatrix tm{{"a", "b", "c"}, p, {}};
  const AuthorityDistribution base = solve_authority(tm);
  ScenarioResult same = scenario_rerank(tm, 1, p(1, 1));
  CHECK((same.pi.scores - base.scores).cwiseAbs().maxCoeff() < 1e-12);

  ScenarioResult moved = scenario_rerank(tm, 2, 0.7);
  CHECK(moved.matrix.entries(2, 2) == 0.7);
  CHECK(moved.matrix.entries.row(2).sum() ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(moved.matrix.entries(2, 0) / moved.matrix.entries(2, 1) ==
        doctest::Approx(p(2, 0) / p(2, 1)));
  CHECK((moved.matrix.entries.topRows(2) - p.topRows(2)).isZero());

  // Small step against the closed-form derivative.
  const double h = 1e-6;
  SolveOptions tight;
  tight.tolerance = 1e-15;
  const Eigen::RowVectorXd pi0 = solve_authority(tm, tight).scores;
  ScenarioResult step = scenario_rerank(tm, 0, p(0, 0) + h, tight);
  const Eigen::RowVectorXd fd = (step.pi.scores - pi0) / h;
  const Eigen::RowVectorXd exact = Assemble(d_pi_d_pii(p, pi0, 0), 0, 3);
  CHECK(RelErr(fd, exact) < 1e-3);
  for (Eigen::Index k = 0; k < 3; ++k) {
    CHECK((fd(k) > 0) == (exact(k) > 0));
  }

  CHECK_THROWS_AS(scenario_rerank(tm, 0, 1.0), InputError);
  CHECK_THROWS_AS(scenario_rerank(tm, 0, 0.0), InputError);
}
