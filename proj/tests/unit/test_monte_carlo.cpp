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
#include "prefrank/monte_carlo.hpp"

using namespace prefrank;

namespace {

Dataset Fixture() {
  return load_dataset(oracle::DataPath("institutions12.csv"),
                      oracle::DataPath("preferences12.csv"));
}

double MeanWidth(const SimulationSummary& s) {
  double total = 0.0;
  for (const auto& inst : s.institutions) {
    total += inst.score_ci_upper - inst.score_ci_lower;
  }
  return total / static_cast<double>(s.institutions.size());
}

// Same pairs with every survey size doubled and intervals recomputed.
Dataset DoubledSizes(const Dataset& d) {
  std::vector<PreferenceObservation> obs = d.observations();
  for (auto& o : obs) {
    o.survey_size = 2 * *o.survey_size;
    const WilsonInterval w =
        wilson_interval(o.share, static_cast<double>(*o.survey_size));
    o.ci_lower = w.lower;
    o.ci_upper = w.upper;
  }
  return validate_dataset(d.institutions(), obs);
}

}  // namespace

TEST_CASE("moment fit") {
  BetaParams u = fit_beta_moments(0.5, std::sqrt(1.0 / 12));
  CHECK(u.alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(u.beta == doctest::Approx(1.0).epsilon(1e-12));

  const WilsonInterval w = wilson_interval(0.56, 420);
  const double sd = w.half_width / kDefaultZ;
  BetaParams b = fit_beta_moments(0.56, sd);
  auto [mean, var] = oracle::BetaMomentsNumeric(b.alpha, b.beta);
  CHECK(std::abs(mean - 0.56) < 1e-6);
  CHECK(std::abs(var - sd * sd) < 1e-6);

  CHECK_THROWS_AS(fit_beta_moments(0.5, 0.5), DomainError);
  CHECK_THROWS_AS(fit_beta_moments(1.0, 0.1), DomainError);
}

TEST_CASE("sampler matches the fitted moments") {
  Draw d{0.3, fit_beta_moments(0.3, 0.05)};
  std::mt19937_64 rng(1);
  double s1 = 0, s2 = 0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double x = d.sample(rng);
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / n;
  CHECK(mean == doctest::Approx(0.3).epsilon(0.01));
  CHECK(std::sqrt(s2 / n - mean * mean) == doctest::Approx(0.05).epsilon(0.02));
}

TEST_CASE("zero variance reproduces the point estimate") {
  Dataset d = Fixture();
  Estimate e = estimate_transition_matrix(d);
  SimulationModel model = build_simulation_model(d, e.trace, {}, true);
  std::mt19937_64 rng(5);
  auto p = simulate_transition(model, rng);
  REQUIRE(p);
  CHECK((*p - e.matrix.entries).cwiseAbs().maxCoeff() == 0.0);

  MonteCarloOptions options;
  options.n_sims = 50;
  SimulationSummary s = run_monte_carlo(model, options);
  const Eigen::RowVectorXd point = solve_authority(e.matrix).scores;
  const std::vector<int> ranks = competition_ranks(point);
  for (std::size_t k = 0; k < 12; ++k) {
    const auto& inst = s.institutions[k];
    CHECK(inst.score_ci_lower == point(static_cast<Eigen::Index>(k)));
    CHECK(inst.score_ci_upper == point(static_cast<Eigen::Index>(k)));
    CHECK(inst.rank_ci_lower == ranks[k]);
    CHECK(inst.rank_ci_upper == ranks[k]);
  }
}

TEST_CASE("draws are antisymmetric and rows stochastic") {
  Dataset d = Fixture();
  Estimate e = estimate_transition_matrix(d);
  SimulationModel model = build_simulation_model(d, e.trace);
  std::mt19937_64 rng(17);
  for (int k = 0; k < 200; ++k) {
    Eigen::MatrixXd shares;
    auto p = simulate_transition(model, rng, &shares);
    REQUIRE(p);
    for (Eigen::Index i = 0; i < 12; ++i) {
      CHECK(std::abs(p->row(i).sum() - 1.0) <= 1e-12);
      for (Eigen::Index j = 0; j < i; ++j)
        CHECK(shares(i, j) + shares(j, i) == 1.0);
    }
  }
}

TEST_CASE("seed and worker count do not change results") {
  Dataset d = Fixture();
  Estimate e = estimate_transition_matrix(d);
  SimulationModel model = build_simulation_model(d, e.trace);
  MonteCarloOptions options;
  options.n_sims = 400;
  options.seed = 42;
  options.keep_scores = true;
  options.workers = 1;
  SimulationSummary a = run_monte_carlo(model, options);
  options.workers = 4;
  SimulationSummary b = run_monte_carlo(model, options);
  SimulationSummary c = run_monte_carlo(model, options);
  CHECK((a.scores.array() == b.scores.array()).all());
  CHECK((b.scores.array() == c.scores.array()).all());
  for (std::size_t k = 0; k < 12; ++k) {
    CHECK(a.institutions[k].score_ci_lower == b.institutions[k].score_ci_lower);
    CHECK(a.institutions[k].score_median == b.institutions[k].score_median);
  }
  options.seed = 43;
  SimulationSummary other = run_monte_carlo(model, options);
  CHECK_FALSE((other.scores.array() == a.scores.array()).all());
}

TEST_CASE("summary invariants") {
  Dataset d = Fixture();
  Estimate e = estimate_transition_matrix(d);
  MonteCarloOptions options;
  options.n_sims = 500;
  SimulationSummary s =
      run_monte_carlo(build_simulation_model(d, e.trace), options);
  CHECK(s.n_failed == 0);
  for (const auto& inst : s.institutions) {
    CHECK(inst.score_ci_lower <= inst.score_median);
    CHECK(inst.score_median <= inst.score_ci_upper);
    CHECK(inst.rank_ci_lower >= 1);
    CHECK(inst.rank_ci_upper <= 12);
    CHECK(inst.rank_ci_lower <= inst.rank_ci_upper);
  }
}

TEST_CASE("larger samples give narrower intervals") {
  Dataset d = Fixture();
  Dataset twice = DoubledSizes(d);
  MonteCarloOptions options;
  options.n_sims = 2000;
  options.seed = 9;
  SimulationSummary a = run_monte_carlo(
      build_simulation_model(d, estimate_transition_matrix(d).trace), options);
  SimulationSummary b = run_monte_carlo(
      build_simulation_model(twice, estimate_transition_matrix(twice).trace),
      options);
  CHECK(MeanWidth(b) < MeanWidth(a));
}

TEST_CASE("too many failed replications") {
  SimulationModel model;
  model.index = {"a", "b"};
  model.diagonal = {Draw{0.5, std::nullopt}, Draw{0.5, std::nullopt}};
  model.scaled_size = Eigen::MatrixXd::Zero(2, 2);
  MonteCarloOptions options;
  options.n_sims = 10;
  CHECK_THROWS_AS(run_monte_carlo(model, options), SimulationError);
  options.n_sims = 1;
  CHECK_THROWS_AS(run_monte_carlo(model, options), InputError);
}

TEST_CASE("quantiles") {
  const std::vector<double> v = {1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.0) == 1);
  CHECK(quantile_sorted(v, 1.0) == 4);
  CHECK(quantile_sorted(v, 0.5) == 2.5);
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
}

TEST_CASE("interval coverage on data drawn from known betas") {
  // Four institutions with equal enrollment, so scaling is the identity and
  // the simulated spread matches the sampling spread.
  const std::vector<Institution> inst = {{"a", "A", 1500, 900},
                                         {"b", "B", 2000, 900},
                                         {"c", "C", 3000, 900},
                                         {"d", "D", 1800, 900}};
  const double truth[4][4] = {{0, .60, .70, .55},
                              {.40, 0, .62, .45},
                              {.30, .38, 0, .35},
                              {.45, .55, .65, 0}};
  const std::int64_t size = 150;
  auto make = [&](const double shares[4][4],
                  const std::vector<Institution>& in) {
    std::vector<PreferenceObservation> obs;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        const WilsonInterval w = wilson_interval(shares[i][j], size);
        obs.push_back(
            {in[i].id, in[j].id, shares[i][j], w.lower, w.upper, size, false});
      }
    }
    return validate_dataset(in, obs);
  };
  const Dataset truth_data = make(truth, inst);
  const Eigen::RowVectorXd target =
      solve_authority(estimate_transition_matrix(truth_data).matrix).scores;

  std::mt19937_64 rng(2024);
  int covered = 0, total = 0;
  for (int outer = 0; outer < 200; ++outer) {
    double drawn[4][4] = {};
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        const WilsonInterval w = wilson_interval(truth[i][j], size);
        Draw draw{truth[i][j],
                  fit_beta_moments(truth[i][j], w.half_width / kDefaultZ)};
        drawn[i][j] = draw.sample(rng);
      }
    }
    std::vector<Institution> obs_inst = inst;
    for (auto& in : obs_inst) {
      const double rate = static_cast<double>(in.enrolled) / in.admits;
      std::binomial_distribution<std::int64_t> enroll(in.admits, rate);
      in.enrolled = enroll(rng);
    }
    const Dataset data = make(drawn, obs_inst);
    const Estimate est = estimate_transition_matrix(data);
    MonteCarloOptions options;
    options.n_sims = 400;
    options.seed = static_cast<std::uint64_t>(outer);
    const SimulationSummary s =
        run_monte_carlo(build_simulation_model(data, est.trace), options);
    for (int k = 0; k < 4; ++k) {
      const auto& ci = s.institutions[static_cast<std::size_t>(k)];
      covered +=
          ci.score_ci_lower <= target(k) && target(k) <= ci.score_ci_upper;
      ++total;
    }
  }
  const double coverage = static_cast<double>(covered) / total;
  MESSAGE("coverage " << coverage);
  CHECK(coverage >= 0.90);
}
