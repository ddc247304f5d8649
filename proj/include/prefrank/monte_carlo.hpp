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

#ifndef PREFRANK_MONTE_CARLO_HPP_
#define PREFRANK_MONTE_CARLO_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "prefrank/data_model.hpp"
#include "prefrank/equilibrium.hpp"
#include "prefrank/estimation.hpp"

namespace prefrank {

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  double mean() const { return alpha / (alpha + beta); }
  double variance() const {
    const double s = alpha + beta;
    return alpha * beta / (s * s * (s + 1.0));
  }
};

// Method of moments. Throws DomainError unless 0 < mean < 1, sd > 0 and
// sd^2 < mean (1 - mean).
BetaParams fit_beta_moments(double mean, double sd);

// One beta-distributed quantity, or a constant when `beta` is empty.
struct Draw {
  double point = 0.0;
  std::optional<BetaParams> beta;

  double sample(std::mt19937_64& rng) const;
};

// Everything a replication needs: beta fits for the upper-index side of each
// observed pair and for each diagonal, plus the fixed scaled sizes.
struct SimulationModel {
  std::vector<std::string> index;
  std::vector<Draw> diagonal;
  struct Pair {
    std::size_t i = 0;  // i > j; the draw is S_ij, and S_ji = 1 - S_ij
    std::size_t j = 0;
    Draw share;
    double reverse_point = 0.0;  // point share of (j, i)
  };
  std::vector<Pair> pairs;
  Eigen::MatrixXd scaled_size;  // 0 where unobserved
};

// Beta means are Wilson centers; sds are half-widths over z (scaled for
// pairs, at (E/A, A) for diagonals). With `zero_variance` every draw is pinned
// to its point estimate. Throws SimulationError if a fit is infeasible.
SimulationModel build_simulation_model(const Dataset& dataset,
                                       const EstimationTrace& trace,
                                       const EstimationOptions& options = {},
                                       bool zero_variance = false);

// One simulated matrix; nullopt if some row ends up with no competitor mass.
// If `shares` is given it receives the drawn S (zero where unobserved).
std::optional<Eigen::MatrixXd> simulate_transition(
    const SimulationModel& model, std::mt19937_64& rng,
    Eigen::MatrixXd* shares = nullptr);

// Independent stream for replication `rep` of a run seeded with `seed`.
std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t rep);

struct MonteCarloOptions {
  std::int64_t n_sims = 20'000;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  unsigned workers = 0;  // 0: hardware concurrency
  bool keep_scores = false;
  SolveOptions solve;
};

struct InstitutionSummary {
  double score_ci_lower = 0.0;
  double score_ci_upper = 0.0;
  double score_mean = 0.0;
  double score_median = 0.0;
  int rank_ci_lower = 1;
  int rank_ci_upper = 1;
};

struct SimulationSummary {
  std::vector<std::string> index;
  std::vector<InstitutionSummary> institutions;
  std::int64_t n_sims = 0;
  std::uint64_t seed = 0;
  std::int64_t n_failed = 0;
  double ci_level = 0.95;
  // Replication x institution; NaN rows for failed replications. Filled only
  // with MonteCarloOptions::keep_scores.
  Eigen::MatrixXd scores;
};

// Throws SimulationError when more than 1% of replications fail.
SimulationSummary run_monte_carlo(const SimulationModel& model,
                                  const MonteCarloOptions& options);

// Linear-interpolation sample quantile of sorted data (R type 7).
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace prefrank

#endif  // PREFRANK_MONTE_CARLO_HPP_
