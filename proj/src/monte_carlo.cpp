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

#include "prefrank/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "prefrank/errors.hpp"

namespace prefrank {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Draw FitOrPin(double point, double mean, double sd, bool zero_variance,
              const std::string& what) {
  Draw d;
  d.point = point;
  if (zero_variance || !(sd > 0.0)) return d;
  try {
    d.beta = fit_beta_moments(mean, sd);
  } catch (const DomainError& e) {
    throw SimulationError(what + ": " + e.what());
  }
  return d;
}

}  // namespace

BetaParams fit_beta_moments(double mean, double sd) {
  if (!(mean > 0.0 && mean < 1.0) || !(sd > 0.0)) {
    throw DomainError("beta fit needs 0 < mean < 1 and sd > 0");
  }
  const double bound = mean * (1.0 - mean);
  if (!(sd * sd < bound)) {
    std::ostringstream msg;
    msg << "infeasible variance " << sd * sd << " for mean " << mean
        << " (must be below " << bound << ")";
    throw DomainError(msg.str());
  }
  const double nu = bound / (sd * sd) - 1.0;
  return {mean * nu, (1.0 - mean) * nu};
}

double Draw::sample(std::mt19937_64& rng) const {
  if (!beta) return point;
  std::gamma_distribution<double> ga(beta->alpha, 1.0);
  std::gamma_distribution<double> gb(beta->beta, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

SimulationModel build_simulation_model(const Dataset& dataset,
                                       const EstimationTrace& trace,
                                       const EstimationOptions& options,
                                       bool zero_variance) {
  const auto& inst = dataset.institutions();
  const std::size_t n = inst.size();
  SimulationModel model;
  model.scaled_size = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  for (const auto& in : inst) model.index.push_back(in.id);

  for (std::size_t i = 0; i < n; ++i) {
    const double rate = enrollment_rate(inst[i]);
    if (rate >= 1.0) {
      model.diagonal.push_back(Draw{1.0, std::nullopt});
      continue;
    }
    const WilsonInterval w =
        wilson_interval(rate, static_cast<double>(inst[i].admits), options.z);
    model.diagonal.push_back(FitOrPin(rate, w.center, w.half_width / options.z,
                                      zero_variance,
                                      "enrollment rate of " + inst[i].id));
  }

  for (const PairTrace& t : trace.pairs) {
    model.scaled_size(static_cast<Eigen::Index>(t.from),
                      static_cast<Eigen::Index>(t.to)) = t.scaled_size;
    if (t.from < t.to) continue;
    const PairTrace* reverse = trace.find(t.to, t.from);
    SimulationModel::Pair pair;
    pair.i = t.from;
    pair.j = t.to;
    pair.share =
        FitOrPin(t.share, t.raw_interval.center,
                 t.scaled_half_width / options.z, zero_variance,
                 "share of (" + inst[t.from].id + ", " + inst[t.to].id + ")");
    pair.reverse_point = reverse ? reverse->share : 1.0 - t.share;
    model.pairs.push_back(pair);
  }
  // A pair seen only from the lower index (its reverse row was not traced).
  for (const PairTrace& t : trace.pairs) {
    if (t.from > t.to || trace.find(t.to, t.from) != nullptr) continue;
    SimulationModel::Pair pair;
    pair.i = t.to;
    pair.j = t.from;
    pair.share = Draw{1.0 - t.share, std::nullopt};
    pair.reverse_point = t.share;
    model.pairs.push_back(pair);
  }
  return model;
}

std::optional<Eigen::MatrixXd> simulate_transition(const SimulationModel& model,
                                                   std::mt19937_64& rng,
                                                   Eigen::MatrixXd* shares) {
  const std::size_t n = model.index.size();
  if (shares) {
    shares->setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  }
  std::vector<std::vector<double>> chosen(n, std::vector<double>(n, 0.0));
  for (const auto& pair : model.pairs) {
    double s_ij = pair.share.point;
    double s_ji = pair.reverse_point;
    if (pair.share.beta) {
      s_ij = pair.share.sample(rng);
      s_ji = 1.0 - s_ij;
    }
    const auto i = static_cast<Eigen::Index>(pair.i);
    const auto j = static_cast<Eigen::Index>(pair.j);
    if (shares) {
      (*shares)(i, j) = s_ij;
      (*shares)(j, i) = s_ji;
    }
    chosen[pair.i][pair.j] = s_ij * model.scaled_size(i, j);
    chosen[pair.j][pair.i] = s_ji * model.scaled_size(j, i);
  }
  Eigen::MatrixXd p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double p_ii = model.diagonal[i].sample(rng);
    if (!allocate_row(chosen[i], i, p_ii,
                      p.row(static_cast<Eigen::Index>(i)))) {
      return std::nullopt;
    }
  }
  return p;
}

std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t rep) {
  return SplitMix64(SplitMix64(seed) ^ SplitMix64(rep + 0x632be59bd9b4e019ULL));
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SimulationSummary run_monte_carlo(const SimulationModel& model,
                                  const MonteCarloOptions& options) {
  if (options.n_sims < 2) {
    throw InputError(InputError::Kind::kInvalidArgument, "n_sims must be >= 2");
  }
  if (!(options.ci_level > 0.0 && options.ci_level < 1.0)) {
    throw InputError(InputError::Kind::kInvalidArgument,
                     "ci_level must be in (0, 1)");
  }
  const std::size_t n = model.index.size();
  const auto reps = static_cast<std::size_t>(options.n_sims);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXd scores = Eigen::MatrixXd::Constant(
      static_cast<Eigen::Index>(reps), static_cast<Eigen::Index>(n), nan);
  std::vector<char> ok(reps, 0);

  auto run = [&](std::size_t rep) {
    std::mt19937_64 rng(replication_seed(options.seed, rep));
    auto p = simulate_transition(model, rng);
    if (!p) return;
    try {
      AuthorityDistribution pi = solve_authority(*p, options.solve);
      scores.row(static_cast<Eigen::Index>(rep)) = pi.scores;
      ok[rep] = 1;
    } catch (const Error&) {
      // Counted as a failed replication below.
    }
  };

  unsigned workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, reps));
  if (workers <= 1) {
    for (std::size_t rep = 0; rep < reps; ++rep) run(rep);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t rep = next++; rep < reps; rep = next++) run(rep);
      });
    }
    for (auto& t : pool) t.join();
  }

  SimulationSummary out;
  out.index = model.index;
  out.n_sims = options.n_sims;
  out.seed = options.seed;
  out.ci_level = options.ci_level;
  out.n_failed =
      static_cast<std::int64_t>(std::count(ok.begin(), ok.end(), char{0}));
  if (static_cast<double>(out.n_failed) > 0.01 * static_cast<double>(reps)) {
    std::ostringstream msg;
    msg << out.n_failed << " of " << reps
        << " replications failed (rows without competitor mass or unsolvable "
           "structure); inspect the input data";
    throw SimulationError(msg.str());
  }

  std::vector<std::vector<double>> by_inst(n);
  std::vector<std::vector<double>> ranks(n);
  for (std::size_t rep = 0; rep < reps; ++rep) {
    if (!ok[rep]) continue;
    const Eigen::RowVectorXd row = scores.row(static_cast<Eigen::Index>(rep));
    const std::vector<int> r = competition_ranks(row);
    for (std::size_t k = 0; k < n; ++k) {
      by_inst[k].push_back(row(static_cast<Eigen::Index>(k)));
      ranks[k].push_back(r[k]);
    }
  }
  const double q_lo = (1.0 - options.ci_level) / 2.0;
  const double q_hi = 1.0 - q_lo;
  for (std::size_t k = 0; k < n; ++k) {
    auto& s = by_inst[k];
    InstitutionSummary sum;
    double total = 0.0;
    for (double v : s) total += v;
    sum.score_mean = total / static_cast<double>(s.size());
    std::sort(s.begin(), s.end());
    sum.score_ci_lower = quantile_sorted(s, q_lo);
    sum.score_ci_upper = quantile_sorted(s, q_hi);
    sum.score_median = quantile_sorted(s, 0.5);
    auto& r = ranks[k];
    std::sort(r.begin(), r.end());
    const double last = static_cast<double>(r.size() - 1);
    sum.rank_ci_lower =
        static_cast<int>(r[static_cast<std::size_t>(std::floor(q_lo * last))]);
    sum.rank_ci_upper =
        static_cast<int>(r[static_cast<std::size_t>(std::ceil(q_hi * last))]);
    out.institutions.push_back(sum);
  }
  if (options.keep_scores) out.scores = std::move(scores);
  return out;
}

}  // namespace prefrank
