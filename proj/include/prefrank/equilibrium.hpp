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

#ifndef PREFRANK_EQUILIBRIUM_HPP_
#define PREFRANK_EQUILIBRIUM_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "prefrank/errors.hpp"
#include "prefrank/estimation.hpp"

namespace prefrank {

// Communicating classes of the digraph with an edge i -> j wherever
// P_ij > 0, and the period of each class.
struct StructureReport {
  bool irreducible = false;
  bool aperiodic = false;
  std::vector<std::vector<std::size_t>> communicating_classes;
  std::vector<int> period;  // parallel to communicating_classes

  // Human-readable summary; ids label indices when given.
  std::string describe(const std::vector<std::string>& ids = {}) const;
};

StructureReport check_structure(const Eigen::MatrixXd& p);

class StructureError : public Error {
 public:
  StructureError(const std::string& what, StructureReport report)
      : Error(ExitCode::kStructure, what), report_(std::move(report)) {}

  const StructureReport& report() const { return report_; }

 private:
  StructureReport report_;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, Eigen::RowVectorXd last)
      : Error(ExitCode::kStructure, what), last_(std::move(last)) {}

  const Eigen::RowVectorXd& last_iterate() const { return last_; }

 private:
  Eigen::RowVectorXd last_;
};

struct SolveOptions {
  double tolerance = 1e-9;
  std::int64_t max_iter = 1'000'000;
};

struct AuthorityDistribution {
  std::vector<std::string> index;
  Eigen::RowVectorXd scores;
  std::int64_t iterations = 0;
  double residual = 0.0;  // sup-norm of pi - pi P
};

// Power iteration from the uniform vector until successive iterates differ
// by at most `tolerance` in sup-norm. Throws StructureError unless P is
// irreducible and aperiodic, NonConvergenceError after max_iter steps.
AuthorityDistribution solve_authority(const TransitionMatrix& p,
                                      const SolveOptions& options = {});
AuthorityDistribution solve_authority(const Eigen::MatrixXd& p,
                                      const SolveOptions& options = {});

struct RankEntry {
  int rank = 0;
  std::size_t index = 0;
  std::string id;
  double score = 0.0;
};

struct Ranking {
  std::vector<RankEntry> entries;  // best first
  std::vector<std::vector<std::string>> tie_groups;
};

// Competition ranking: equal scores share the smaller rank and keep file
// order.
Ranking rank_from_scores(const AuthorityDistribution& pi);

// Rank of each index (1 = best) under the same rule, without ids.
std::vector<int> competition_ranks(const Eigen::RowVectorXd& scores);

// Row i of P.
Eigen::RowVectorXd reference_ranking(const TransitionMatrix& p,
                                     const std::string& id);

// Weighted-sum baseline: scores = weights^T * criteria (k x n).
Eigen::VectorXd baseline_weighted_score(const Eigen::VectorXd& weights,
                                        const Eigen::MatrixXd& criteria);

}  // namespace prefrank

#endif  // PREFRANK_EQUILIBRIUM_HPP_
