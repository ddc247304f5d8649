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

#ifndef PREFRANK_SENSITIVITY_HPP_
#define PREFRANK_SENSITIVITY_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

#include "prefrank/equilibrium.hpp"
#include "prefrank/estimation.hpp"

namespace prefrank {

// Pieces of P seen from institution i (index i dropped throughout).
struct RowPartition {
  std::size_t i = 0;
  std::vector<std::size_t> kept;  // original indices, ascending
  Eigen::VectorXd alpha;          // row i of P without entry i
  Eigen::MatrixXd z;              // P^T without row i and column i

  // Row j of P with entry j zeroed, entry i dropped.
  Eigen::VectorXd gamma(const Eigen::MatrixXd& p, std::size_t j) const;
};

RowPartition partition_row(const Eigen::MatrixXd& p, std::size_t i);

// Derivative of pi with respect to one perturbed entry. `others` follows
// RowPartition::kept order.
struct Derivative {
  double target = 0.0;
  Eigen::VectorXd others;
};

// Caches one LU factorization of (I - Z_i) per i.
class SensitivitySolver {
 public:
  SensitivitySolver(Eigen::MatrixXd p, Eigen::RowVectorXd pi);

  // d pi / d P_ii, off-diagonals of row i shrinking proportionally.
  Derivative d_pi_d_pii(std::size_t i);
  // d pi / d P_ji (target = d pi_i), row j's other off-diagonals shrinking
  // proportionally.
  Derivative d_pi_d_pji(std::size_t j, std::size_t i);

  // False when 1 - P_ji - P_jj is numerically zero.
  bool cross_applicable(std::size_t j, std::size_t i) const;

  const RowPartition& partition(std::size_t i);
  const Eigen::MatrixXd& matrix() const { return p_; }
  const Eigen::RowVectorXd& scores() const { return pi_; }

 private:
  struct Reduced {
    RowPartition part;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    Eigen::VectorXd x;  // (I - Z_i)^{-1} alpha_i
    double q = 0.0;     // 1^T x
  };
  Reduced& reduced(std::size_t i);

  Eigen::MatrixXd p_;
  Eigen::RowVectorXd pi_;
  std::vector<std::optional<Reduced>> cache_;
};

Derivative d_pi_d_pii(const Eigen::MatrixXd& p, const Eigen::RowVectorXd& pi,
                      std::size_t i);
Derivative d_pi_d_pji(const Eigen::MatrixXd& p, const Eigen::RowVectorXd& pi,
                      std::size_t j, std::size_t i);

// Component i: (P_ii / pi_i) * d pi_i / d P_ii.
Eigen::VectorXd elasticity_vector(const Eigen::MatrixXd& p,
                                  const Eigen::RowVectorXd& pi);

struct SensitivityReport {
  Eigen::VectorXd self_derivatives;
  Eigen::VectorXd self_elasticities;
  // (i, j), j != i: responses to a shock of P_ji. d_target is d pi_i,
  // d_partner is d pi_j; the elasticity matrices are the percent versions.
  // Diagonals of the elasticity matrices carry the self elasticities.
  Eigen::MatrixXd d_target;
  Eigen::MatrixXd d_partner;
  Eigen::MatrixXd cross_elasticities;
  Eigen::MatrixXd partner_elasticities;
  // Partnership (i, j) iff d pi_j / d P_ji >= 0. Both false off `applicable`.
  std::vector<std::vector<bool>> partnership;
  std::vector<std::vector<bool>> applicable;
};

SensitivityReport partnership_matrix(const Eigen::MatrixXd& p,
                                     const Eigen::RowVectorXd& pi);

struct ScenarioResult {
  TransitionMatrix matrix;
  AuthorityDistribution pi;
};

// Replaces P_ii by `new_pii`, rescales the rest of row i by
// (1 - new_pii) / (1 - P_ii) and re-solves.
ScenarioResult scenario_rerank(const TransitionMatrix& p, std::size_t i,
                               double new_pii,
                               const SolveOptions& options = {});

}  // namespace prefrank

#endif  // PREFRANK_SENSITIVITY_HPP_
