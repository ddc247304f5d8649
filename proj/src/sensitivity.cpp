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

#include "prefrank/sensitivity.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "prefrank/errors.hpp"

namespace prefrank {
namespace {

constexpr double kDegenerateMass = 1e-12;
constexpr double kMinReciprocalCondition = 1e-14;

Eigen::Index Ix(std::size_t k) { return static_cast<Eigen::Index>(k); }

}  // namespace

Eigen::VectorXd RowPartition::gamma(const Eigen::MatrixXd& p,
                                    std::size_t j) const {
  Eigen::VectorXd g(Ix(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    g(Ix(k)) = kept[k] == j ? 0.0 : p(Ix(j), Ix(kept[k]));
  }
  return g;
}

RowPartition partition_row(const Eigen::MatrixXd& p, std::size_t i) {
  const auto n = static_cast<std::size_t>(p.rows());
  RowPartition part;
  part.i = i;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != i) part.kept.push_back(k);
  }
  const std::size_t m = part.kept.size();
  part.alpha.resize(Ix(m));
  part.z.resize(Ix(m), Ix(m));
  for (std::size_t a = 0; a < m; ++a) {
    part.alpha(Ix(a)) = p(Ix(i), Ix(part.kept[a]));
    for (std::size_t b = 0; b < m; ++b) {
      part.z(Ix(a), Ix(b)) = p(Ix(part.kept[b]), Ix(part.kept[a]));
    }
  }
  return part;
}

SensitivitySolver::SensitivitySolver(Eigen::MatrixXd p, Eigen::RowVectorXd pi)
    : p_(std::move(p)),
      pi_(std::move(pi)),
      cache_(static_cast<std::size_t>(p_.rows())) {}

SensitivitySolver::Reduced& SensitivitySolver::reduced(std::size_t i) {
  auto& slot = cache_.at(i);
  if (!slot) {
    Reduced r;
    r.part = partition_row(p_, i);
    const Eigen::Index m = r.part.z.rows();
    r.lu.compute(Eigen::MatrixXd::Identity(m, m) - r.part.z);
    if (m > 0 && !(r.lu.rcond() > kMinReciprocalCondition)) {
      throw StructureError("I - Z is singular for index " + std::to_string(i) +
                               "; matrix is not irreducible",
                           check_structure(p_));
    }
    r.x = m > 0 ? Eigen::VectorXd(r.lu.solve(r.part.alpha)) : Eigen::VectorXd();
    r.q = r.x.sum();
    slot = std::move(r);
  }
  return *slot;
}

const RowPartition& SensitivitySolver::partition(std::size_t i) {
  return reduced(i).part;
}

Derivative SensitivitySolver::d_pi_d_pii(std::size_t i) {
  const double p_ii = p_(Ix(i), Ix(i));
  if (!(1.0 - p_ii > kDegenerateMass)) {
    throw DegenerateError("P_ii = 1 for index " + std::to_string(i) +
                          "; row has no off-diagonal mass to rescale");
  }
  Reduced& r = reduced(i);
  const double pi_i = pi_(Ix(i));
  Derivative d;
  d.target = pi_i / (1.0 - p_ii) * r.q / (1.0 + r.q);
  d.others = -pi_i / ((1.0 - p_ii) * (1.0 + r.q)) * r.x;
  return d;
}

bool SensitivitySolver::cross_applicable(std::size_t j, std::size_t i) const {
  return j != i && 1.0 - p_(Ix(j), Ix(i)) - p_(Ix(j), Ix(j)) > kDegenerateMass;
}

Derivative SensitivitySolver::d_pi_d_pji(std::size_t j, std::size_t i) {
  if (j == i) {
    throw InputError(InputError::Kind::kInvalidArgument,
                     "cross derivative needs j != i");
  }
  if (!cross_applicable(j, i)) {
    std::ostringstream msg;
    msg << "1 - P_ji - P_jj = 0 for (j, i) = (" << j << ", " << i
        << "); no entries left to rescale";
    throw DegenerateError(msg.str());
  }
  Reduced& r = reduced(i);
  const double c = pi_(Ix(j)) / (1.0 - p_(Ix(j), Ix(i)) - p_(Ix(j), Ix(j)));
  const Eigen::VectorXd gamma = r.part.gamma(p_, j);
  const Eigen::VectorXd y = r.lu.solve(gamma);
  Derivative d;
  d.target = c * y.sum() / (1.0 + r.q);
  d.others = d.target * r.x - c * y;
  return d;
}

Derivative d_pi_d_pii(const Eigen::MatrixXd& p, const Eigen::RowVectorXd& pi,
                      std::size_t i) {
  return SensitivitySolver(p, pi).d_pi_d_pii(i);
}

Derivative d_pi_d_pji(const Eigen::MatrixXd& p, const Eigen::RowVectorXd& pi,
                      std::size_t j, std::size_t i) {
  return SensitivitySolver(p, pi).d_pi_d_pji(j, i);
}

Eigen::VectorXd elasticity_vector(const Eigen::MatrixXd& p,
                                  const Eigen::RowVectorXd& pi) {
  SensitivitySolver solver(p, pi);
  const auto n = static_cast<std::size_t>(p.rows());
  Eigen::VectorXd out(p.rows());
  for (std::size_t i = 0; i < n; ++i) {
    out(Ix(i)) = p(Ix(i), Ix(i)) / pi(Ix(i)) * solver.d_pi_d_pii(i).target;
  }
  return out;
}

SensitivityReport partnership_matrix(const Eigen::MatrixXd& p,
                                     const Eigen::RowVectorXd& pi) {
  SensitivitySolver solver(p, pi);
  const auto n = static_cast<std::size_t>(p.rows());
  const Eigen::Index nn = p.rows();
  SensitivityReport out;
  out.self_derivatives.resize(nn);
  out.self_elasticities.resize(nn);
  out.d_target = Eigen::MatrixXd::Zero(nn, nn);
  out.d_partner = Eigen::MatrixXd::Zero(nn, nn);
  out.cross_elasticities = Eigen::MatrixXd::Zero(nn, nn);
  out.partner_elasticities = Eigen::MatrixXd::Zero(nn, nn);
  out.partnership.assign(n, std::vector<bool>(n, false));
  out.applicable.assign(n, std::vector<bool>(n, false));

  for (std::size_t i = 0; i < n; ++i) {
    const Derivative self = solver.d_pi_d_pii(i);
    const double e = p(Ix(i), Ix(i)) / pi(Ix(i)) * self.target;
    out.self_derivatives(Ix(i)) = self.target;
    out.self_elasticities(Ix(i)) = e;
    out.cross_elasticities(Ix(i), Ix(i)) = e;
    out.partner_elasticities(Ix(i), Ix(i)) = e;
    const RowPartition& part = solver.partition(i);
    for (std::size_t k = 0; k < part.kept.size(); ++k) {
      const std::size_t j = part.kept[k];
      if (!solver.cross_applicable(j, i)) continue;
      const Derivative d = solver.d_pi_d_pji(j, i);
      const double d_j = d.others(Ix(k));
      const double p_ji = p(Ix(j), Ix(i));
      out.applicable[i][j] = true;
      out.partnership[i][j] = d_j >= 0.0;
      out.d_target(Ix(i), Ix(j)) = d.target;
      out.d_partner(Ix(i), Ix(j)) = d_j;
      out.cross_elasticities(Ix(i), Ix(j)) = p_ji / pi(Ix(i)) * d.target;
      out.partner_elasticities(Ix(i), Ix(j)) = p_ji / pi(Ix(j)) * d_j;
    }
  }
  return out;
}

ScenarioResult scenario_rerank(const TransitionMatrix& p, std::size_t i,
                               double new_pii, const SolveOptions& options) {
  if (i >= p.size()) {
    throw InputError(InputError::Kind::kInvalidArgument,
                     "scenario index out of range");
  }
  if (!(new_pii > 0.0 && new_pii < 1.0)) {
    throw InputError(
        InputError::Kind::kInvalidArgument,
        "invalid rate " + std::to_string(new_pii) + ", need 0 < rate < 1");
  }
  const Eigen::Index r = Ix(i);
  const double old_pii = p.entries(r, r);
  if (!(1.0 - old_pii > kDegenerateMass)) {
    throw DegenerateError("row " + p.index[i] +
                          " has no off-diagonal mass to rescale");
  }
  ScenarioResult out{p, {}};
  out.matrix.entries.row(r) *= (1.0 - new_pii) / (1.0 - old_pii);
  out.matrix.entries(r, r) = new_pii;
  out.pi = solve_authority(out.matrix, options);
  return out;
}

}  // namespace prefrank
