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

#include "prefrank/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "prefrank/errors.hpp"

namespace prefrank {
namespace {

double RawSize(const PreferenceObservation& obs,
               const EstimationOptions& options) {
  if (obs.survey_size) return static_cast<double>(*obs.survey_size);
  if (options.mode == InversionMode::kLength) {
    return invert_wilson_length(obs.share, obs.ci_upper - obs.ci_lower,
                                options.z);
  }
  return invert_wilson_lower(obs.share, obs.ci_lower, options.z);
}

// Size implied by the raw interval after its half-width is multiplied by
// `factor` (0 < factor <= 1).
double ScaledSize(double share, const WilsonInterval& raw, double raw_size,
                  double factor, const EstimationOptions& options) {
  if (factor == 1.0) return raw_size;
  if (options.mode == InversionMode::kLength) {
    return invert_wilson_length(share, factor * raw.length(), options.z);
  }
  // The distance from the share down to the lower bound shrinks by `factor`.
  const double eta = share - factor * (share - raw.lower);
  return invert_wilson_lower(share, eta, options.z);
}

}  // namespace

const PairTrace* EstimationTrace::find(std::size_t i, std::size_t j) const {
  auto it = std::lower_bound(
      pairs.begin(), pairs.end(), std::make_pair(i, j),
      [](const PairTrace& p, const std::pair<std::size_t, std::size_t>& key) {
        return std::make_pair(p.from, p.to) < key;
      });
  if (it == pairs.end() || it->from != i || it->to != j) return nullptr;
  return &*it;
}

double enrollment_rate(const Institution& institution) {
  return static_cast<double>(institution.enrolled) /
         static_cast<double>(institution.admits);
}

bool allocate_row(const std::vector<double>& chosen, std::size_t i, double p_ii,
                  Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row) {
  const std::size_t n = chosen.size();
  if (p_ii >= 1.0) {
    row.setZero();
    row(i) = 1.0;
    return true;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != i) total += chosen[k];
  }
  if (!(total > 0.0)) return false;
  const double off = 1.0 - p_ii;
  for (std::size_t k = 0; k < n; ++k) {
    row(k) = k == i ? p_ii : chosen[k] / total * off;
  }
  return true;
}

RowEstimate estimate_row(const Dataset& dataset, std::size_t i,
                         const EstimationOptions& options) {
  const auto& inst = dataset.institutions();
  const std::size_t n = inst.size();
  RowEstimate out;
  out.row = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
  const double p_ii = enrollment_rate(inst[i]);

  double e_max = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != i) e_max = std::max(e_max, static_cast<double>(inst[k].enrolled));
  }

  std::vector<double> chosen(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const PreferenceObservation* obs = dataset.find(i, j);
    if (obs == nullptr) continue;
    PairTrace t;
    t.from = i;
    t.to = j;
    t.share = obs->share;
    try {
      t.raw_size = RawSize(*obs, options);
      t.raw_interval = wilson_interval(obs->share, t.raw_size, options.z);
      const double e_j = static_cast<double>(inst[j].enrolled);
      t.scale_factor =
          !options.scaling ? 1.0 : (e_max > 0.0 ? std::sqrt(e_j / e_max) : 0.0);
      t.scaled_half_width = t.raw_interval.half_width * t.scale_factor;
      if (t.scale_factor > 0.0) {
        t.scaled_size = ScaledSize(obs->share, t.raw_interval, t.raw_size,
                                   t.scale_factor, options);
        t.chosen = obs->share * t.scaled_size;
      }
    } catch (const DomainError& e) {
      throw DomainError("pair (" + inst[i].id + ", " + inst[j].id +
                        "): " + e.what());
    }
    chosen[j] = t.chosen;
    out.pairs.push_back(t);
  }

  if (p_ii >= 1.0) {
    out.source = RowSource::kDegenerateUnitRow;
    if (!out.pairs.empty()) {
      out.warnings.push_back(
          "row " + inst[i].id +
          ": enrollment rate 1, competitor evidence ignored");
    }
  }
  if (!allocate_row(chosen, i, p_ii, out.row)) {
    throw EstimationError("no competitor evidence for row " + inst[i].id);
  }
  return out;
}

Estimate estimate_transition_matrix(const Dataset& dataset,
                                    const EstimationOptions& options) {
  const std::size_t n = dataset.size();
  Estimate out;
  out.matrix.index.reserve(n);
  for (const auto& inst : dataset.institutions())
    out.matrix.index.push_back(inst.id);
  out.matrix.entries.setZero(static_cast<Eigen::Index>(n),
                             static_cast<Eigen::Index>(n));
  out.matrix.diagonal_source.assign(n, RowSource::kEnrollmentRate);

  std::vector<std::string> failures;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      RowEstimate row = estimate_row(dataset, i, options);
      out.matrix.entries.row(static_cast<Eigen::Index>(i)) = row.row;
      out.matrix.diagonal_source[i] = row.source;
      out.trace.pairs.insert(out.trace.pairs.end(), row.pairs.begin(),
                             row.pairs.end());
      out.trace.warnings.insert(out.trace.warnings.end(), row.warnings.begin(),
                                row.warnings.end());
    } catch (const Error& e) {
      failures.push_back(e.what());
    }
  }
  if (!failures.empty()) {
    std::string message;
    for (const auto& f : failures) {
      if (!message.empty()) message += "; ";
      message += f;
    }
    throw EstimationError(message);
  }
  return out;
}

void check_row_stochastic(const Eigen::MatrixXd& p, double tol) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw InputError(InputError::Kind::kInvalidArgument,
                     "transition matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (!(p(i, j) >= 0.0 && p(i, j) <= 1.0)) {
        std::ostringstream msg;
        msg << "entry (" << i << ", " << j << ") = " << p(i, j)
            << " outside [0, 1]";
        throw InputError(InputError::Kind::kOutOfRange, msg.str());
      }
    }
    const double sum = p.row(i).sum();
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream msg;
      msg << "row " << i << " sums to " << sum;
      throw InputError(InputError::Kind::kOutOfRange, msg.str());
    }
  }
}

}  // namespace prefrank
