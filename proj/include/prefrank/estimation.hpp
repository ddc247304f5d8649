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

#ifndef PREFRANK_ESTIMATION_HPP_
#define PREFRANK_ESTIMATION_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "prefrank/data_model.hpp"
#include "prefrank/wilson.hpp"

namespace prefrank {

enum class InversionMode { kLowerBound, kLength };

// Where a row's diagonal came from.
enum class RowSource {
  kEnrollmentRate,
  // Enrollment rate 1: the row is the unit vector at i.
  kDegenerateUnitRow,
  // Matrix read from a file rather than estimated.
  kSupplied,
};

// Row-stochastic transition matrix over `index` (institution ids in file
// order).
struct TransitionMatrix {
  std::vector<std::string> index;
  Eigen::MatrixXd entries;
  std::vector<RowSource> diagonal_source;

  std::size_t size() const { return index.size(); }
};

// Intermediate quantities for one directed pair (from = row i, to = j).
struct PairTrace {
  std::size_t from = 0;
  std::size_t to = 0;
  double share = 0.0;
  double raw_size = 0.0;
  double scaled_size = 0.0;
  double chosen = 0.0;  // share * scaled_size
  double scale_factor = 1.0;
  // Interval at the raw size, and its half-width after scaling.
  WilsonInterval raw_interval;
  double scaled_half_width = 0.0;
};

struct EstimationTrace {
  std::vector<PairTrace> pairs;  // row-major by (from, to)
  std::vector<std::string> warnings;

  // Nullptr if (i, j) was not observed.
  const PairTrace* find(std::size_t i, std::size_t j) const;
};

struct EstimationOptions {
  double z = kDefaultZ;
  InversionMode mode = InversionMode::kLowerBound;
  bool scaling = true;
};

// enrolled / admits.
double enrollment_rate(const Institution& institution);

// Row allocation: off-diagonal mass 1 - p_ii split in proportion to
// `chosen` (entry i ignored). Returns false, leaving `row` untouched, when
// p_ii < 1 and no competitor has positive weight.
bool allocate_row(const std::vector<double>& chosen, std::size_t i, double p_ii,
                  Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row);

struct RowEstimate {
  Eigen::RowVectorXd row;
  RowSource source = RowSource::kEnrollmentRate;
  std::vector<PairTrace> pairs;
  std::vector<std::string> warnings;
};

// Estimates row i. Throws EstimationError if the row has no competitor
// evidence, DomainError (naming the pair) if an interval cannot be inverted.
RowEstimate estimate_row(const Dataset& dataset, std::size_t i,
                         const EstimationOptions& options = {});

struct Estimate {
  TransitionMatrix matrix;
  EstimationTrace trace;
};

// All rows; failures from every row are collected into one EstimationError.
Estimate estimate_transition_matrix(const Dataset& dataset,
                                    const EstimationOptions& options = {});

// Throws InputError unless every entry is in [0, 1] and every row sums to 1
// within `tol`.
void check_row_stochastic(const Eigen::MatrixXd& p, double tol = 1e-9);

}  // namespace prefrank

#endif  // PREFRANK_ESTIMATION_HPP_
