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

#ifndef PREFRANK_MATRIX_IO_HPP_
#define PREFRANK_MATRIX_IO_HPP_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "prefrank/estimation.hpp"
#include "prefrank/monte_carlo.hpp"
#include "prefrank/sensitivity.hpp"

namespace prefrank {

struct MatrixFile {
  TransitionMatrix matrix;
  // Largest |row sum - 1| before renormalization.
  double renormalization_delta = 0.0;
};

// Square matrix with a header row `id,<ids>` and a leading id column in the
// same order. Rows within `slack` of unit sum are renormalized; anything
// further off is an InputError.
MatrixFile read_matrix(std::istream& in, const std::string& source,
                       double slack = 1e-3);
MatrixFile read_matrix(const std::filesystem::path& path, double slack = 1e-3);

void write_matrix(std::ostream& out, const TransitionMatrix& p);

// from_id,to_id,raw_M,scaled_M,N,scale_factor
void write_trace(std::ostream& out, const std::vector<std::string>& ids,
                 const EstimationTrace& trace);

// replication,institution,score; failed replications are skipped.
void write_sims(std::ostream& out, const SimulationSummary& summary);

// i,j,d_pi_i,d_pi_j,elasticity_i,elasticity_j,partner for every j != i, where
// the shock is to P_ji. Non-applicable pairs have empty numbers and "na".
void write_sensitivity(std::ostream& out, const std::vector<std::string>& ids,
                       const SensitivityReport& report);

}  // namespace prefrank

#endif  // PREFRANK_MATRIX_IO_HPP_
