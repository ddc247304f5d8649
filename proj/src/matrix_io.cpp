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

#include "prefrank/matrix_io.hpp"

#include <cmath>
#include <fstream>

#include "prefrank/csv.hpp"
#include "prefrank/errors.hpp"

namespace prefrank {
namespace {

using Kind = InputError::Kind;

}  // namespace

MatrixFile read_matrix(std::istream& in, const std::string& source,
                       double slack) {
  int line_number = 0;
  std::string line;
  if (!csv::NextLine(in, line, line_number)) {
    throw InputError(Kind::kHeader, "empty matrix file", source, 1);
  }
  std::vector<std::string> header = csv::SplitRecord(line);
  if (header.size() < 2) {
    throw InputError(Kind::kHeader, "expected header 'id,<ids...>'", source,
                     line_number);
  }
  MatrixFile out;
  out.matrix.index.assign(header.begin() + 1, header.end());
  const std::size_t n = out.matrix.index.size();
  const auto nn = static_cast<Eigen::Index>(n);
  out.matrix.entries.setZero(nn, nn);
  out.matrix.diagonal_source.assign(n, RowSource::kSupplied);

  std::size_t row = 0;
  while (csv::NextLine(in, line, line_number)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> fields = csv::SplitRecord(line);
    if (fields.size() != n + 1) {
      throw InputError(Kind::kMalformedRow,
                       "expected " + std::to_string(n + 1) + " fields", source,
                       line_number);
    }
    if (row >= n) {
      throw InputError(Kind::kMalformedRow, "more rows than columns", source,
                       line_number);
    }
    if (fields[0] != out.matrix.index[row]) {
      throw InputError(Kind::kMalformedRow,
                       "row id '" + fields[0] + "' does not match column '" +
                           out.matrix.index[row] + "'",
                       source, line_number);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      auto v = csv::ParseDouble(fields[k + 1]);
      if (!v || !(*v >= 0.0 && *v <= 1.0)) {
        throw InputError(Kind::kOutOfRange,
                         "entry for column '" + out.matrix.index[k] +
                             "' is not a probability",
                         source, line_number);
      }
      out.matrix.entries(static_cast<Eigen::Index>(row),
                         static_cast<Eigen::Index>(k)) = *v;
      sum += *v;
    }
    const double delta = std::abs(sum - 1.0);
    if (delta > slack) {
      throw InputError(Kind::kOutOfRange,
                       "row sums to " + csv::FormatDouble(sum) +
                           ", too far from 1 to renormalize",
                       source, line_number);
    }
    out.renormalization_delta = std::max(out.renormalization_delta, delta);
    if (sum != 1.0)
      out.matrix.entries.row(static_cast<Eigen::Index>(row)) /= sum;
    ++row;
  }
  if (row != n) {
    throw InputError(
        Kind::kMalformedRow,
        "expected " + std::to_string(n) + " rows, found " + std::to_string(row),
        source, line_number);
  }
  return out;
}

MatrixFile read_matrix(const std::filesystem::path& path, double slack) {
  std::ifstream in(path);
  if (!in) throw InputError(Kind::kIo, "cannot open file", path.string());
  return read_matrix(in, path.string(), slack);
}

void write_matrix(std::ostream& out, const TransitionMatrix& p) {
  out << "id";
  for (const auto& id : p.index) out << ',' << csv::QuoteField(id);
  out << '\n';
  for (std::size_t i = 0; i < p.size(); ++i) {
    out << csv::QuoteField(p.index[i]);
    for (std::size_t j = 0; j < p.size(); ++j) {
      out << ','
          << csv::FormatDouble(p.entries(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j)));
    }
    out << '\n';
  }
}

void write_trace(std::ostream& out, const std::vector<std::string>& ids,
                 const EstimationTrace& trace) {
  out << "from_id,to_id,raw_M,scaled_M,N,scale_factor\n";
  for (const PairTrace& t : trace.pairs) {
    out << csv::QuoteField(ids.at(t.from)) << ','
        << csv::QuoteField(ids.at(t.to)) << ',' << csv::FormatDouble(t.raw_size)
        << ',' << csv::FormatDouble(t.scaled_size) << ','
        << csv::FormatDouble(t.chosen) << ','
        << csv::FormatDouble(t.scale_factor) << '\n';
  }
}

void write_sims(std::ostream& out, const SimulationSummary& summary) {
  out << "replication,institution,score\n";
  for (Eigen::Index rep = 0; rep < summary.scores.rows(); ++rep) {
    if (std::isnan(summary.scores(rep, 0))) continue;
    for (std::size_t k = 0; k < summary.index.size(); ++k) {
      out << rep << ',' << csv::QuoteField(summary.index[k]) << ','
          << csv::FormatDouble(
                 summary.scores(rep, static_cast<Eigen::Index>(k)))
          << '\n';
    }
  }
}

void write_sensitivity(std::ostream& out, const std::vector<std::string>& ids,
                       const SensitivityReport& report) {
  out << "i,j,d_pi_i,d_pi_j,elasticity_i,elasticity_j,partner\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (i == j) continue;
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      out << csv::QuoteField(ids[i]) << ',' << csv::QuoteField(ids[j]) << ',';
      if (!report.applicable[i][j]) {
        out << ",,,,na\n";
        continue;
      }
      out << csv::FormatDouble(report.d_target(a, b)) << ','
          << csv::FormatDouble(report.d_partner(a, b)) << ','
          << csv::FormatDouble(report.cross_elasticities(a, b)) << ','
          << csv::FormatDouble(report.partner_elasticities(a, b)) << ','
          << (report.partnership[i][j] ? "true" : "false") << '\n';
    }
  }
}

}  // namespace prefrank
