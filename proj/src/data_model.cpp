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

#include "prefrank/data_model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "prefrank/csv.hpp"
#include "prefrank/errors.hpp"

namespace prefrank {
namespace {

using Kind = InputError::Kind;

constexpr char kInstitutionsHeader[] = "id,name,admits,enrolled";
constexpr char kPreferencesHeader[] =
    "from_id,to_id,share,ci_lower,ci_upper,survey_size";
constexpr double kReciprocalTolerance = 1e-9;
constexpr double kIntervalTolerance = 1e-6;

void ExpectHeader(std::istream& in, const std::string& expected,
                  const std::string& source, int& line_number) {
  std::string line;
  if (!csv::NextLine(in, line, line_number)) {
    throw InputError(Kind::kHeader,
                     "empty file, expected header '" + expected + "'", source,
                     1);
  }
  std::string joined;
  for (const auto& field : csv::SplitRecord(line)) {
    if (!joined.empty()) joined += ',';
    joined += field;
  }
  if (joined != expected) {
    throw InputError(Kind::kHeader, "expected header '" + expected + "'",
                     source, line_number);
  }
}

bool IsBlank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::int64_t RequireInt(const std::string& text, const char* field,
                        const std::string& source, int line) {
  auto value = csv::ParseInt(text);
  if (!value) {
    throw InputError(Kind::kNonInteger,
                     std::string(field) + " is not an integer ('" + text + "')",
                     source, line);
  }
  return *value;
}

double RequireDouble(const std::string& text, const char* field,
                     const std::string& source, int line) {
  auto value = csv::ParseDouble(text);
  if (!value || !std::isfinite(*value)) {
    throw InputError(Kind::kNonDecimal,
                     std::string(field) + " is not a decimal ('" + text + "')",
                     source, line);
  }
  return *value;
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError(Kind::kIo, "cannot open file", path.string());
  }
  return in;
}

std::string PairName(const PreferenceObservation& obs) {
  return "(" + obs.from_id + ", " + obs.to_id + ")";
}

}  // namespace

PreferenceObservation mirror(const PreferenceObservation& obs) {
  PreferenceObservation out = obs;
  std::swap(out.from_id, out.to_id);
  out.share = 1.0 - obs.share;
  out.ci_lower = 1.0 - obs.ci_upper;
  out.ci_upper = 1.0 - obs.ci_lower;
  out.mirrored = !obs.mirrored;
  return out;
}

Dataset::Dataset(std::vector<Institution> institutions,
                 std::vector<PreferenceObservation> observations)
    : institutions_(std::move(institutions)),
      observations_(std::move(observations)) {
  for (std::size_t k = 0; k < institutions_.size(); ++k) {
    if (!id_index_.emplace(institutions_[k].id, k).second) {
      throw InputError(Kind::kDuplicateId, "duplicate institution id '" +
                                               institutions_[k].id + "'");
    }
  }
  auto lookup = [&](const std::string& id, const PreferenceObservation& obs) {
    auto it = id_index_.find(id);
    if (it == id_index_.end()) {
      throw InputError(Kind::kUnknownId, "observation " + PairName(obs) +
                                             " references unknown id '" + id +
                                             "'");
    }
    return it->second;
  };
  // Supplied rows first, so a mirror never shadows a real observation.
  std::set<std::pair<std::size_t, std::size_t>> supplied;
  for (const auto& obs : observations_) {
    const std::size_t i = lookup(obs.from_id, obs);
    const std::size_t j = lookup(obs.to_id, obs);
    if (i == j) {
      throw InputError(Kind::kSelfPair, "observation " + PairName(obs) +
                                            " pairs an id with itself");
    }
    if (!supplied.emplace(i, j).second) {
      throw InputError(Kind::kDuplicatePair,
                       "duplicate observation for pair " + PairName(obs));
    }
    pair_index_.emplace(std::make_pair(i, j), obs);
  }
  for (const auto& obs : observations_) {
    const std::size_t i = id_index_.at(obs.from_id);
    const std::size_t j = id_index_.at(obs.to_id);
    auto reverse = pair_index_.find({j, i});
    if (reverse == pair_index_.end()) {
      pair_index_.emplace(std::make_pair(j, i), mirror(obs));
    } else if (std::abs(obs.share + reverse->second.share - 1.0) >
               kReciprocalTolerance) {
      throw InputError(
          Kind::kReciprocalContradiction,
          "reciprocal contradiction: shares of " + PairName(obs) +
              " and its reverse sum to " +
              csv::FormatDouble(obs.share + reverse->second.share));
    }
  }
}

std::optional<std::size_t> Dataset::index_of(const std::string& id) const {
  auto it = id_index_.find(id);
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

const PreferenceObservation* Dataset::find(std::size_t i, std::size_t j) const {
  auto it = pair_index_.find({i, j});
  return it == pair_index_.end() ? nullptr : &it->second;
}

std::vector<Institution> parse_institutions(std::istream& in,
                                            const std::string& source) {
  int line_number = 0;
  ExpectHeader(in, kInstitutionsHeader, source, line_number);
  std::vector<Institution> out;
  std::set<std::string> seen;
  std::string line;
  while (csv::NextLine(in, line, line_number)) {
    if (IsBlank(line)) continue;
    auto fields = csv::SplitRecord(line);
    if (fields.size() != 4 || fields[0].empty()) {
      throw InputError(Kind::kMalformedRow, "malformed row, expected 4 fields",
                       source, line_number);
    }
    Institution inst;
    inst.id = fields[0];
    inst.name = fields[1];
    inst.admits = RequireInt(fields[2], "admits", source, line_number);
    inst.enrolled = RequireInt(fields[3], "enrolled", source, line_number);
    if (inst.admits < 1) {
      throw InputError(Kind::kOutOfRange, "admits must be at least 1", source,
                       line_number);
    }
    if (inst.enrolled < 0) {
      throw InputError(Kind::kOutOfRange, "enrolled must be nonnegative",
                       source, line_number);
    }
    if (inst.enrolled > inst.admits) {
      throw InputError(Kind::kEnrolledExceedsAdmits, "enrolled exceeds admits",
                       source, line_number);
    }
    if (!seen.insert(inst.id).second) {
      throw InputError(Kind::kDuplicateId, "duplicate id '" + inst.id + "'",
                       source, line_number);
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<Institution> parse_institutions(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return parse_institutions(in, path.string());
}

std::vector<PreferenceObservation> parse_preferences(std::istream& in,
                                                     const std::string& source,
                                                     double z) {
  int line_number = 0;
  ExpectHeader(in, kPreferencesHeader, source, line_number);
  std::vector<PreferenceObservation> out;
  std::string line;
  while (csv::NextLine(in, line, line_number)) {
    if (IsBlank(line)) continue;
    auto fields = csv::SplitRecord(line);
    if (fields.size() != 6 || fields[0].empty() || fields[1].empty()) {
      throw InputError(Kind::kMalformedRow, "malformed row, expected 6 fields",
                       source, line_number);
    }
    PreferenceObservation obs;
    obs.from_id = fields[0];
    obs.to_id = fields[1];
    if (obs.from_id == obs.to_id) {
      throw InputError(Kind::kSelfPair, "from_id equals to_id", source,
                       line_number);
    }
    obs.share = RequireDouble(fields[2], "share", source, line_number);
    obs.ci_lower = RequireDouble(fields[3], "ci_lower", source, line_number);
    obs.ci_upper = RequireDouble(fields[4], "ci_upper", source, line_number);
    if (!(obs.ci_lower > 0.0 && obs.ci_upper < 1.0 &&
          obs.ci_lower < obs.ci_upper)) {
      throw InputError(Kind::kBoundsOrder,
                       "bounds out of order, need 0 < ci_lower < ci_upper < 1",
                       source, line_number);
    }
    if (!(obs.share > obs.ci_lower)) {
      throw InputError(Kind::kShareBelowLower, "share below ci_lower", source,
                       line_number);
    }
    if (!(obs.share < obs.ci_upper)) {
      throw InputError(Kind::kShareAboveUpper, "share above ci_upper", source,
                       line_number);
    }
    if (fields[5].find_first_not_of(" \t") != std::string::npos) {
      const std::int64_t m =
          RequireInt(fields[5], "survey_size", source, line_number);
      if (m < 1) {
        throw InputError(Kind::kOutOfRange, "survey_size must be positive",
                         source, line_number);
      }
      const WilsonInterval w =
          wilson_interval(obs.share, static_cast<double>(m), z);
      if (std::abs(w.lower - obs.ci_lower) > kIntervalTolerance ||
          std::abs(w.upper - obs.ci_upper) > kIntervalTolerance) {
        std::ostringstream msg;
        msg << "interval [" << obs.ci_lower << ", " << obs.ci_upper
            << "] disagrees with survey_size " << m << " (expected [" << w.lower
            << ", " << w.upper << "])";
        throw InputError(Kind::kIntervalMismatch, msg.str(), source,
                         line_number);
      }
      obs.survey_size = m;
    }
    out.push_back(std::move(obs));
  }
  return out;
}

std::vector<PreferenceObservation> parse_preferences(
    const std::filesystem::path& path, double z) {
  auto in = OpenOrThrow(path);
  return parse_preferences(in, path.string(), z);
}

Dataset validate_dataset(std::vector<Institution> institutions,
                         std::vector<PreferenceObservation> observations) {
  return Dataset(std::move(institutions), std::move(observations));
}

Dataset load_dataset(const std::filesystem::path& institutions,
                     const std::filesystem::path& preferences, double z) {
  auto inst = parse_institutions(institutions);
  auto prefs = parse_preferences(preferences, z);
  return validate_dataset(std::move(inst), std::move(prefs));
}

void write_institutions(std::ostream& out,
                        const std::vector<Institution>& institutions) {
  out << kInstitutionsHeader << '\n';
  for (const auto& inst : institutions) {
    out << csv::QuoteField(inst.id) << ',' << csv::QuoteField(inst.name) << ','
        << inst.admits << ',' << inst.enrolled << '\n';
  }
}

void write_preferences(std::ostream& out,
                       const std::vector<PreferenceObservation>& observations) {
  out << kPreferencesHeader << '\n';
  for (const auto& obs : observations) {
    out << csv::QuoteField(obs.from_id) << ',' << csv::QuoteField(obs.to_id)
        << ',' << csv::FormatDouble(obs.share) << ','
        << csv::FormatDouble(obs.ci_lower) << ','
        << csv::FormatDouble(obs.ci_upper) << ',';
    if (obs.survey_size) out << *obs.survey_size;
    out << '\n';
  }
}

}  // namespace prefrank
