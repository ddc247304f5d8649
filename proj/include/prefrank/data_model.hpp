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

#ifndef PREFRANK_DATA_MODEL_HPP_
#define PREFRANK_DATA_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prefrank/wilson.hpp"

namespace prefrank {

struct Institution {
  std::string id;
  std::string name;
  std::int64_t admits = 1;
  std::int64_t enrolled = 0;

  bool operator==(const Institution&) const = default;
};

// Share of the common i/j admitted pool that chose `to_id`.
struct PreferenceObservation {
  std::string from_id;
  std::string to_id;
  double share = 0.5;
  double ci_lower = 0.0;
  double ci_upper = 1.0;
  std::optional<std::int64_t> survey_size;
  // True when synthesized from the reverse-direction row.
  bool mirrored = false;

  bool operator==(const PreferenceObservation&) const = default;
};

// Reverse direction: share 1 - s, interval [1 - upper, 1 - lower].
PreferenceObservation mirror(const PreferenceObservation& obs);

class Dataset {
 public:
  Dataset(std::vector<Institution> institutions,
          std::vector<PreferenceObservation> observations);

  const std::vector<Institution>& institutions() const { return institutions_; }
  // Observations as supplied (not mirrored).
  const std::vector<PreferenceObservation>& observations() const {
    return observations_;
  }
  std::size_t size() const { return institutions_.size(); }

  // Matrix index of `id`, or nullopt.
  std::optional<std::size_t> index_of(const std::string& id) const;

  // Directed observation (i, j) by matrix index, including mirrored ones.
  const PreferenceObservation* find(std::size_t i, std::size_t j) const;

  // Every directed entry, keyed by (from, to) index.
  const std::map<std::pair<std::size_t, std::size_t>, PreferenceObservation>&
  pair_index() const {
    return pair_index_;
  }

 private:
  std::vector<Institution> institutions_;
  std::vector<PreferenceObservation> observations_;
  std::unordered_map<std::string, std::size_t> id_index_;
  std::map<std::pair<std::size_t, std::size_t>, PreferenceObservation>
      pair_index_;
};

std::vector<Institution> parse_institutions(const std::filesystem::path& path);
std::vector<Institution> parse_institutions(std::istream& in,
                                            const std::string& source);

// `z` is used to check rows that carry a survey size against their interval.
std::vector<PreferenceObservation> parse_preferences(
    const std::filesystem::path& path, double z = kDefaultZ);
std::vector<PreferenceObservation> parse_preferences(std::istream& in,
                                                     const std::string& source,
                                                     double z = kDefaultZ);

// Builds the pair index, mirroring one-sided observations. Throws InputError
// on unknown ids, duplicate ordered pairs or contradictory reciprocals.
Dataset validate_dataset(std::vector<Institution> institutions,
                         std::vector<PreferenceObservation> observations);

Dataset load_dataset(const std::filesystem::path& institutions,
                     const std::filesystem::path& preferences,
                     double z = kDefaultZ);

void write_institutions(std::ostream& out,
                        const std::vector<Institution>& institutions);
void write_preferences(std::ostream& out,
                       const std::vector<PreferenceObservation>& observations);

}  // namespace prefrank

#endif  // PREFRANK_DATA_MODEL_HPP_
