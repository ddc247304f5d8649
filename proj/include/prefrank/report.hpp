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

#ifndef PREFRANK_REPORT_HPP_
#define PREFRANK_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "prefrank/equilibrium.hpp"
#include "prefrank/estimation.hpp"
#include "prefrank/monte_carlo.hpp"
#include "prefrank/sensitivity.hpp"

namespace prefrank {

inline constexpr char kVersion[] = "0.1.0";

using Json = nlohmann::ordered_json;

struct Config {
  double z_quantile = kDefaultZ;
  double tolerance = 1e-9;
  std::int64_t max_iter = 1'000'000;
  std::int64_t n_sims = 20'000;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  InversionMode inversion_mode = InversionMode::kLowerBound;
  bool scaling_enabled = true;

  // Throws InputError on an out-of-range field.
  void validate() const;
  EstimationOptions estimation() const;
  SolveOptions solve() const;
};

InversionMode parse_inversion_mode(const std::string& text);
std::string to_string(InversionMode mode);

// Overlays the keys present in `json` (same names as the Config fields) on
// `base`. Unknown keys and wrong types are InputErrors.
Config config_from_json(const nlohmann::json& json, Config base = {});
Config load_config(const std::filesystem::path& path);
Json config_to_json(const Config& config);

// `flag` if given, else $PREFRANK_CONFIG if set.
std::optional<std::filesystem::path> resolve_config_path(
    const std::optional<std::string>& flag);

// Lowercase hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

struct Provenance {
  std::vector<std::filesystem::path> inputs;
  Config config;
  std::optional<double> renormalization_delta;
  std::vector<std::string> warnings;
};

Json provenance_json(const Provenance& provenance);

// Sections of a report. Each has a JSON form (full precision) and a text
// form (4 decimals for scores, 3 for elasticities).
Json matrix_json(const TransitionMatrix& p);
Json ranking_json(const AuthorityDistribution& pi, const Ranking& ranking);
std::string ranking_text(const AuthorityDistribution& pi,
                         const Ranking& ranking);

Json simulation_json(const SimulationSummary& summary,
                     const AuthorityDistribution& point);
std::string simulation_text(const SimulationSummary& summary,
                            const AuthorityDistribution& point);

Json sensitivity_json(const std::vector<std::string>& ids,
                      const SensitivityReport& report);
std::string elasticity_text(const std::vector<std::string>& ids,
                            const SensitivityReport& report);
std::string partnership_text(const std::vector<std::string>& ids,
                             const SensitivityReport& report);

Json scenario_json(const AuthorityDistribution& before,
                   const ScenarioResult& after, std::size_t i, double new_pii);
std::string scenario_text(const AuthorityDistribution& before,
                          const ScenarioResult& after, std::size_t i,
                          double new_pii);

std::string structure_text(const StructureReport& report,
                           const std::vector<std::string>& ids);

}  // namespace prefrank

#endif  // PREFRANK_REPORT_HPP_
