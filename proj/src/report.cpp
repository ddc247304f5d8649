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

#include "prefrank/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include "prefrank/errors.hpp"

namespace prefrank {
namespace {

using Kind = InputError::Kind;

std::string Fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::size_t Width(const std::vector<std::string>& ids) {
  std::size_t w = 2;
  for (const auto& id : ids) w = std::max(w, id.size());
  return w;
}

Json Vector(const Eigen::Ref<const Eigen::VectorXd>& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

Json Matrix(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out.push_back(Vector(m.row(r).transpose()));
  }
  return out;
}

template <typename T>
T Field(const nlohmann::json& json, const char* key) {
  try {
    return json.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(Kind::kInvalidArgument,
                     std::string("config field '") + key + "' has wrong type");
  }
}

}  // namespace

void Config::validate() const {
  auto fail = [](const std::string& what) {
    throw InputError(Kind::kInvalidArgument, "invalid config: " + what);
  };
  if (!(z_quantile > 0.0)) fail("z_quantile must be positive");
  if (!(tolerance > 0.0)) fail("tolerance must be positive");
  if (max_iter < 1) fail("max_iter must be at least 1");
  if (n_sims < 2) fail("n_sims must be at least 2");
  if (!(ci_level > 0.0 && ci_level < 1.0)) fail("ci_level must be in (0, 1)");
}

EstimationOptions Config::estimation() const {
  return {z_quantile, inversion_mode, scaling_enabled};
}

SolveOptions Config::solve() const { return {tolerance, max_iter}; }

InversionMode parse_inversion_mode(const std::string& text) {
  if (text == "lower-bound") return InversionMode::kLowerBound;
  if (text == "length") return InversionMode::kLength;
  throw InputError(
      Kind::kInvalidArgument,
      "unknown inversion mode '" + text + "' (expected lower-bound or length)");
}

std::string to_string(InversionMode mode) {
  return mode == InversionMode::kLength ? "length" : "lower-bound";
}

Config config_from_json(const nlohmann::json& json, Config base) {
  if (!json.is_object()) {
    throw InputError(Kind::kInvalidArgument, "config must be a JSON object");
  }
  for (const auto& [key, value] : json.items()) {
    if (key == "z_quantile") {
      base.z_quantile = Field<double>(json, "z_quantile");
    } else if (key == "tolerance") {
      base.tolerance = Field<double>(json, "tolerance");
    } else if (key == "max_iter") {
      base.max_iter = Field<std::int64_t>(json, "max_iter");
    } else if (key == "n_sims") {
      base.n_sims = Field<std::int64_t>(json, "n_sims");
    } else if (key == "seed") {
      base.seed = Field<std::uint64_t>(json, "seed");
    } else if (key == "ci_level") {
      base.ci_level = Field<double>(json, "ci_level");
    } else if (key == "inversion_mode") {
      base.inversion_mode =
          parse_inversion_mode(Field<std::string>(json, "inversion_mode"));
    } else if (key == "scaling_enabled") {
      base.scaling_enabled = Field<bool>(json, "scaling_enabled");
    } else {
      throw InputError(Kind::kInvalidArgument,
                       "unknown config field '" + key + "'");
    }
  }
  base.validate();
  return base;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(Kind::kIo, "cannot open config", path.string());
  nlohmann::json json;
  try {
    in >> json;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(Kind::kMalformedRow, e.what(), path.string());
  }
  return config_from_json(json);
}

Json config_to_json(const Config& config) {
  Json out;
  out["z_quantile"] = config.z_quantile;
  out["tolerance"] = config.tolerance;
  out["max_iter"] = config.max_iter;
  out["n_sims"] = config.n_sims;
  out["seed"] = config.seed;
  out["ci_level"] = config.ci_level;
  out["inversion_mode"] = to_string(config.inversion_mode);
  out["scaling_enabled"] = config.scaling_enabled;
  return out;
}

std::optional<std::filesystem::path> resolve_config_path(
    const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return std::filesystem::path(*flag);
  if (const char* env = std::getenv("PREFRANK_CONFIG"); env && *env) {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(Kind::kIo, "cannot open file", path.string());
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw InputError(Kind::kIo, "SHA-256 failed", path.string());
  }
  std::ostringstream hex;
  for (unsigned int k = 0; k < length; ++k) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[k]);
  }
  return hex.str();
}

Json provenance_json(const Provenance& provenance) {
  Json out;
  Json inputs = Json::array();
  for (const auto& path : provenance.inputs) {
    inputs.push_back({{"path", path.string()}, {"sha256", sha256_file(path)}});
  }
  out["tool"] = "prefrank";
  out["version"] = kVersion;
  out["inputs"] = inputs;
  out["config"] = config_to_json(provenance.config);
  out["seed"] = provenance.config.seed;
  if (provenance.renormalization_delta) {
    out["renormalization_delta"] = *provenance.renormalization_delta;
  }
  out["warnings"] = provenance.warnings;
  return out;
}

Json matrix_json(const TransitionMatrix& p) {
  return {{"index", p.index}, {"entries", Matrix(p.entries)}};
}

Json ranking_json(const AuthorityDistribution& pi, const Ranking& ranking) {
  Json rows = Json::array();
  for (const auto& e : ranking.entries) {
    rows.push_back({{"rank", e.rank}, {"id", e.id}, {"score", e.score}});
  }
  return {{"ranking", rows},
          {"tie_groups", ranking.tie_groups},
          {"iterations", pi.iterations},
          {"residual", pi.residual}};
}

std::string ranking_text(const AuthorityDistribution& pi,
                         const Ranking& ranking) {
  const std::size_t w = Width(pi.index);
  std::ostringstream out;
  out << std::left << std::setw(6) << "rank"
      << std::setw(static_cast<int>(w + 2)) << "id" << "score\n";
  for (const auto& e : ranking.entries) {
    out << std::left << std::setw(6) << e.rank
        << std::setw(static_cast<int>(w + 2)) << e.id << Fixed(e.score, 4)
        << '\n';
  }
  for (const auto& group : ranking.tie_groups) {
    out << "tie:";
    for (const auto& id : group) out << ' ' << id;
    out << '\n';
  }
  out << "iterations " << pi.iterations << ", residual " << std::scientific
      << std::setprecision(2) << pi.residual << '\n';
  return out.str();
}

Json simulation_json(const SimulationSummary& summary,
                     const AuthorityDistribution& point) {
  const std::vector<int> ranks = competition_ranks(point.scores);
  Json rows = Json::array();
  for (std::size_t k = 0; k < summary.index.size(); ++k) {
    const auto& s = summary.institutions[k];
    rows.push_back({{"id", summary.index[k]},
                    {"score", point.scores(static_cast<Eigen::Index>(k))},
                    {"rank", ranks[k]},
                    {"score_mean", s.score_mean},
                    {"score_median", s.score_median},
                    {"score_ci", {s.score_ci_lower, s.score_ci_upper}},
                    {"rank_ci", {s.rank_ci_lower, s.rank_ci_upper}}});
  }
  return {{"n_sims", summary.n_sims},
          {"n_failed", summary.n_failed},
          {"seed", summary.seed},
          {"ci_level", summary.ci_level},
          {"institutions", rows}};
}

std::string simulation_text(const SimulationSummary& summary,
                            const AuthorityDistribution& point) {
  const std::vector<int> ranks = competition_ranks(point.scores);
  const int w = static_cast<int>(Width(summary.index) + 2);
  std::ostringstream out;
  out << std::left << std::setw(w) << "id" << std::setw(8) << "score"
      << std::setw(8) << "mean" << std::setw(8) << "median" << std::setw(18)
      << "score ci" << std::setw(6) << "rank" << "rank ci\n";
  for (std::size_t k = 0; k < summary.index.size(); ++k) {
    const auto& s = summary.institutions[k];
    out << std::left << std::setw(w) << summary.index[k] << std::setw(8)
        << Fixed(point.scores(static_cast<Eigen::Index>(k)), 4) << std::setw(8)
        << Fixed(s.score_mean, 4) << std::setw(8) << Fixed(s.score_median, 4)
        << std::setw(18)
        << ("[" + Fixed(s.score_ci_lower, 4) + ", " +
            Fixed(s.score_ci_upper, 4) + "]")
        << std::setw(6) << ranks[k] << "[" << s.rank_ci_lower << ","
        << s.rank_ci_upper << "]\n";
  }
  out << summary.n_sims << " replications, " << summary.n_failed
      << " failed, seed " << summary.seed << '\n';
  return out.str();
}

Json sensitivity_json(const std::vector<std::string>& ids,
                      const SensitivityReport& report) {
  const std::size_t n = ids.size();
  Json pairs = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      Json cell = {{"i", ids[i]},
                   {"j", ids[j]},
                   {"applicable", static_cast<bool>(report.applicable[i][j])}};
      if (report.applicable[i][j]) {
        cell["d_pi_i"] = report.d_target(a, b);
        cell["d_pi_j"] = report.d_partner(a, b);
        cell["elasticity_i"] = report.cross_elasticities(a, b);
        cell["elasticity_j"] = report.partner_elasticities(a, b);
        cell["partner"] = static_cast<bool>(report.partnership[i][j]);
      }
      pairs.push_back(cell);
    }
  }
  return {{"index", ids},
          {"self_derivatives", Vector(report.self_derivatives)},
          {"self_elasticities", Vector(report.self_elasticities)},
          {"cross_elasticities", Matrix(report.cross_elasticities)},
          {"pairs", pairs}};
}

std::string elasticity_text(const std::vector<std::string>& ids,
                            const SensitivityReport& report) {
  const int w = static_cast<int>(Width(ids) + 2);
  std::ostringstream out;
  out << std::left << std::setw(w) << "id" << std::setw(12) << "d pi/d Pii"
      << "elasticity\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << std::left << std::setw(w) << ids[i] << std::setw(12)
        << Fixed(report.self_derivatives(k), 4)
        << Fixed(report.self_elasticities(k), 3) << '\n';
  }
  return out.str();
}

std::string partnership_text(const std::vector<std::string>& ids,
                             const SensitivityReport& report) {
  const std::size_t n = ids.size();
  const int w = static_cast<int>(std::max<std::size_t>(Width(ids), 11) + 1);
  std::ostringstream out;
  out << "cell (i, j): % response of i / % response of j to a 1% rise in "
         "P[j][i];\nfilled where j also gains, diagonal = own elasticity, "
         "n/a = degenerate\n";
  out << std::left << std::setw(w) << "i \\ j";
  for (const auto& id : ids) out << std::setw(w) << id;
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out << std::left << std::setw(w) << ids[i];
    for (std::size_t j = 0; j < n; ++j) {
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      std::string cell;
      if (i == j) {
        cell = Fixed(report.self_elasticities(a), 3);
      } else if (!report.applicable[i][j]) {
        cell = "n/a";
      } else if (report.partnership[i][j]) {
        cell = Fixed(report.cross_elasticities(a, b), 3) + "/" +
               Fixed(report.partner_elasticities(a, b), 3);
      }
      out << std::setw(w) << cell;
    }
    out << '\n';
  }
  return out.str();
}

Json scenario_json(const AuthorityDistribution& before,
                   const ScenarioResult& after, std::size_t i, double new_pii) {
  Json rows = Json::array();
  const std::vector<int> r0 = competition_ranks(before.scores);
  const std::vector<int> r1 = competition_ranks(after.pi.scores);
  for (std::size_t k = 0; k < after.matrix.index.size(); ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    rows.push_back(
        {{"id", after.matrix.index[k]},
         {"score_before", before.scores(c)},
         {"score_after", after.pi.scores(c)},
         {"percent_change",
          100.0 * (after.pi.scores(c) - before.scores(c)) / before.scores(c)},
         {"rank_before", r0[k]},
         {"rank_after", r1[k]}});
  }
  return {{"institution", after.matrix.index[i]},
          {"new_rate", new_pii},
          {"matrix", matrix_json(after.matrix)},
          {"iterations", after.pi.iterations},
          {"residual", after.pi.residual},
          {"scores", rows}};
}

std::string scenario_text(const AuthorityDistribution& before,
                          const ScenarioResult& after, std::size_t i,
                          double new_pii) {
  const int w = static_cast<int>(Width(after.matrix.index) + 2);
  const std::vector<int> r0 = competition_ranks(before.scores);
  const std::vector<int> r1 = competition_ranks(after.pi.scores);
  std::ostringstream out;
  out << "scenario: " << after.matrix.index[i] << " rate -> "
      << Fixed(new_pii, 4) << '\n';
  out << std::left << std::setw(w) << "id" << std::setw(8) << "before"
      << std::setw(8) << "after" << std::setw(10) << "change" << "rank\n";
  for (std::size_t k = 0; k < after.matrix.index.size(); ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    const double change =
        100.0 * (after.pi.scores(c) - before.scores(c)) / before.scores(c);
    out << std::left << std::setw(w) << after.matrix.index[k] << std::setw(8)
        << Fixed(before.scores(c), 4) << std::setw(8)
        << Fixed(after.pi.scores(c), 4) << std::setw(10)
        << (Fixed(change, 1) + "%") << r0[k] << " -> " << r1[k] << '\n';
  }
  return out.str();
}

std::string structure_text(const StructureReport& report,
                           const std::vector<std::string>& ids) {
  return report.describe(ids) + '\n';
}

}  // namespace prefrank
