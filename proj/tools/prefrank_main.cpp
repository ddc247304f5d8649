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

// prefrank: rank alternatives from pairwise revealed preferences.
//
//   prefrank estimate --institutions I.csv --preferences P.csv --out DIR
//   prefrank rank     --phat phat.csv
//   prefrank simulate --institutions I.csv --preferences P.csv --sims 20000
//   prefrank sensitivity | partners (--phat ... | --institutions ...)
//   prefrank scenario <id> <rate> (--phat ... | --institutions ...)
//
// Exit codes: 0 ok, 2 input, 3 estimation, 4 structure, 5 simulation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "prefrank/data_model.hpp"
#include "prefrank/equilibrium.hpp"
#include "prefrank/errors.hpp"
#include "prefrank/estimation.hpp"
#include "prefrank/matrix_io.hpp"
#include "prefrank/monte_carlo.hpp"
#include "prefrank/report.hpp"
#include "prefrank/sensitivity.hpp"

namespace fs = std::filesystem;
using namespace prefrank;

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> sims;
  std::optional<double> tol;
  std::optional<std::string> mode;
  bool no_scaling = false;
  std::optional<double> ci_level;
  std::string phat;
  std::string institutions;
  std::string preferences;
  std::string out = ".";
  unsigned workers = 0;
  bool zero_variance = false;
  bool dump_sims = false;
  std::string scenario_id;
  double scenario_rate = 0.0;
};

Config ResolveConfig(const Flags& flags) {
  Config config;
  if (auto path = resolve_config_path(flags.config))
    config = load_config(*path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.sims) config.n_sims = *flags.sims;
  if (flags.tol) config.tolerance = *flags.tol;
  if (flags.mode) config.inversion_mode = parse_inversion_mode(*flags.mode);
  if (flags.no_scaling) config.scaling_enabled = false;
  if (flags.ci_level) config.ci_level = *flags.ci_level;
  config.validate();
  return config;
}

// The matrix under analysis, from a file or freshly estimated.
struct Inputs {
  TransitionMatrix matrix;
  std::optional<Dataset> dataset;
  std::optional<EstimationTrace> trace;
  Provenance provenance;
};

Inputs LoadInputs(const Flags& flags, const Config& config, bool need_raw) {
  Inputs in;
  in.provenance.config = config;
  if (!need_raw && !flags.phat.empty()) {
    MatrixFile file = read_matrix(fs::path(flags.phat));
    in.matrix = std::move(file.matrix);
    in.provenance.inputs.push_back(flags.phat);
    in.provenance.renormalization_delta = file.renormalization_delta;
    return in;
  }
  if (flags.institutions.empty() || flags.preferences.empty()) {
    throw InputError(InputError::Kind::kInvalidArgument,
                     need_raw ? "this command needs --institutions and "
                                "--preferences"
                              : "give --phat, or --institutions and "
                                "--preferences");
  }
  in.dataset =
      load_dataset(flags.institutions, flags.preferences, config.z_quantile);
  in.provenance.inputs = {flags.institutions, flags.preferences};
  Estimate est = estimate_transition_matrix(*in.dataset, config.estimation());
  in.matrix = std::move(est.matrix);
  in.trace = std::move(est.trace);
  in.provenance.warnings = in.trace->warnings;
  return in;
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InputError(InputError::Kind::kIo, "cannot write file", path.string());
  out << content;
}

template <typename Fn>
void WriteWith(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InputError(InputError::Kind::kIo, "cannot write file", path.string());
  fn(out);
}

void Emit(const Flags& flags, const std::string& command, Json body,
          const Provenance& provenance, const std::string& text) {
  Json report;
  report["command"] = command;
  report["provenance"] = provenance_json(provenance);
  for (auto& [key, value] : body.items()) report[key] = value;
  const fs::path dir(flags.out);
  fs::create_directories(dir);
  WriteFile(dir / (command + ".json"), report.dump(2) + "\n");
  WriteFile(dir / (command + ".txt"), text);
  std::cout << text;
}

std::size_t IndexOf(const TransitionMatrix& p, const std::string& id) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p.index[k] == id) return k;
  }
  throw InputError(InputError::Kind::kUnknownId,
                   "unknown institution id '" + id + "'");
}

int RunEstimate(const Flags& flags) {
  const Config config = ResolveConfig(flags);
  Inputs in = LoadInputs(flags, config, true);
  const fs::path dir(flags.out);
  fs::create_directories(dir);
  WriteWith(dir / "phat.csv",
            [&](std::ostream& o) { write_matrix(o, in.matrix); });
  WriteWith(dir / "trace.csv", [&](std::ostream& o) {
    write_trace(o, in.matrix.index, *in.trace);
  });
  std::string text = "estimated " + std::to_string(in.matrix.size()) + "x" +
                     std::to_string(in.matrix.size()) +
                     " transition matrix -> " + (dir / "phat.csv").string() +
                     "\n";
  for (const auto& w : in.trace->warnings) text += "warning: " + w + "\n";
  Emit(flags, "estimate", {{"matrix", matrix_json(in.matrix)}}, in.provenance,
       text);
  return 0;
}

int RunRank(const Flags& flags) {
  const Config config = ResolveConfig(flags);
  Inputs in = LoadInputs(flags, config, false);
  AuthorityDistribution pi = solve_authority(in.matrix, config.solve());
  Ranking ranking = rank_from_scores(pi);
  Emit(flags, "rank", ranking_json(pi, ranking), in.provenance,
       ranking_text(pi, ranking));
  return 0;
}

int RunSimulate(const Flags& flags) {
  const Config config = ResolveConfig(flags);
  Inputs in = LoadInputs(flags, config, true);
  AuthorityDistribution point = solve_authority(in.matrix, config.solve());
  SimulationModel model = build_simulation_model(
      *in.dataset, *in.trace, config.estimation(), flags.zero_variance);
  MonteCarloOptions options;
  options.n_sims = config.n_sims;
  options.seed = config.seed;
  options.ci_level = config.ci_level;
  options.workers = flags.workers;
  options.keep_scores = flags.dump_sims;
  options.solve = config.solve();
  SimulationSummary summary = run_monte_carlo(model, options);
  if (flags.dump_sims) {
    fs::create_directories(flags.out);
    WriteWith(fs::path(flags.out) / "sims.csv",
              [&](std::ostream& o) { write_sims(o, summary); });
  }
  Json body = simulation_json(summary, point);
  body["zero_variance"] = flags.zero_variance;
  Emit(flags, "simulate", body, in.provenance, simulation_text(summary, point));
  return 0;
}

int RunSensitivity(const Flags& flags, bool partners) {
  const Config config = ResolveConfig(flags);
  Inputs in = LoadInputs(flags, config, false);
  AuthorityDistribution pi = solve_authority(in.matrix, config.solve());
  SensitivityReport report = partnership_matrix(in.matrix.entries, pi.scores);
  fs::create_directories(flags.out);
  WriteWith(fs::path(flags.out) / "sensitivity.csv", [&](std::ostream& o) {
    write_sensitivity(o, in.matrix.index, report);
  });
  const std::string text = partners ? partnership_text(in.matrix.index, report)
                                    : elasticity_text(in.matrix.index, report);
  Emit(flags, partners ? "partners" : "sensitivity",
       sensitivity_json(in.matrix.index, report), in.provenance, text);
  return 0;
}

int RunScenario(const Flags& flags) {
  const Config config = ResolveConfig(flags);
  Inputs in = LoadInputs(flags, config, false);
  const std::size_t i = IndexOf(in.matrix, flags.scenario_id);
  if (!(flags.scenario_rate > 0.0 && flags.scenario_rate < 1.0)) {
    throw InputError(InputError::Kind::kInvalidArgument,
                     "invalid rate " + std::to_string(flags.scenario_rate) +
                         ", need 0 < rate < 1");
  }
  AuthorityDistribution before = solve_authority(in.matrix, config.solve());
  ScenarioResult after =
      scenario_rerank(in.matrix, i, flags.scenario_rate, config.solve());
  Emit(flags, "scenario", scenario_json(before, after, i, flags.scenario_rate),
       in.provenance, scenario_text(before, after, i, flags.scenario_rate));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Rank alternatives by the equilibrium of a revealed-preference "
      "transition matrix."};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config, "JSON config file");
    cmd->add_option("--seed", flags.seed, "master random seed");
    cmd->add_option("--sims", flags.sims, "Monte Carlo replications");
    cmd->add_option("--tol", flags.tol, "power-iteration tolerance");
    cmd->add_option("--mode", flags.mode,
                    "interval inversion: lower-bound|length");
    cmd->add_flag("--no-scaling", flags.no_scaling, "disable interval scaling");
    cmd->add_option("--ci-level", flags.ci_level, "confidence level");
    cmd->add_option("--phat", flags.phat, "transition matrix CSV");
    cmd->add_option("--institutions", flags.institutions, "institutions CSV");
    cmd->add_option("--preferences", flags.preferences, "preferences CSV");
    cmd->add_option("--out", flags.out, "output directory")
        ->capture_default_str();
  };

  CLI::App* estimate =
      app.add_subcommand("estimate", "estimate the transition matrix");
  CLI::App* rank = app.add_subcommand("rank", "solve the equilibrium and rank");
  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo score and rank intervals");
  CLI::App* sensitivity =
      app.add_subcommand("sensitivity", "own-yield elasticities");
  CLI::App* partners =
      app.add_subcommand("partners", "cross elasticities and partnerships");
  CLI::App* scenario =
      app.add_subcommand("scenario", "re-rank after changing one yield");
  for (CLI::App* cmd :
       {estimate, rank, simulate, sensitivity, partners, scenario}) {
    add_common(cmd);
  }
  simulate->add_option("--workers", flags.workers, "threads (0 = all cores)");
  simulate->add_flag("--zero-variance", flags.zero_variance,
                     "pin every draw to its point estimate");
  simulate->add_flag("--dump-sims", flags.dump_sims, "write sims.csv");
  scenario->add_option("id", flags.scenario_id, "institution id")->required();
  scenario->add_option("rate", flags.scenario_rate, "new yield")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kInput);
  }

  try {
    if (*estimate) return RunEstimate(flags);
    if (*rank) return RunRank(flags);
    if (*simulate) return RunSimulate(flags);
    if (*sensitivity) return RunSensitivity(flags, false);
    if (*partners) return RunSensitivity(flags, true);
    if (*scenario) return RunScenario(flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kInput);
  }
  return 0;
}
