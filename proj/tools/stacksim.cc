// Copyright 2026 The Stacksim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stacksim/audit.h"
#include "stacksim/harness.h"
#include "stacksim/learners.h"
#include "stacksim/matrix_game.h"
#include "stacksim/simulation.h"
#include "stacksim/solver.h"
#include "stacksim/util.h"

namespace {

using namespace stacksim;
using nlohmann::ordered_json;

MatrixGame ResolveGameArg(const std::string& name) {
  if (name.find('/') != std::string::npos || name.ends_with(".json")) return LoadGameFile(name);
  return LoadBuiltinGame(name);
}

std::string CommitmentToString(const MixedCommitment& commitment) {
  std::string out = "[";
  for (size_t i = 0; i < commitment.probs.size(); ++i) {
    if (i) out += ", ";
    out += FormatDouble(commitment.probs[i]);
  }
  return out + "]";
}

ordered_json SolutionToJson(const StackelbergSolution& solution) {
  ordered_json doc;
  doc["kind"] = solution.kind == SolutionKind::kPure ? "pure" : "mixed";
  doc["commitment"] = solution.commitment.probs;
  doc["follower_response"] = solution.follower_response;
  doc["leader_value"] = solution.leader_value;
  doc["follower_value"] = solution.follower_value;
  doc["total_value"] = solution.total_value;
  return doc;
}

int CmdListGames() {
  for (const auto& name : BuiltinGameNames()) std::cout << name << "\n";
  return 0;
}

int CmdSolve(const std::string& game_name, bool mixed, bool normalized, bool as_json) {
  MatrixGame game = ResolveGameArg(game_name);
  if (normalized) game = Normalize(game);
  const StackelbergSolution solution = mixed ? SolveMixedStackelberg(game) : SolvePureStackelberg(game);
  if (as_json) {
    ordered_json doc = SolutionToJson(solution);
    doc["game"] = game.name;
    doc["normalized"] = normalized;
    doc["scale"] = game.scale;
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  std::cout << "game: " << game.name << (normalized ? " (normalized units)" : " (raw units)") << "\n"
            << "kind: " << (solution.kind == SolutionKind::kPure ? "pure" : "mixed") << "\n"
            << "commitment: " << CommitmentToString(solution.commitment) << "\n"
            << "follower_response: " << solution.follower_response << "\n"
            << "leader_value: " << FormatDouble(solution.leader_value) << "\n"
            << "follower_value: " << FormatDouble(solution.follower_value) << "\n"
            << "total_value: " << FormatDouble(solution.total_value) << "\n";
  return 0;
}

int CmdRun(const std::string& config_path, int workers, long seed_offset) {
  ExperimentConfig config = LoadConfigFile(config_path);
  if (workers > 0) config.workers = workers;
  if (seed_offset != 0) {
    for (auto& seed : config.seeds) seed += static_cast<uint64_t>(seed_offset);
  }
  if (config.output_dir.empty()) {
    const char* env = std::getenv("STACKSIM_OUTPUT_DIR");
    config.output_dir = env != nullptr ? env : "runs";
  }
  const auto summaries = RunExperiment(config);
  int failed = 0;
  for (const auto& summary : summaries) {
    if (!summary.error.empty()) ++failed;
  }
  std::cout << summaries.size() << " runs, " << failed << " failed; outputs in "
            << config.output_dir << "\n";
  return failed == 0 ? 0 : 1;
}

int CmdAudit(const std::string& csv_path, const std::string& game_name, const std::string& solution_mode,
             double epsilon, bool as_json, const std::string& series_path) {
  std::string meta_path;
  if (csv_path.ends_with(".csv")) meta_path = csv_path.substr(0, csv_path.size() - 4) + ".meta.json";
  Trajectory trajectory = ReadTrajectoryCsv(csv_path, meta_path);
  const std::string resolved_name = !game_name.empty() ? game_name : trajectory.game_name;
  if (resolved_name.empty()) {
    throw std::invalid_argument("no game recorded in sidecar; pass --game");
  }
  MatrixGame game = ResolveGameArg(resolved_name);
  if (trajectory.normalized) game = Normalize(game);
  if (trajectory.game_name.empty()) trajectory.game_name = game.name;

  const RegretReport follower_report = FollowerRegret(trajectory, game);
  const SublinearityVerdict verdict = ClassifySublinear(follower_report.regret_series);

  ordered_json doc;
  doc["game"] = game.name;
  doc["rounds"] = trajectory.records.size();
  doc["scale"] = game.scale;
  doc["follower_regret"] = {{"achieved", follower_report.achieved},
                            {"best_dynamic", follower_report.best_dynamic},
                            {"best_fixed", follower_report.best_fixed},
                            {"dynamic_regret", follower_report.dynamic_regret},
                            {"external_regret", follower_report.external_regret},
                            {"slope", verdict.slope},
                            {"is_sublinear", verdict.is_sublinear},
                            {"insufficient_data", verdict.insufficient_data}};

  GapReport gap;
  bool have_gap = false;
  if (solution_mode != "none" && game.num_leader_actions == 2) {
    const StackelbergSolution mixed = SolveMixedStackelberg(game);
    gap = StackelbergGap(trajectory, mixed, epsilon);
    const GapDecomposition decomposition = GapDecompose(trajectory, mixed);
    doc["gap"] = {{"stackelberg_total", gap.stackelberg_total},
                  {"final_average_gap", gap.final_average_gap},
                  {"epsilon", gap.epsilon},
                  {"within_bound", gap.within_bound},
                  {"leader_regret_vs_equilibrium", decomposition.leader_regret},
                  {"follower_regret_vs_equilibrium", decomposition.follower_regret},
                  {"decomposition_bound_holds", decomposition.bound_holds}};
    have_gap = true;
  }

  if (!series_path.empty()) {
    std::string csv = have_gap ? "t,dynamic_regret,gap\n" : "t,dynamic_regret\n";
    for (size_t t = 0; t < follower_report.regret_series.size(); ++t) {
      csv += std::to_string(t) + "," + FormatDouble(follower_report.regret_series[t]);
      if (have_gap) csv += "," + FormatDouble(gap.gap_series[t]);
      csv += "\n";
    }
    WriteTextFileAtomic(series_path, csv);
  }

  if (as_json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "game: " << game.name << " rounds: " << trajectory.records.size() << "\n"
              << "follower dynamic regret: " << FormatDouble(follower_report.dynamic_regret)
              << " (external " << FormatDouble(follower_report.external_regret) << ")\n"
              << "regret slope: " << FormatDouble(verdict.slope)
              << (verdict.is_sublinear ? " (sublinear)" : " (NOT sublinear)") << "\n";
    if (have_gap) {
      std::cout << "final average gap: " << FormatDouble(gap.final_average_gap) << " vs epsilon "
                << FormatDouble(gap.epsilon) << (gap.within_bound ? " (within bound)" : " (exceeds bound)")
                << "\n";
    }
  }
  return 0;
}

int CmdPlot(const std::string& runs_dir, std::string out_dir) {
  if (out_dir.empty()) out_dir = runs_dir;
  const auto summaries = LoadSummaries(runs_dir);
  const int files = RenderCurves(summaries, out_dir);
  std::cout << files << " SVG file(s) written to " << out_dir << "\n";
  return 0;
}

int CmdReport(const std::string& runs_dir, bool as_json) {
  const auto summaries = LoadSummaries(runs_dir);
  std::cout << (as_json ? ReportTableJson(summaries) : ReportTableText(summaries));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stackelberg matrix-game simulator, solver, and regret audit toolkit"};
  app.require_subcommand(1);

  app.add_subcommand("list-games", "List the built-in games");

  auto* solve = app.add_subcommand("solve", "Solve a game for its Stackelberg commitment");
  std::string solve_game;
  bool solve_mixed = false, solve_normalized = false, solve_json = false;
  solve->add_option("game", solve_game, "Built-in game name or JSON game file")->required();
  solve->add_flag("--mixed", solve_mixed, "Optimal mixed commitment instead of pure");
  solve->add_flag("--normalized", solve_normalized, "Solve the normalized game");
  solve->add_flag("--json", solve_json, "Emit JSON");

  auto* run = app.add_subcommand("run", "Run an experiment grid from a config file");
  std::string run_config;
  int run_workers = 0;
  long run_seed_offset = 0;
  run->add_option("--config", run_config, "Experiment config JSON")->required();
  run->add_option("--workers", run_workers, "Parallel workers (overrides config)");
  run->add_option("--seed-offset", run_seed_offset, "Offset added to every configured seed");

  auto* audit = app.add_subcommand("audit", "Audit a recorded trajectory");
  std::string audit_csv, audit_game, audit_solution = "auto", audit_series;
  double audit_epsilon = 0.05;
  bool audit_json = false;
  audit->add_option("trajectory", audit_csv, "Trajectory CSV")->required();
  audit->add_option("--game", audit_game, "Game name or JSON file (default: sidecar metadata)");
  audit->add_option("--solution", audit_solution, "auto|none: gap audit against the solved equilibrium");
  audit->add_option("--epsilon", audit_epsilon, "Average-gap tolerance");
  audit->add_flag("--json", audit_json, "Emit JSON");
  audit->add_option("--series", audit_series, "Also dump prefix series CSV to this path");

  auto* plot = app.add_subcommand("plot", "Render per-game reward curves from run summaries");
  std::string plot_runs, plot_out;
  plot->add_option("--runs", plot_runs, "Directory with *.summary.json files")->required();
  plot->add_option("--out", plot_out, "Output directory (default: runs directory)");

  auto* report = app.add_subcommand("report", "Aggregate run summaries into a table");
  std::string report_runs;
  bool report_json = false;
  report->add_option("--runs", report_runs, "Directory with *.summary.json files")->required();
  report->add_flag("--json", report_json, "Emit JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-games")) return CmdListGames();
    if (app.got_subcommand("solve")) return CmdSolve(solve_game, solve_mixed, solve_normalized, solve_json);
    if (app.got_subcommand("run")) return CmdRun(run_config, run_workers, run_seed_offset);
    if (app.got_subcommand("audit")) {
      return CmdAudit(audit_csv, audit_game, audit_solution, audit_epsilon, audit_json, audit_series);
    }
    if (app.got_subcommand("plot")) return CmdPlot(plot_runs, plot_out);
    if (app.got_subcommand("report")) return CmdReport(report_runs, report_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
