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

#ifndef STACKSIM_HARNESS_H_
#define STACKSIM_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stacksim/audit.h"
#include "stacksim/learners.h"
#include "stacksim/simulation.h"

namespace stacksim {

struct LeaderSpec {
  LeaderAlgorithm algorithm = LeaderAlgorithm::kExp3CommitmentGrid;
  std::vector<double> commitment;  // fixed_commitment
  int grid_size = 101;             // exp3_commitment_grid
  std::optional<double> exploration;
  double step_size_scale = 4.0;
  double epsilon = 0.1;  // q_memory
  double learning_rate = 0.1;
};

struct FollowerSpec {
  FollowerAlgorithm algorithm = FollowerAlgorithm::kHedge;
  std::optional<double> step_size;
  std::optional<double> exploration;
  double learning_rate = 0.1;
};

// Mirrors the JSON config document field for field. The grid executed is
// games x schedules x leader_memory x seeds.
struct ExperimentConfig {
  std::vector<std::string> games;  // "all" in JSON expands to the builtins
  std::vector<ScheduleKind> schedules = {ScheduleKind::kAlways};
  int k = 100;
  int epoch_length = 100;
  long rounds = 100000;
  std::vector<uint64_t> seeds = {0};
  LeaderSpec leader;
  FollowerSpec follower;
  // Follower substituted on the `never` schedule: the constraint is never
  // enforced there, so an ordinary learner plays instead and keeps learning
  // every round.
  FollowerSpec baseline_follower{FollowerAlgorithm::kGreedyQ, std::nullopt, std::nullopt, 0.1};
  std::vector<int> leader_memory = {0, 1};
  double epsilon = 0.05;
  std::string output_dir;
  int workers = 1;
  bool write_trajectories = true;
  // Audits reward-averageness against a shadow episode that reuses the
  // leader substream with a different follower substream.
  bool reward_average_shadow = true;
};

ExperimentConfig ParseConfig(const std::string& json_text);
ExperimentConfig LoadConfigFile(const std::string& path);

struct RunKey {
  std::string game;
  ScheduleKind schedule = ScheduleKind::kAlways;
  int memory = 0;
  uint64_t seed = 0;
};

struct RunSummary {
  RunKey key;
  double scale = 1.0;
  long rounds = 0;
  int epoch_length = 100;
  // Per-epoch mean per-round rewards in normalized units; multiply by scale
  // for raw payoff units.
  std::vector<double> leader_epoch_mean;
  std::vector<double> follower_epoch_mean;
  double follower_dynamic_regret = 0.0;
  double follower_external_regret = 0.0;
  double regret_slope = 0.0;
  bool regret_sublinear = false;
  double leader_external_regret = 0.0;
  double final_average_gap = 0.0;
  bool gap_within_bound = false;
  double gap_epsilon = 0.05;
  bool reward_average_checked = false;
  double reward_average_final_diff = 0.0;
  bool reward_average_sublinear = false;
  double pure_leader_value_raw = 0.0;
  double pure_follower_value_raw = 0.0;
  double mixed_leader_value_raw = 0.0;
  double mixed_follower_value_raw = 0.0;
  double mixed_total_raw = 0.0;
  double mixed_leader_value_norm = 0.0;
  double mixed_total_norm = 0.0;
  std::string error;  // non-empty when the run failed
};

// Builds the learners for one grid cell and plays it. Leader and follower
// substreams depend on (game, memory, seed) but not on the schedule, so
// schedule curves share randomness. When `out_trajectory` is non-null the
// played trajectory is moved there.
RunSummary ExecuteRun(const ExperimentConfig& config, const std::string& game_name,
                      ScheduleKind schedule, int memory, uint64_t seed,
                      Trajectory* out_trajectory = nullptr);

// Runs the full grid, optionally in parallel, writing one trajectory CSV,
// one metadata sidecar, and one summary JSON per run plus a grid-level
// table. Per-run I/O failures are recorded in the summary's error field
// without aborting the grid. Deterministic given the config.
std::vector<RunSummary> RunExperiment(const ExperimentConfig& config);

std::string RunSummaryToJson(const RunSummary& summary);
RunSummary RunSummaryFromJson(const std::string& json_text);
std::vector<RunSummary> LoadSummaries(const std::string& directory);

// One SVG per game: per-epoch mean leader reward in raw payoff units, one
// polyline per (schedule, memory), with the solved mixed commitment leader
// value as a reference line. Returns the number of files written; warns on
// empty input.
int RenderCurves(const std::vector<RunSummary>& summaries, const std::string& output_dir);

// Per (game, schedule, memory): final-epoch mean reward aggregated over
// seeds (mean and n-1 standard deviation, raw units), regret slope,
// reward-average and gap verdicts AND-ed over seeds.
std::string ReportTableText(const std::vector<RunSummary>& summaries);
std::string ReportTableJson(const std::vector<RunSummary>& summaries);

// Filename stem shared by the per-run CSV / sidecar / summary files.
std::string RunFileStem(const RunKey& key);

}  // namespace stacksim

#endif  // STACKSIM_HARNESS_H_
