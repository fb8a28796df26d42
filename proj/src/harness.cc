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

#include "stacksim/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "stacksim/util.h"

namespace stacksim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr uint64_t kLeaderStreamSalt = 0x1ead5a1700000001ULL;
constexpr uint64_t kFollowerStreamSalt = 0xf0110e5a1700002fULL;
constexpr uint64_t kShadowStreamSalt = 0x5bad0e5a17000003ULL;

LeaderSpec ParseLeaderSpec(const json& doc) {
  LeaderSpec spec;
  if (doc.contains("algorithm")) spec.algorithm = LeaderAlgorithmFromString(doc["algorithm"]);
  if (doc.contains("commitment")) spec.commitment = doc["commitment"].get<std::vector<double>>();
  spec.grid_size = doc.value("grid_size", spec.grid_size);
  if (doc.contains("exploration")) spec.exploration = doc["exploration"].get<double>();
  spec.step_size_scale = doc.value("step_size_scale", spec.step_size_scale);
  spec.epsilon = doc.value("epsilon", spec.epsilon);
  spec.learning_rate = doc.value("learning_rate", spec.learning_rate);
  return spec;
}

FollowerSpec ParseFollowerSpec(const json& doc) {
  FollowerSpec spec;
  if (doc.contains("algorithm")) spec.algorithm = FollowerAlgorithmFromString(doc["algorithm"]);
  if (doc.contains("step_size")) spec.step_size = doc["step_size"].get<double>();
  if (doc.contains("exploration")) spec.exploration = doc["exploration"].get<double>();
  spec.learning_rate = doc.value("learning_rate", spec.learning_rate);
  return spec;
}

MatrixGame ResolveGame(const std::string& name) {
  if (name.find('/') != std::string::npos || name.ends_with(".json")) {
    return LoadGameFile(name);
  }
  return LoadBuiltinGame(name);
}

FollowerLearner MakeFollower(const FollowerSpec& spec, const MatrixGame& game, long horizon) {
  FollowerParams params;
  params.step_size = spec.step_size;
  params.exploration = spec.exploration;
  params.learning_rate = spec.learning_rate;
  return FollowerLearner(spec.algorithm, game, horizon, params);
}

LeaderLearner MakeLeader(const LeaderSpec& spec, const MatrixGame& game, long horizon, int memory) {
  switch (spec.algorithm) {
    case LeaderAlgorithm::kFixedCommitment: {
      if (spec.commitment.empty()) {
        throw std::invalid_argument("fixed_commitment leader needs a commitment vector");
      }
      if (static_cast<int>(spec.commitment.size()) != game.num_leader_actions) {
        throw std::invalid_argument("commitment length does not match the game");
      }
      return LeaderLearner::FixedCommitment(MixedCommitment{spec.commitment});
    }
    case LeaderAlgorithm::kExp3CommitmentGrid:
      return LeaderLearner::Exp3CommitmentGrid(CommitmentGrid(game.num_leader_actions, spec.grid_size),
                                               horizon, spec.exploration, spec.step_size_scale);
    case LeaderAlgorithm::kQMemory:
      return LeaderLearner::QMemory(game.num_leader_actions, game.num_follower_actions, memory,
                                    spec.epsilon, spec.learning_rate);
  }
  throw std::logic_error("unreachable");
}

// Substreams shared by every schedule of the same (game, memory, seed) cell.
uint64_t RunStreamBase(const std::string& game, int memory, uint64_t seed) {
  return SplitMix64(Fnv1a(game) ^ SplitMix64(seed + 0x9e3779b97f4a7c15ULL) ^
                    SplitMix64(static_cast<uint64_t>(memory) + 0x7f4a7c15ULL));
}

std::vector<double> EpochMeans(const std::vector<RoundRecord>& records, int epoch_length,
                               bool leader) {
  std::vector<double> means;
  means.reserve(records.size() / epoch_length + 1);
  double sum = 0.0;
  int in_epoch = 0;
  for (const auto& record : records) {
    sum += leader ? record.leader_reward : record.follower_reward;
    if (++in_epoch == epoch_length) {
      means.push_back(sum / epoch_length);
      sum = 0.0;
      in_epoch = 0;
    }
  }
  if (in_epoch > 0) means.push_back(sum / in_epoch);
  return means;
}

struct CellKey {
  std::string game;
  ScheduleKind schedule;
  int memory;
  bool operator<(const CellKey& other) const {
    if (game != other.game) return game < other.game;
    if (schedule != other.schedule) return schedule < other.schedule;
    return memory < other.memory;
  }
};

struct CellAggregate {
  std::vector<double> final_epoch_raw;
  std::vector<double> slopes;
  bool sublinear_all = true;
  bool gap_all = true;
  bool reward_average_all = true;
  bool reward_average_any_checked = false;
  int errors = 0;
};

std::map<CellKey, CellAggregate> Aggregate(const std::vector<RunSummary>& summaries) {
  std::map<CellKey, CellAggregate> cells;
  for (const auto& s : summaries) {
    auto& cell = cells[{s.key.game, s.key.schedule, s.key.memory}];
    if (!s.error.empty()) {
      ++cell.errors;
      continue;
    }
    cell.final_epoch_raw.push_back(s.leader_epoch_mean.empty() ? 0.0
                                                               : s.leader_epoch_mean.back() * s.scale);
    cell.slopes.push_back(s.regret_slope);
    cell.sublinear_all &= s.regret_sublinear;
    cell.gap_all &= s.gap_within_bound;
    if (s.reward_average_checked) {
      cell.reward_average_any_checked = true;
      cell.reward_average_all &= s.reward_average_sublinear;
    }
  }
  return cells;
}

double Mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / values.size();
}

double SampleStd(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (values.size() - 1));
}

const char* ScheduleColor(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kNever: return "green";
    case ScheduleKind::kEveryK: return "blue";
    case ScheduleKind::kAfterK: return "orange";
    case ScheduleKind::kAlways: return "purple";
  }
  return "black";
}

}  // namespace

ExperimentConfig ParseConfig(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid config JSON: ") + e.what());
  }
  ExperimentConfig config;
  if (doc.contains("games")) {
    if (doc["games"].is_string()) {
      if (doc["games"] != "all") throw std::invalid_argument("games must be \"all\" or a list");
      config.games = BuiltinGameNames();
    } else {
      config.games = doc["games"].get<std::vector<std::string>>();
    }
  } else {
    config.games = BuiltinGameNames();
  }
  if (config.games.empty()) throw std::invalid_argument("config needs at least one game");
  if (doc.contains("schedules")) {
    config.schedules.clear();
    for (const auto& s : doc["schedules"]) config.schedules.push_back(ScheduleKindFromString(s));
  }
  if (config.schedules.empty()) throw std::invalid_argument("config needs at least one schedule");
  config.k = doc.value("k", config.k);
  config.epoch_length = doc.value("epoch_length", config.epoch_length);
  config.rounds = doc.value("rounds", config.rounds);
  if (doc.contains("seeds")) config.seeds = doc["seeds"].get<std::vector<uint64_t>>();
  if (config.seeds.empty()) throw std::invalid_argument("config needs at least one seed");
  if (doc.contains("leader")) config.leader = ParseLeaderSpec(doc["leader"]);
  if (doc.contains("follower")) config.follower = ParseFollowerSpec(doc["follower"]);
  if (doc.contains("baseline_follower")) {
    config.baseline_follower = ParseFollowerSpec(doc["baseline_follower"]);
  }
  if (doc.contains("leader_memory")) config.leader_memory = doc["leader_memory"].get<std::vector<int>>();
  if (config.leader_memory.empty()) throw std::invalid_argument("config needs at least one memory length");
  config.epsilon = doc.value("epsilon", config.epsilon);
  config.output_dir = doc.value("output_dir", config.output_dir);
  config.workers = doc.value("workers", config.workers);
  config.write_trajectories = doc.value("write_trajectories", config.write_trajectories);
  config.reward_average_shadow = doc.value("reward_average_shadow", config.reward_average_shadow);

  if (config.k < 1) throw std::invalid_argument("k must be at least 1");
  if (config.epoch_length < 1) throw std::invalid_argument("epoch_length must be at least 1");
  if (config.rounds < config.epoch_length) throw std::invalid_argument("rounds must cover at least one epoch");
  if (config.rounds % config.epoch_length != 0) {
    throw std::invalid_argument("rounds must be a multiple of epoch_length");
  }
  if (config.workers < 1) throw std::invalid_argument("workers must be at least 1");
  return config;
}

ExperimentConfig LoadConfigFile(const std::string& path) { return ParseConfig(ReadTextFile(path)); }

RunSummary ExecuteRun(const ExperimentConfig& config, const std::string& game_name,
                      ScheduleKind schedule, int memory, uint64_t seed, Trajectory* out_trajectory) {
  RunSummary summary;
  summary.key = {game_name, schedule, memory, seed};
  summary.rounds = config.rounds;
  summary.epoch_length = config.epoch_length;
  summary.gap_epsilon = config.epsilon;

  const MatrixGame raw = ResolveGame(game_name);
  const MatrixGame game = Normalize(raw);
  summary.scale = game.scale;

  // `never` means the no-regret constraint is never enforced: the baseline
  // follower plays instead and its ordinary updates run every round.
  const bool baseline = schedule == ScheduleKind::kNever;
  ScheduleMask mask{baseline ? ScheduleKind::kAlways : schedule, config.k, config.epoch_length};
  const FollowerSpec& follower_spec = baseline ? config.baseline_follower : config.follower;
  const long active_rounds = std::max<long>(1, ActiveRoundCount(mask, config.rounds));

  FollowerLearner follower = MakeFollower(follower_spec, game, active_rounds);
  LeaderLearner leader = MakeLeader(config.leader, game, config.rounds, memory);

  const uint64_t base = RunStreamBase(game_name, memory, seed);
  const EpisodeSeeds streams{SplitMix64(base ^ kLeaderStreamSalt), SplitMix64(base ^ kFollowerStreamSalt)};
  Trajectory trajectory = RunEpisode(game, leader, follower, mask, config.rounds, seed, streams);

  summary.leader_epoch_mean = EpochMeans(trajectory.records, config.epoch_length, /*leader=*/true);
  summary.follower_epoch_mean = EpochMeans(trajectory.records, config.epoch_length, /*leader=*/false);

  const RegretReport follower_report = FollowerRegret(trajectory, game);
  summary.follower_dynamic_regret = follower_report.dynamic_regret;
  summary.follower_external_regret = follower_report.external_regret;
  const SublinearityVerdict verdict = ClassifySublinear(follower_report.regret_series);
  summary.regret_slope = verdict.slope;
  summary.regret_sublinear = verdict.is_sublinear && !verdict.insufficient_data;

  const std::vector<MixedCommitment>& grid =
      leader.algorithm() == LeaderAlgorithm::kExp3CommitmentGrid
          ? leader.arms()
          : CommitmentGrid(game.num_leader_actions, config.leader.grid_size);
  summary.leader_external_regret = LeaderRegret(trajectory, game, grid).external_regret;

  const StackelbergSolution pure = SolvePureStackelberg(game);
  const StackelbergSolution mixed = SolveMixedStackelberg(game);
  summary.pure_leader_value_raw = pure.leader_value * game.scale;
  summary.pure_follower_value_raw = pure.follower_value * game.scale;
  summary.mixed_leader_value_raw = mixed.leader_value * game.scale;
  summary.mixed_follower_value_raw = mixed.follower_value * game.scale;
  summary.mixed_total_raw = mixed.total_value * game.scale;
  summary.mixed_leader_value_norm = mixed.leader_value;
  summary.mixed_total_norm = mixed.total_value;

  const GapReport gap = StackelbergGap(trajectory, mixed, config.epsilon);
  summary.final_average_gap = gap.final_average_gap;
  summary.gap_within_bound = gap.within_bound;

  if (config.reward_average_shadow) {
    FollowerLearner shadow_follower = MakeFollower(follower_spec, game, active_rounds);
    LeaderLearner shadow_leader = MakeLeader(config.leader, game, config.rounds, memory);
    const EpisodeSeeds shadow_streams{streams.leader, SplitMix64(base ^ kShadowStreamSalt)};
    const Trajectory shadow =
        RunEpisode(game, shadow_leader, shadow_follower, mask, config.rounds, seed, shadow_streams);
    const RewardAverageReport ra = RewardAverageCheck(trajectory, shadow);
    summary.reward_average_checked = true;
    summary.reward_average_final_diff = ra.final_per_round_diff;
    summary.reward_average_sublinear = ra.verdict.is_sublinear && !ra.verdict.insufficient_data;
  }

  if (out_trajectory != nullptr) *out_trajectory = std::move(trajectory);
  return summary;
}

std::string RunFileStem(const RunKey& key) {
  std::ostringstream out;
  out << key.game << "__" << ScheduleKindToString(key.schedule) << "__m" << key.memory << "__s"
      << key.seed;
  return out.str();
}

std::vector<RunSummary> RunExperiment(const ExperimentConfig& config) {
  // Fail fast on bad specs before any run executes.
  {
    const MatrixGame probe = Normalize(ResolveGame(config.games.front()));
    MakeFollower(config.follower, probe, config.rounds);
    MakeFollower(config.baseline_follower, probe, config.rounds);
    for (int memory : config.leader_memory) MakeLeader(config.leader, probe, config.rounds, memory);
  }

  struct RunRequest {
    std::string game;
    ScheduleKind schedule;
    int memory;
    uint64_t seed;
  };
  std::vector<RunRequest> requests;
  for (const auto& game : config.games) {
    for (ScheduleKind schedule : config.schedules) {
      for (int memory : config.leader_memory) {
        for (uint64_t seed : config.seeds) requests.push_back({game, schedule, memory, seed});
      }
    }
  }

  const bool write = config.write_trajectories && !config.output_dir.empty();
  if (write) fs::create_directories(config.output_dir);

  std::vector<RunSummary> summaries(requests.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      const size_t index = next.fetch_add(1);
      if (index >= requests.size()) return;
      const RunRequest& request = requests[index];
      RunSummary& summary = summaries[index];
      try {
        Trajectory trajectory;
        summary = ExecuteRun(config, request.game, request.schedule, request.memory, request.seed,
                             write ? &trajectory : nullptr);
        if (write) {
          const std::string stem = (fs::path(config.output_dir) / RunFileStem(summary.key)).string();
          WriteTrajectoryCsv(trajectory, stem + ".csv");
          WriteTrajectoryMeta(trajectory, stem + ".meta.json");
          WriteTextFileAtomic(stem + ".summary.json", RunSummaryToJson(summary));
        }
      } catch (const std::exception& e) {
        summary.key = {request.game, request.schedule, request.memory, request.seed};
        summary.error = e.what();
      }
    }
  };
  const int worker_count = std::min<int>(config.workers, static_cast<int>(requests.size()));
  if (worker_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(worker_count);
    for (int i = 0; i < worker_count; ++i) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
  }

  for (const auto& summary : summaries) {
    if (!summary.error.empty()) {
      std::cerr << "run " << RunFileStem(summary.key) << " failed: " << summary.error << "\n";
    }
  }
  if (write) {
    WriteTextFileAtomic((fs::path(config.output_dir) / "summary_table.txt").string(),
                        ReportTableText(summaries));
    WriteTextFileAtomic((fs::path(config.output_dir) / "summary_table.json").string(),
                        ReportTableJson(summaries));
  }
  return summaries;
}

std::string RunSummaryToJson(const RunSummary& s) {
  ordered_json doc;
  doc["game"] = s.key.game;
  doc["schedule"] = ScheduleKindToString(s.key.schedule);
  doc["memory"] = s.key.memory;
  doc["seed"] = s.key.seed;
  doc["scale"] = s.scale;
  doc["rounds"] = s.rounds;
  doc["epoch_length"] = s.epoch_length;
  doc["stackelberg"] = {{"pure_leader_value_raw", s.pure_leader_value_raw},
                        {"pure_follower_value_raw", s.pure_follower_value_raw},
                        {"mixed_leader_value_raw", s.mixed_leader_value_raw},
                        {"mixed_follower_value_raw", s.mixed_follower_value_raw},
                        {"mixed_total_raw", s.mixed_total_raw},
                        {"mixed_leader_value_norm", s.mixed_leader_value_norm},
                        {"mixed_total_norm", s.mixed_total_norm}};
  doc["audit"] = {{"follower_dynamic_regret", s.follower_dynamic_regret},
                  {"follower_external_regret", s.follower_external_regret},
                  {"regret_slope", s.regret_slope},
                  {"regret_sublinear", s.regret_sublinear},
                  {"leader_external_regret", s.leader_external_regret},
                  {"final_average_gap", s.final_average_gap},
                  {"gap_within_bound", s.gap_within_bound},
                  {"gap_epsilon", s.gap_epsilon},
                  {"reward_average_checked", s.reward_average_checked},
                  {"reward_average_final_diff", s.reward_average_final_diff},
                  {"reward_average_sublinear", s.reward_average_sublinear}};
  doc["leader_epoch_mean"] = s.leader_epoch_mean;
  doc["follower_epoch_mean"] = s.follower_epoch_mean;
  if (!s.error.empty()) doc["error"] = s.error;
  return doc.dump(2) + "\n";
}

RunSummary RunSummaryFromJson(const std::string& json_text) {
  const json doc = json::parse(json_text);
  RunSummary s;
  s.key.game = doc.value("game", std::string());
  s.key.schedule = ScheduleKindFromString(doc.value("schedule", std::string("always")));
  s.key.memory = doc.value("memory", 0);
  s.key.seed = doc.value("seed", static_cast<uint64_t>(0));
  s.scale = doc.value("scale", 1.0);
  s.rounds = doc.value("rounds", 0L);
  s.epoch_length = doc.value("epoch_length", 100);
  if (doc.contains("stackelberg")) {
    const auto& st = doc["stackelberg"];
    s.pure_leader_value_raw = st.value("pure_leader_value_raw", 0.0);
    s.pure_follower_value_raw = st.value("pure_follower_value_raw", 0.0);
    s.mixed_leader_value_raw = st.value("mixed_leader_value_raw", 0.0);
    s.mixed_follower_value_raw = st.value("mixed_follower_value_raw", 0.0);
    s.mixed_total_raw = st.value("mixed_total_raw", 0.0);
    s.mixed_leader_value_norm = st.value("mixed_leader_value_norm", 0.0);
    s.mixed_total_norm = st.value("mixed_total_norm", 0.0);
  }
  if (doc.contains("audit")) {
    const auto& a = doc["audit"];
    s.follower_dynamic_regret = a.value("follower_dynamic_regret", 0.0);
    s.follower_external_regret = a.value("follower_external_regret", 0.0);
    s.regret_slope = a.value("regret_slope", 0.0);
    s.regret_sublinear = a.value("regret_sublinear", false);
    s.leader_external_regret = a.value("leader_external_regret", 0.0);
    s.final_average_gap = a.value("final_average_gap", 0.0);
    s.gap_within_bound = a.value("gap_within_bound", false);
    s.gap_epsilon = a.value("gap_epsilon", 0.05);
    s.reward_average_checked = a.value("reward_average_checked", false);
    s.reward_average_final_diff = a.value("reward_average_final_diff", 0.0);
    s.reward_average_sublinear = a.value("reward_average_sublinear", false);
  }
  if (doc.contains("leader_epoch_mean")) {
    s.leader_epoch_mean = doc["leader_epoch_mean"].get<std::vector<double>>();
  }
  if (doc.contains("follower_epoch_mean")) {
    s.follower_epoch_mean = doc["follower_epoch_mean"].get<std::vector<double>>();
  }
  s.error = doc.value("error", std::string());
  return s;
}

std::vector<RunSummary> LoadSummaries(const std::string& directory) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.path().string().ends_with(".summary.json")) paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<RunSummary> summaries;
  summaries.reserve(paths.size());
  for (const auto& path : paths) summaries.push_back(RunSummaryFromJson(ReadTextFile(path)));
  return summaries;
}

int RenderCurves(const std::vector<RunSummary>& summaries, const std::string& output_dir) {
  if (summaries.empty()) {
    std::cerr << "render_curves: no run summaries, nothing to plot\n";
    return 0;
  }
  // game -> (schedule, memory) -> mean epoch series in raw units.
  std::map<std::string, std::map<std::pair<ScheduleKind, int>, std::vector<std::vector<double>>>> games;
  std::map<std::string, double> reference;
  size_t epochs = 0;
  for (const auto& s : summaries) {
    if (!s.error.empty()) continue;
    if (epochs == 0) epochs = s.leader_epoch_mean.size();
    if (s.leader_epoch_mean.size() != epochs) {
      throw std::invalid_argument("summaries have mismatched horizons");
    }
    std::vector<double> raw(s.leader_epoch_mean.size());
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = s.leader_epoch_mean[i] * s.scale;
    games[s.key.game][{s.key.schedule, s.key.memory}].push_back(std::move(raw));
    reference[s.key.game] = s.mixed_leader_value_raw;
  }
  if (games.empty()) {
    std::cerr << "render_curves: all runs failed, nothing to plot\n";
    return 0;
  }

  const double width = 640, height = 400;
  const double ml = 60, mr = 20, mt = 30, mb = 45;
  int files = 0;
  fs::create_directories(output_dir);
  for (const auto& [game, series_map] : games) {
    double y_min = reference[game], y_max = reference[game];
    std::map<std::pair<ScheduleKind, int>, std::vector<double>> means;
    for (const auto& [key, runs] : series_map) {
      std::vector<double> mean(epochs, 0.0);
      for (const auto& run : runs) {
        for (size_t i = 0; i < epochs; ++i) mean[i] += run[i];
      }
      for (double& v : mean) v /= runs.size();
      for (double v : mean) {
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
      }
      means[key] = std::move(mean);
    }
    if (y_max - y_min < 1e-9) {
      y_max += 0.5;
      y_min -= 0.5;
    }
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    auto x_of = [&](double epoch) { return ml + epoch / std::max<double>(1.0, epochs - 1) * (width - ml - mr); };
    auto y_of = [&](double v) { return mt + (y_max - v) / (y_max - y_min) * (height - mt - mb); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << game
        << "</text>\n";
    // Axes.
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
      const double v = y_min + tick / 4.0 * (y_max - y_min);
      const double y = y_of(v);
      svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
          << "\" stroke=\"black\"/>\n";
      char label[32];
      std::snprintf(label, sizeof(label), "%.2f", v);
      svg << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
          << "\" text-anchor=\"end\" font-size=\"10\">" << label << "</text>\n";
      const double e = tick / 4.0 * (epochs - 1);
      const double x = x_of(e);
      svg << "<line x1=\"" << x << "\" y1=\"" << height - mb << "\" x2=\"" << x << "\" y2=\""
          << height - mb + 4 << "\" stroke=\"black\"/>\n";
      svg << "<text x=\"" << x << "\" y=\"" << height - mb + 16
          << "\" text-anchor=\"middle\" font-size=\"10\">" << static_cast<long>(e) << "</text>\n";
    }
    svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 8
        << "\" text-anchor=\"middle\" font-size=\"11\">epoch</text>\n";
    svg << "<text x=\"14\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 14 "
        << (mt + height - mb) / 2 << ")\">mean episode reward (raw units)</text>\n";
    // Mixed-commitment leader value reference.
    const double ref_y = y_of(reference[game]);
    svg << "<line x1=\"" << ml << "\" y1=\"" << ref_y << "\" x2=\"" << width - mr << "\" y2=\""
        << ref_y << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";

    double legend_y = mt + 12;
    for (const auto& [key, mean] : means) {
      const auto& [schedule, memory] = key;
      svg << "<polyline fill=\"none\" stroke=\"" << ScheduleColor(schedule) << "\""
          << (memory > 0 ? " stroke-dasharray=\"3 3\"" : "") << " stroke-width=\"1.5\" points=\"";
      for (size_t i = 0; i < mean.size(); ++i) {
        if (i) svg << ' ';
        char point[64];
        std::snprintf(point, sizeof(point), "%.2f,%.2f", x_of(static_cast<double>(i)), y_of(mean[i]));
        svg << point;
      }
      svg << "\"/>\n";
      svg << "<text x=\"" << width - mr - 4 << "\" y=\"" << legend_y
          << "\" text-anchor=\"end\" font-size=\"10\" fill=\"" << ScheduleColor(schedule) << "\">"
          << ScheduleKindToString(schedule) << (memory > 0 ? " m=" + std::to_string(memory) : "")
          << "</text>\n";
      legend_y += 12;
    }
    svg << "</svg>\n";
    WriteTextFileAtomic((fs::path(output_dir) / (game + ".svg")).string(), svg.str());
    ++files;
  }
  return files;
}

std::string ReportTableText(const std::vector<RunSummary>& summaries) {
  const auto cells = Aggregate(summaries);
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-18s %-8s %3s %5s  %-18s %-8s %-5s %-5s %-5s %s\n", "game",
                "schedule", "mem", "seeds", "final_reward(raw)", "slope", "subl", "ravg", "gap",
                "errors");
  out << line;
  for (const auto& [key, cell] : cells) {
    char reward[64];
    std::snprintf(reward, sizeof(reward), "%.4f +- %.4f", Mean(cell.final_epoch_raw),
                  SampleStd(cell.final_epoch_raw));
    std::snprintf(line, sizeof(line), "%-18s %-8s %3d %5zu  %-18s %-8.3f %-5s %-5s %-5s %d\n",
                  key.game.c_str(), ScheduleKindToString(key.schedule).c_str(), key.memory,
                  cell.final_epoch_raw.size(), reward, Mean(cell.slopes),
                  cell.sublinear_all ? "yes" : "no",
                  cell.reward_average_any_checked ? (cell.reward_average_all ? "yes" : "no") : "-",
                  cell.gap_all ? "yes" : "no", cell.errors);
    out << line;
  }
  return out.str();
}

std::string ReportTableJson(const std::vector<RunSummary>& summaries) {
  const auto cells = Aggregate(summaries);
  ordered_json rows = ordered_json::array();
  for (const auto& [key, cell] : cells) {
    ordered_json row;
    row["game"] = key.game;
    row["schedule"] = ScheduleKindToString(key.schedule);
    row["memory"] = key.memory;
    row["seeds"] = cell.final_epoch_raw.size();
    row["final_reward_raw_mean"] = Mean(cell.final_epoch_raw);
    row["final_reward_raw_std"] = SampleStd(cell.final_epoch_raw);
    row["regret_slope_mean"] = Mean(cell.slopes);
    row["regret_sublinear"] = cell.sublinear_all;
    if (cell.reward_average_any_checked) row["reward_average"] = cell.reward_average_all;
    row["gap_within_bound"] = cell.gap_all;
    row["errors"] = cell.errors;
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + "\n";
}

}  // namespace stacksim
