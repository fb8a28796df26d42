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

#include "stacksim/simulation.h"

#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "stacksim/util.h"

namespace stacksim {
namespace {

constexpr char kCsvHeader[] =
    "t,leader_action,follower_action,leader_reward,follower_reward,schedule_active";

std::vector<std::string_view> SplitCsvLine(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

EpisodeSeeds DeriveEpisodeSeeds(uint64_t seed) {
  return {SplitMix64(seed ^ 0xa5a5a5a5deadbeefULL), SplitMix64(seed ^ 0x0f0f0f0fc0ffee00ULL)};
}

Trajectory RunEpisode(const MatrixGame& game, LeaderLearner& leader, FollowerLearner& follower,
                      const ScheduleMask& mask, long rounds, uint64_t seed) {
  return RunEpisode(game, leader, follower, mask, rounds, seed, DeriveEpisodeSeeds(seed));
}

Trajectory RunEpisode(const MatrixGame& game, LeaderLearner& leader, FollowerLearner& follower,
                      const ScheduleMask& mask, long rounds, uint64_t record_seed,
                      EpisodeSeeds streams) {
  if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  if (!IsNormalized(game)) throw std::invalid_argument("run_episode requires a normalized game");

  auto leader_rng = MakeSubStream(streams.leader, 0);
  auto follower_rng = MakeSubStream(streams.follower, 1);

  Trajectory trajectory;
  trajectory.game_name = game.name;
  trajectory.normalized = true;
  trajectory.scale = game.scale;
  trajectory.seed = record_seed;
  trajectory.streams = streams;
  trajectory.leader_desc = leader.Description();
  trajectory.follower_desc = follower.Description();
  trajectory.mask = mask;
  trajectory.records.reserve(rounds);

  std::vector<JointAction> memory;
  const int memory_length = leader.memory_length();

  for (long t = 0; t < rounds; ++t) {
    const auto [arm, leader_action] = leader.Act(memory, leader_rng);
    const int follower_action = follower.Act(leader_action, follower_rng);
    const auto [leader_reward, follower_reward] = Payoff(game, leader_action, follower_action);
    const bool active = ScheduleActive(mask, t);
    leader.Update(arm, leader_reward);
    follower.Update(leader_action, follower_action, game, active);
    trajectory.records.push_back({t, leader_action, follower_action, leader_reward, follower_reward, active});
    if (memory_length > 0) {
      memory.push_back({leader_action, follower_action});
      if (static_cast<int>(memory.size()) > memory_length) memory.erase(memory.begin());
    }
  }
  return trajectory;
}

std::tuple<double, double, double> CumulativeUtilities(const Trajectory& trajectory) {
  if (trajectory.records.empty()) throw std::invalid_argument("trajectory is empty");
  double leader_total = 0.0, follower_total = 0.0;
  for (const auto& record : trajectory.records) {
    leader_total += record.leader_reward;
    follower_total += record.follower_reward;
  }
  return {leader_total, follower_total, leader_total + follower_total};
}

std::string TrajectoryToCsv(const Trajectory& trajectory) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : trajectory.records) {
    out += std::to_string(r.t);
    out += ',';
    out += std::to_string(r.leader_action);
    out += ',';
    out += std::to_string(r.follower_action);
    out += ',';
    out += FormatDouble(r.leader_reward);
    out += ',';
    out += FormatDouble(r.follower_reward);
    out += ',';
    out += r.schedule_active ? '1' : '0';
    out += '\n';
  }
  return out;
}

void WriteTrajectoryCsv(const Trajectory& trajectory, const std::string& path) {
  WriteTextFileAtomic(path, TrajectoryToCsv(trajectory));
}

std::string TrajectoryMetaToJson(const Trajectory& trajectory) {
  nlohmann::ordered_json meta;
  meta["game"] = trajectory.game_name;
  meta["normalized"] = trajectory.normalized;
  meta["scale"] = trajectory.scale;
  meta["seed"] = trajectory.seed;
  meta["leader_seed"] = trajectory.streams.leader;
  meta["follower_seed"] = trajectory.streams.follower;
  meta["rounds"] = trajectory.records.size();
  meta["leader"] = trajectory.leader_desc;
  meta["follower"] = trajectory.follower_desc;
  meta["mask"] = {{"kind", ScheduleKindToString(trajectory.mask.kind)},
                  {"k", trajectory.mask.k},
                  {"epoch_length", trajectory.mask.epoch_length}};
  return meta.dump(2) + "\n";
}

void WriteTrajectoryMeta(const Trajectory& trajectory, const std::string& path) {
  WriteTextFileAtomic(path, TrajectoryMetaToJson(trajectory));
}

Trajectory ReadTrajectoryCsv(const std::string& csv_path, const std::string& meta_path) {
  Trajectory trajectory;
  const std::string text = ReadTextFile(csv_path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("unexpected trajectory CSV header in " + csv_path);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = SplitCsvLine(line);
    if (fields.size() != 6) throw std::invalid_argument("malformed trajectory row: " + line);
    RoundRecord record;
    record.t = static_cast<long>(ParseDouble(fields[0]));
    record.leader_action = static_cast<int>(ParseDouble(fields[1]));
    record.follower_action = static_cast<int>(ParseDouble(fields[2]));
    record.leader_reward = ParseDouble(fields[3]);
    record.follower_reward = ParseDouble(fields[4]);
    record.schedule_active = fields[5] == "1";
    trajectory.records.push_back(record);
  }
  if (!meta_path.empty() && std::filesystem::exists(meta_path)) {
    const auto meta = nlohmann::json::parse(ReadTextFile(meta_path));
    trajectory.game_name = meta.value("game", std::string());
    trajectory.normalized = meta.value("normalized", true);
    trajectory.scale = meta.value("scale", 1.0);
    trajectory.seed = meta.value("seed", static_cast<uint64_t>(0));
    trajectory.streams.leader = meta.value("leader_seed", static_cast<uint64_t>(0));
    trajectory.streams.follower = meta.value("follower_seed", static_cast<uint64_t>(0));
    trajectory.leader_desc = meta.value("leader", std::string());
    trajectory.follower_desc = meta.value("follower", std::string());
    if (meta.contains("mask")) {
      trajectory.mask.kind = ScheduleKindFromString(meta["mask"].value("kind", std::string("always")));
      trajectory.mask.k = meta["mask"].value("k", 1);
      trajectory.mask.epoch_length = meta["mask"].value("epoch_length", 100);
    }
  }
  return trajectory;
}

}  // namespace stacksim
