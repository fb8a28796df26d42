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

#ifndef STACKSIM_SIMULATION_H_
#define STACKSIM_SIMULATION_H_

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "stacksim/learners.h"
#include "stacksim/matrix_game.h"

namespace stacksim {

struct RoundRecord {
  long t = 0;
  int leader_action = 0;
  int follower_action = 0;
  double leader_reward = 0.0;
  double follower_reward = 0.0;
  bool schedule_active = true;
};

// Leader and follower draw from independent substreams, so swapping one
// agent's algorithm never perturbs the other's randomness. That keeps runs
// comparable across schedules on common leader randomness.
struct EpisodeSeeds {
  uint64_t leader = 0;
  uint64_t follower = 0;
};

EpisodeSeeds DeriveEpisodeSeeds(uint64_t seed);

struct Trajectory {
  std::string game_name;
  bool normalized = true;
  double scale = 1.0;
  uint64_t seed = 0;
  EpisodeSeeds streams;
  std::string leader_desc;
  std::string follower_desc;
  ScheduleMask mask;
  std::vector<RoundRecord> records;
};

// Plays `rounds` rounds: the leader acts first, the follower observes the
// leader action and responds, rewards are delivered, then both update (the
// follower's update gated by the schedule mask). The game must be
// normalized. Deterministic given (inputs, seed).
Trajectory RunEpisode(const MatrixGame& game, LeaderLearner& leader, FollowerLearner& follower,
                      const ScheduleMask& mask, long rounds, uint64_t seed);

// Same, with explicit leader/follower substreams for paired experiments
// (e.g. same leader randomness, different follower randomness).
Trajectory RunEpisode(const MatrixGame& game, LeaderLearner& leader, FollowerLearner& follower,
                      const ScheduleMask& mask, long rounds, uint64_t record_seed,
                      EpisodeSeeds streams);

// (leader total, follower total, joint total) over recorded rewards.
std::tuple<double, double, double> CumulativeUtilities(const Trajectory& trajectory);

// CSV with header t,leader_action,follower_action,leader_reward,
// follower_reward,schedule_active; doubles in shortest round-trip form.
std::string TrajectoryToCsv(const Trajectory& trajectory);
void WriteTrajectoryCsv(const Trajectory& trajectory, const std::string& path);

// Run metadata sidecar (game, seeds, learners, mask, scale).
std::string TrajectoryMetaToJson(const Trajectory& trajectory);
void WriteTrajectoryMeta(const Trajectory& trajectory, const std::string& path);

// Reads a trajectory CSV; when `meta_path` is non-empty the sidecar fills in
// game name, scale, seeds, and mask.
Trajectory ReadTrajectoryCsv(const std::string& csv_path, const std::string& meta_path = "");

}  // namespace stacksim

#endif  // STACKSIM_SIMULATION_H_
