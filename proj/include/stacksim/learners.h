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

#ifndef STACKSIM_LEARNERS_H_
#define STACKSIM_LEARNERS_H_

#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stacksim/matrix_game.h"
#include "stacksim/solver.h"

namespace stacksim {

// ---------------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------------

// Gates when the follower's learning updates are applied. Rounds are grouped
// into fixed-length epochs; every_k activates epochs divisible by k, after_k
// activates epochs at index k and beyond.
enum class ScheduleKind { kAlways, kEveryK, kAfterK, kNever };

std::string ScheduleKindToString(ScheduleKind kind);
ScheduleKind ScheduleKindFromString(const std::string& text);

struct ScheduleMask {
  ScheduleKind kind = ScheduleKind::kAlways;
  int k = 1;
  int epoch_length = 100;
};

bool ScheduleActive(const ScheduleMask& mask, long round);

// Number of rounds in [0, rounds) where the mask is active. Used to tune
// step sizes to the horizon a learner will actually train on.
long ActiveRoundCount(const ScheduleMask& mask, long rounds);

// ---------------------------------------------------------------------------
// Step-size tuning
// ---------------------------------------------------------------------------

// Standard hedge tuning sqrt(8*ln(max(n,2)) / horizon). With losses in [0,1]
// this keeps hedge's loss regret at most sqrt(horizon*ln(n)/2), i.e. reward
// regret at most sqrt(2*horizon*ln(n)) after mapping rewards from [-1,1].
double DefaultStepSize(int num_actions, long horizon);

// ---------------------------------------------------------------------------
// Follower learners
// ---------------------------------------------------------------------------

enum class FollowerAlgorithm { kHedge, kExp3, kRegretMatching, kBestResponseOracle, kGreedyQ };

std::string FollowerAlgorithmToString(FollowerAlgorithm a);
FollowerAlgorithm FollowerAlgorithmFromString(const std::string& text);

struct FollowerParams {
  // Hedge step size. Unset: tuned per context for the context's share of the
  // horizon, DefaultStepSize(n, ceil(horizon / num_contexts)).
  std::optional<double> step_size;
  // Exp3 uniform-exploration rate. Unset: classic tuning for the per-context
  // horizon.
  std::optional<double> exploration;
  // Greedy-Q update rate.
  double learning_rate = 0.1;
};

// Follower policy conditioned on the observed leader action: one independent
// learner instance per leader action ("context"). State is confined to a
// single simulation run; distinct runs may execute concurrently.
class FollowerLearner {
 public:
  FollowerLearner(FollowerAlgorithm algorithm, const MatrixGame& game, long horizon,
                  FollowerParams params = {});

  // Samples an action for the observed leader action. Deterministic
  // algorithms (best-response oracle, greedy Q) draw nothing from `rng`.
  int Act(int leader_action, std::mt19937_64& rng);

  // Applies the learning update for the realized round. When `epoch_active`
  // is false the state is left untouched, so masked epochs play without
  // learning. Hedge and exp3 reject games whose follower payoffs leave
  // [-1, 1], since their loss maps assume normalized rewards.
  void Update(int leader_action, int chosen_action, const MatrixGame& game, bool epoch_active);

  // Current action distribution for a context; one-hot for deterministic
  // algorithms.
  std::vector<double> ContextPolicy(int leader_action) const;

  FollowerAlgorithm algorithm() const { return algorithm_; }
  double step_size() const { return eta_; }
  double exploration() const { return gamma_; }
  std::string Description() const;

 private:
  void CheckContext(int leader_action) const;

  FollowerAlgorithm algorithm_;
  int num_contexts_ = 0;
  int num_actions_ = 0;
  double eta_ = 0.0;
  double gamma_ = 0.0;
  double learning_rate_ = 0.1;
  Matrix leader_payoff_;
  Matrix follower_payoff_;
  std::vector<std::vector<double>> weights_;  // hedge, exp3
  std::vector<std::vector<double>> regrets_;  // regret matching
  std::vector<std::vector<double>> q_;        // greedy Q
  std::vector<long> context_rounds_;
  mutable std::vector<double> probs_buffer_;
};

// ---------------------------------------------------------------------------
// Leader learners
// ---------------------------------------------------------------------------

enum class LeaderAlgorithm { kFixedCommitment, kExp3CommitmentGrid, kQMemory };

std::string LeaderAlgorithmToString(LeaderAlgorithm a);
LeaderAlgorithm LeaderAlgorithmFromString(const std::string& text);

struct JointAction {
  int leader = 0;
  int follower = 0;
};

// Evenly spaced mixtures over two leader actions; grid_size == 1 yields the
// uniform commitment.
std::vector<MixedCommitment> CommitmentGrid(int num_leader_actions, int grid_size);

// Non-adaptive leader policies. The exp3 variant treats each grid commitment
// as a bandit arm with importance-weighted reward updates; q_memory is
// epsilon-greedy over pure actions conditioned on the last `memory_length`
// joint actions.
class LeaderLearner {
 public:
  static LeaderLearner FixedCommitment(MixedCommitment commitment);
  // `step_size_scale` multiplies the classic gamma/K learning rate; the
  // exploration floor keeps the probabilities a valid mixture either way.
  static LeaderLearner Exp3CommitmentGrid(std::vector<MixedCommitment> arms, long horizon,
                                          std::optional<double> exploration = std::nullopt,
                                          double step_size_scale = 4.0);
  static LeaderLearner QMemory(int num_leader_actions, int num_follower_actions, int memory_length,
                               double epsilon, double learning_rate);

  // Returns (arm index, sampled leader action). `memory` holds the most
  // recent joint actions, oldest first; only q_memory reads it.
  std::pair<int, int> Act(std::span<const JointAction> memory, std::mt19937_64& rng);

  // Reward must lie in [-1, 1] (normalized units). Fixed commitments ignore
  // updates.
  void Update(int arm, double reward);

  LeaderAlgorithm algorithm() const { return algorithm_; }
  int memory_length() const { return memory_length_; }
  const std::vector<MixedCommitment>& arms() const { return arms_; }
  std::vector<double> ArmProbabilities() const;  // exp3 only
  double QValue(long context, int action) const;
  std::string Description() const;

 private:
  LeaderLearner() = default;
  long EncodeMemory(std::span<const JointAction> memory) const;
  void ComputeArmProbabilities(std::vector<double>* probs) const;

  LeaderAlgorithm algorithm_ = LeaderAlgorithm::kFixedCommitment;
  std::vector<MixedCommitment> arms_;
  double gamma_ = 0.0;
  double eta_ = 0.0;
  std::vector<double> weights_;
  int num_leader_actions_ = 0;
  int num_follower_actions_ = 0;
  int memory_length_ = 0;
  double qm_epsilon_ = 0.1;
  double learning_rate_ = 0.1;
  std::vector<std::vector<double>> q_;
  long last_context_ = 0;
  mutable std::vector<double> probs_buffer_;
};

}  // namespace stacksim

#endif  // STACKSIM_LEARNERS_H_
