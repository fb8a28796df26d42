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

#include "stacksim/learners.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stacksim/util.h"

namespace stacksim {
namespace {

constexpr double kRewardSlack = 1e-9;
constexpr double kWeightRenormCeiling = 1e150;

double CheckedReward(double reward, const char* who) {
  if (std::abs(reward) > 1.0 + kRewardSlack) {
    throw std::invalid_argument(std::string(who) + " requires rewards in [-1, 1]; got " +
                                FormatDouble(reward));
  }
  return reward;
}

// Classic exp3 exploration rate for `arms` arms over `horizon` pulls.
double ClassicExp3Gamma(int arms, long horizon) {
  if (arms <= 1) return 0.0;
  const double k = static_cast<double>(arms);
  return std::min(1.0, std::sqrt(k * std::log(k) / ((std::exp(1.0) - 1.0) * horizon)));
}

int ArgMaxLowestIndex(const std::vector<double>& values) {
  int best = 0;
  for (int j = 1; j < static_cast<int>(values.size()); ++j) {
    if (values[j] > values[best]) best = j;
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------------

std::string ScheduleKindToString(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kAlways: return "always";
    case ScheduleKind::kEveryK: return "every_k";
    case ScheduleKind::kAfterK: return "after_k";
    case ScheduleKind::kNever: return "never";
  }
  throw std::invalid_argument("bad schedule kind");
}

ScheduleKind ScheduleKindFromString(const std::string& text) {
  if (text == "always") return ScheduleKind::kAlways;
  if (text == "every_k") return ScheduleKind::kEveryK;
  if (text == "after_k") return ScheduleKind::kAfterK;
  if (text == "never") return ScheduleKind::kNever;
  throw std::invalid_argument("unknown schedule '" + text + "' (always, every_k, after_k, never)");
}

bool ScheduleActive(const ScheduleMask& mask, long round) {
  if (mask.k < 1 || mask.epoch_length < 1) throw std::invalid_argument("schedule needs k >= 1 and epoch_length >= 1");
  if (round < 0) throw std::invalid_argument("round must be non-negative");
  const long epoch = round / mask.epoch_length;
  switch (mask.kind) {
    case ScheduleKind::kAlways: return true;
    case ScheduleKind::kNever: return false;
    case ScheduleKind::kEveryK: return epoch % mask.k == 0;
    case ScheduleKind::kAfterK: return epoch >= mask.k;
  }
  throw std::invalid_argument("bad schedule kind");
}

long ActiveRoundCount(const ScheduleMask& mask, long rounds) {
  switch (mask.kind) {
    case ScheduleKind::kAlways: return rounds;
    case ScheduleKind::kNever: return 0;
    default: break;
  }
  long active = 0;
  for (long t = 0; t < rounds; ++t) {
    if (ScheduleActive(mask, t)) ++active;
  }
  return active;
}

// ---------------------------------------------------------------------------
// Step-size tuning
// ---------------------------------------------------------------------------

double DefaultStepSize(int num_actions, long horizon) {
  if (num_actions < 1) throw std::invalid_argument("need at least one action");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  return std::sqrt(8.0 * std::log(static_cast<double>(std::max(num_actions, 2))) / horizon);
}

// ---------------------------------------------------------------------------
// FollowerLearner
// ---------------------------------------------------------------------------

std::string FollowerAlgorithmToString(FollowerAlgorithm a) {
  switch (a) {
    case FollowerAlgorithm::kHedge: return "hedge";
    case FollowerAlgorithm::kExp3: return "exp3";
    case FollowerAlgorithm::kRegretMatching: return "regret_matching";
    case FollowerAlgorithm::kBestResponseOracle: return "best_response_oracle";
    case FollowerAlgorithm::kGreedyQ: return "greedy_q";
  }
  throw std::invalid_argument("bad follower algorithm");
}

FollowerAlgorithm FollowerAlgorithmFromString(const std::string& text) {
  if (text == "hedge") return FollowerAlgorithm::kHedge;
  if (text == "exp3") return FollowerAlgorithm::kExp3;
  if (text == "regret_matching") return FollowerAlgorithm::kRegretMatching;
  if (text == "best_response_oracle") return FollowerAlgorithm::kBestResponseOracle;
  if (text == "greedy_q") return FollowerAlgorithm::kGreedyQ;
  throw std::invalid_argument("unknown follower algorithm '" + text + "'");
}

FollowerLearner::FollowerLearner(FollowerAlgorithm algorithm, const MatrixGame& game, long horizon,
                                 FollowerParams params)
    : algorithm_(algorithm),
      num_contexts_(game.num_leader_actions),
      num_actions_(game.num_follower_actions),
      learning_rate_(params.learning_rate),
      leader_payoff_(game.leader_payoff),
      follower_payoff_(game.follower_payoff) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  // Each context sees roughly an equal share of the rounds; tune for that
  // share rather than the full horizon.
  const long context_horizon = (horizon + num_contexts_ - 1) / num_contexts_;
  eta_ = params.step_size ? *params.step_size : DefaultStepSize(num_actions_, context_horizon);
  if (eta_ < 0.0) throw std::invalid_argument("step size must be non-negative");
  gamma_ = params.exploration ? *params.exploration : ClassicExp3Gamma(num_actions_, context_horizon);
  if (gamma_ < 0.0 || gamma_ > 1.0) throw std::invalid_argument("exploration must lie in [0, 1]");
  context_rounds_.assign(num_contexts_, 0);
  switch (algorithm_) {
    case FollowerAlgorithm::kHedge:
    case FollowerAlgorithm::kExp3:
      weights_.assign(num_contexts_, std::vector<double>(num_actions_, 1.0));
      break;
    case FollowerAlgorithm::kRegretMatching:
      regrets_.assign(num_contexts_, std::vector<double>(num_actions_, 0.0));
      break;
    case FollowerAlgorithm::kGreedyQ:
      q_.assign(num_contexts_, std::vector<double>(num_actions_, 0.0));
      break;
    case FollowerAlgorithm::kBestResponseOracle:
      break;
  }
}

void FollowerLearner::CheckContext(int leader_action) const {
  if (leader_action < 0 || leader_action >= num_contexts_) {
    throw std::out_of_range("observed leader action out of range");
  }
}

int FollowerLearner::Act(int leader_action, std::mt19937_64& rng) {
  CheckContext(leader_action);
  switch (algorithm_) {
    case FollowerAlgorithm::kHedge: {
      const auto& w = weights_[leader_action];
      double total = 0.0;
      for (double v : w) total += v;
      probs_buffer_.resize(num_actions_);
      for (int j = 0; j < num_actions_; ++j) probs_buffer_[j] = w[j] / total;
      return SampleIndex(probs_buffer_, rng);
    }
    case FollowerAlgorithm::kExp3: {
      const auto& w = weights_[leader_action];
      double total = 0.0;
      for (double v : w) total += v;
      probs_buffer_.resize(num_actions_);
      for (int j = 0; j < num_actions_; ++j) {
        probs_buffer_[j] = (1.0 - gamma_) * w[j] / total + gamma_ / num_actions_;
      }
      return SampleIndex(probs_buffer_, rng);
    }
    case FollowerAlgorithm::kRegretMatching: {
      const auto& r = regrets_[leader_action];
      double positive = 0.0;
      for (double v : r) positive += std::max(v, 0.0);
      probs_buffer_.resize(num_actions_);
      for (int j = 0; j < num_actions_; ++j) {
        probs_buffer_[j] = positive > 0.0 ? std::max(r[j], 0.0) / positive : 1.0 / num_actions_;
      }
      return SampleIndex(probs_buffer_, rng);
    }
    case FollowerAlgorithm::kBestResponseOracle: {
      // Same strong tie-breaking as the solver: follower value, then leader
      // value, then lowest index.
      const auto& fr = follower_payoff_[leader_action];
      const auto& lr = leader_payoff_[leader_action];
      int best = 0;
      for (int j = 1; j < num_actions_; ++j) {
        if (fr[j] > fr[best] + kTieTolerance) {
          best = j;
        } else if (fr[j] >= fr[best] - kTieTolerance && lr[j] > lr[best] + kTieTolerance) {
          best = j;
        }
      }
      return best;
    }
    case FollowerAlgorithm::kGreedyQ:
      return ArgMaxLowestIndex(q_[leader_action]);
  }
  throw std::logic_error("unreachable");
}

void FollowerLearner::Update(int leader_action, int chosen_action, const MatrixGame& game,
                             bool epoch_active) {
  CheckContext(leader_action);
  if (chosen_action < 0 || chosen_action >= num_actions_) {
    throw std::out_of_range("chosen action out of range");
  }
  if (game.num_leader_actions != num_contexts_ || game.num_follower_actions != num_actions_) {
    throw std::invalid_argument("game dimensions do not match learner");
  }
  if (!epoch_active) return;
  ++context_rounds_[leader_action];
  const auto& row = game.follower_payoff[leader_action];
  switch (algorithm_) {
    case FollowerAlgorithm::kHedge: {
      auto& w = weights_[leader_action];
      double max_w = 0.0;
      for (int j = 0; j < num_actions_; ++j) {
        const double loss = (1.0 - CheckedReward(row[j], "hedge")) / 2.0;
        w[j] *= std::exp(-eta_ * loss);
        max_w = std::max(max_w, w[j]);
      }
      // Pin the largest weight at 1 so repeated decay never underflows.
      for (double& v : w) v /= max_w;
      break;
    }
    case FollowerAlgorithm::kExp3: {
      auto& w = weights_[leader_action];
      const double reward = CheckedReward(row[chosen_action], "exp3");
      double total = 0.0;
      for (double v : w) total += v;
      const double prob = (1.0 - gamma_) * w[chosen_action] / total + gamma_ / num_actions_;
      const double estimate = ((reward + 1.0) / 2.0) / prob;
      w[chosen_action] *= std::exp(gamma_ / num_actions_ * estimate);
      if (w[chosen_action] > kWeightRenormCeiling) {
        const double max_w = *std::max_element(w.begin(), w.end());
        for (double& v : w) v /= max_w;
      }
      break;
    }
    case FollowerAlgorithm::kRegretMatching: {
      auto& r = regrets_[leader_action];
      const double realized = row[chosen_action];
      for (int j = 0; j < num_actions_; ++j) r[j] += row[j] - realized;
      break;
    }
    case FollowerAlgorithm::kBestResponseOracle:
      break;
    case FollowerAlgorithm::kGreedyQ: {
      double& q = q_[leader_action][chosen_action];
      q += learning_rate_ * (row[chosen_action] - q);
      break;
    }
  }
}

std::vector<double> FollowerLearner::ContextPolicy(int leader_action) const {
  CheckContext(leader_action);
  std::vector<double> probs(num_actions_, 0.0);
  switch (algorithm_) {
    case FollowerAlgorithm::kHedge: {
      const auto& w = weights_[leader_action];
      double total = 0.0;
      for (double v : w) total += v;
      for (int j = 0; j < num_actions_; ++j) probs[j] = w[j] / total;
      return probs;
    }
    case FollowerAlgorithm::kExp3: {
      const auto& w = weights_[leader_action];
      double total = 0.0;
      for (double v : w) total += v;
      for (int j = 0; j < num_actions_; ++j) {
        probs[j] = (1.0 - gamma_) * w[j] / total + gamma_ / num_actions_;
      }
      return probs;
    }
    case FollowerAlgorithm::kRegretMatching: {
      const auto& r = regrets_[leader_action];
      double positive = 0.0;
      for (double v : r) positive += std::max(v, 0.0);
      for (int j = 0; j < num_actions_; ++j) {
        probs[j] = positive > 0.0 ? std::max(r[j], 0.0) / positive : 1.0 / num_actions_;
      }
      return probs;
    }
    case FollowerAlgorithm::kBestResponseOracle:
    case FollowerAlgorithm::kGreedyQ: {
      // Deterministic policies; reuse Act with a throwaway generator (no
      // draws are consumed).
      std::mt19937_64 unused(0);
      auto* self = const_cast<FollowerLearner*>(this);
      probs[self->Act(leader_action, unused)] = 1.0;
      return probs;
    }
  }
  throw std::logic_error("unreachable");
}

std::string FollowerLearner::Description() const {
  std::ostringstream out;
  out << FollowerAlgorithmToString(algorithm_);
  switch (algorithm_) {
    case FollowerAlgorithm::kHedge:
      out << "(eta=" << FormatDouble(eta_) << ")";
      break;
    case FollowerAlgorithm::kExp3:
      out << "(gamma=" << FormatDouble(gamma_) << ")";
      break;
    case FollowerAlgorithm::kGreedyQ:
      out << "(lr=" << FormatDouble(learning_rate_) << ")";
      break;
    default:
      break;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// LeaderLearner
// ---------------------------------------------------------------------------

std::string LeaderAlgorithmToString(LeaderAlgorithm a) {
  switch (a) {
    case LeaderAlgorithm::kFixedCommitment: return "fixed_commitment";
    case LeaderAlgorithm::kExp3CommitmentGrid: return "exp3_commitment_grid";
    case LeaderAlgorithm::kQMemory: return "q_memory";
  }
  throw std::invalid_argument("bad leader algorithm");
}

LeaderAlgorithm LeaderAlgorithmFromString(const std::string& text) {
  if (text == "fixed_commitment") return LeaderAlgorithm::kFixedCommitment;
  if (text == "exp3_commitment_grid") return LeaderAlgorithm::kExp3CommitmentGrid;
  if (text == "q_memory") return LeaderAlgorithm::kQMemory;
  throw std::invalid_argument("unknown leader algorithm '" + text + "'");
}

std::vector<MixedCommitment> CommitmentGrid(int num_leader_actions, int grid_size) {
  if (num_leader_actions != 2) {
    throw std::invalid_argument("commitment grid supports exactly two leader actions");
  }
  if (grid_size < 1) throw std::invalid_argument("grid size must be at least 1");
  std::vector<MixedCommitment> arms;
  arms.reserve(grid_size);
  if (grid_size == 1) {
    arms.push_back(UniformCommitment(2));
    return arms;
  }
  for (int i = 0; i < grid_size; ++i) {
    const double x = static_cast<double>(i) / (grid_size - 1);
    arms.push_back(MixedCommitment{{x, 1.0 - x}});
  }
  return arms;
}

LeaderLearner LeaderLearner::FixedCommitment(MixedCommitment commitment) {
  ValidateCommitment(commitment, static_cast<int>(commitment.probs.size()));
  LeaderLearner learner;
  learner.algorithm_ = LeaderAlgorithm::kFixedCommitment;
  learner.num_leader_actions_ = static_cast<int>(commitment.probs.size());
  learner.arms_.push_back(std::move(commitment));
  return learner;
}

LeaderLearner LeaderLearner::Exp3CommitmentGrid(std::vector<MixedCommitment> arms, long horizon,
                                                std::optional<double> exploration,
                                                double step_size_scale) {
  if (arms.empty()) throw std::invalid_argument("exp3 leader needs a non-empty arm set");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  const int m = static_cast<int>(arms[0].probs.size());
  for (const auto& arm : arms) ValidateCommitment(arm, m);
  LeaderLearner learner;
  learner.algorithm_ = LeaderAlgorithm::kExp3CommitmentGrid;
  learner.num_leader_actions_ = m;
  const int num_arms = static_cast<int>(arms.size());
  learner.arms_ = std::move(arms);
  learner.gamma_ = exploration ? *exploration : ClassicExp3Gamma(num_arms, horizon);
  if (learner.gamma_ < 0.0 || learner.gamma_ > 1.0) {
    throw std::invalid_argument("exploration must lie in [0, 1]");
  }
  learner.eta_ = step_size_scale * learner.gamma_ / num_arms;
  learner.weights_.assign(num_arms, 1.0);
  return learner;
}

LeaderLearner LeaderLearner::QMemory(int num_leader_actions, int num_follower_actions,
                                     int memory_length, double epsilon, double learning_rate) {
  if (num_leader_actions < 1 || num_follower_actions < 1) {
    throw std::invalid_argument("action counts must be positive");
  }
  if (memory_length < 0 || memory_length > 8) {
    throw std::invalid_argument("memory_length must lie in [0, 8]");
  }
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must lie in [0, 1]");
  LeaderLearner learner;
  learner.algorithm_ = LeaderAlgorithm::kQMemory;
  learner.num_leader_actions_ = num_leader_actions;
  learner.num_follower_actions_ = num_follower_actions;
  learner.memory_length_ = memory_length;
  learner.qm_epsilon_ = epsilon;
  learner.learning_rate_ = learning_rate;
  long contexts = 1;
  for (int i = 0; i < memory_length; ++i) contexts *= num_leader_actions * num_follower_actions;
  learner.q_.assign(contexts, std::vector<double>(num_leader_actions, 0.0));
  for (int a = 0; a < num_leader_actions; ++a) {
    learner.arms_.push_back(PureCommitment(num_leader_actions, a));
  }
  return learner;
}

long LeaderLearner::EncodeMemory(std::span<const JointAction> memory) const {
  // Oldest-to-newest base-(m*n) digits; rounds before the buffer fills are
  // encoded as 0.
  const long base = static_cast<long>(num_leader_actions_) * num_follower_actions_;
  long context = 0;
  const int available = static_cast<int>(memory.size());
  for (int slot = memory_length_; slot >= 1; --slot) {
    long digit = 0;
    if (available >= slot) {
      const JointAction& joint = memory[available - slot];
      digit = static_cast<long>(joint.leader) * num_follower_actions_ + joint.follower;
    }
    context = context * base + digit;
  }
  return context;
}

void LeaderLearner::ComputeArmProbabilities(std::vector<double>* probs) const {
  const int num_arms = static_cast<int>(arms_.size());
  double total = 0.0;
  for (double w : weights_) total += w;
  probs->resize(num_arms);
  for (int k = 0; k < num_arms; ++k) {
    (*probs)[k] = (1.0 - gamma_) * weights_[k] / total + gamma_ / num_arms;
  }
}

std::pair<int, int> LeaderLearner::Act(std::span<const JointAction> memory, std::mt19937_64& rng) {
  switch (algorithm_) {
    case LeaderAlgorithm::kFixedCommitment:
      return {0, SampleIndex(arms_[0].probs, rng)};
    case LeaderAlgorithm::kExp3CommitmentGrid: {
      ComputeArmProbabilities(&probs_buffer_);
      const int arm = SampleIndex(probs_buffer_, rng);
      return {arm, SampleIndex(arms_[arm].probs, rng)};
    }
    case LeaderAlgorithm::kQMemory: {
      last_context_ = EncodeMemory(memory);
      const auto& row = q_[last_context_];
      int action;
      if (UniformUnit(rng) < qm_epsilon_) {
        action = static_cast<int>(UniformUnit(rng) * num_leader_actions_);
        action = std::min(action, num_leader_actions_ - 1);
      } else {
        action = ArgMaxLowestIndex(row);
      }
      return {action, action};
    }
  }
  throw std::logic_error("unreachable");
}

void LeaderLearner::Update(int arm, double reward) {
  CheckedReward(reward, "leader update");
  switch (algorithm_) {
    case LeaderAlgorithm::kFixedCommitment:
      return;
    case LeaderAlgorithm::kExp3CommitmentGrid: {
      if (arm < 0 || arm >= static_cast<int>(arms_.size())) throw std::out_of_range("arm out of range");
      ComputeArmProbabilities(&probs_buffer_);
      const double estimate = ((reward + 1.0) / 2.0) / probs_buffer_[arm];
      weights_[arm] *= std::exp(eta_ * estimate);
      if (weights_[arm] > kWeightRenormCeiling) {
        const double max_w = *std::max_element(weights_.begin(), weights_.end());
        for (double& w : weights_) w /= max_w;
      }
      return;
    }
    case LeaderAlgorithm::kQMemory: {
      if (arm < 0 || arm >= num_leader_actions_) throw std::out_of_range("arm out of range");
      double& q = q_[last_context_][arm];
      q += learning_rate_ * (reward - q);
      return;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<double> LeaderLearner::ArmProbabilities() const {
  if (algorithm_ != LeaderAlgorithm::kExp3CommitmentGrid) {
    throw std::logic_error("arm probabilities only defined for the exp3 leader");
  }
  std::vector<double> probs;
  ComputeArmProbabilities(&probs);
  return probs;
}

double LeaderLearner::QValue(long context, int action) const {
  if (algorithm_ != LeaderAlgorithm::kQMemory) throw std::logic_error("not a q_memory leader");
  return q_.at(context).at(action);
}

std::string LeaderLearner::Description() const {
  std::ostringstream out;
  out << LeaderAlgorithmToString(algorithm_);
  switch (algorithm_) {
    case LeaderAlgorithm::kFixedCommitment: {
      out << "([";
      for (size_t i = 0; i < arms_[0].probs.size(); ++i) {
        if (i) out << ",";
        out << FormatDouble(arms_[0].probs[i]);
      }
      out << "])";
      break;
    }
    case LeaderAlgorithm::kExp3CommitmentGrid:
      out << "(arms=" << arms_.size() << ",gamma=" << FormatDouble(gamma_)
          << ",eta=" << FormatDouble(eta_) << ")";
      break;
    case LeaderAlgorithm::kQMemory:
      out << "(memory=" << memory_length_ << ",eps=" << FormatDouble(qm_epsilon_)
          << ",lr=" << FormatDouble(learning_rate_) << ")";
      break;
  }
  return out.str();
}

}  // namespace stacksim
