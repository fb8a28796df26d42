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

#include "stacksim/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stacksim {
namespace {

// Expected (follower, leader) payoffs per follower column under a commitment.
void ExpectedColumnValues(const MatrixGame& game, const MixedCommitment& commitment,
                          std::vector<double>* follower_values, std::vector<double>* leader_values) {
  const int n = game.num_follower_actions;
  follower_values->assign(n, 0.0);
  leader_values->assign(n, 0.0);
  for (int i = 0; i < game.num_leader_actions; ++i) {
    const double p = commitment.probs[i];
    if (p == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      (*follower_values)[j] += p * game.follower_payoff[i][j];
      (*leader_values)[j] += p * game.leader_payoff[i][j];
    }
  }
}

int BestColumn(const std::vector<double>& follower_values, const std::vector<double>& leader_values) {
  int best = 0;
  for (int j = 1; j < static_cast<int>(follower_values.size()); ++j) {
    if (follower_values[j] > follower_values[best] + kTieTolerance) {
      best = j;
    } else if (follower_values[j] >= follower_values[best] - kTieTolerance &&
               leader_values[j] > leader_values[best] + kTieTolerance) {
      best = j;
    }
  }
  return best;
}

}  // namespace

MixedCommitment PureCommitment(int num_leader_actions, int action) {
  if (action < 0 || action >= num_leader_actions) throw std::out_of_range("pure action out of range");
  MixedCommitment c;
  c.probs.assign(num_leader_actions, 0.0);
  c.probs[action] = 1.0;
  return c;
}

MixedCommitment UniformCommitment(int num_leader_actions) {
  if (num_leader_actions < 1) throw std::invalid_argument("need at least one leader action");
  MixedCommitment c;
  c.probs.assign(num_leader_actions, 1.0 / num_leader_actions);
  return c;
}

void ValidateCommitment(const MixedCommitment& commitment, int num_leader_actions) {
  if (static_cast<int>(commitment.probs.size()) != num_leader_actions) {
    throw std::invalid_argument("commitment has wrong length");
  }
  double sum = 0.0;
  for (double p : commitment.probs) {
    if (!(p >= -kTieTolerance)) throw std::invalid_argument("commitment has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kTieTolerance) {
    throw std::invalid_argument("commitment probabilities must sum to 1");
  }
}

int FollowerBestResponse(const MatrixGame& game, const MixedCommitment& commitment) {
  ValidateCommitment(commitment, game.num_leader_actions);
  std::vector<double> follower_values, leader_values;
  ExpectedColumnValues(game, commitment, &follower_values, &leader_values);
  return BestColumn(follower_values, leader_values);
}

int FollowerBestResponseToAction(const MatrixGame& game, int leader_action) {
  if (leader_action < 0 || leader_action >= game.num_leader_actions) {
    throw std::out_of_range("leader action out of range");
  }
  const auto& fr = game.follower_payoff[leader_action];
  const auto& lr = game.leader_payoff[leader_action];
  int best = 0;
  for (int j = 1; j < game.num_follower_actions; ++j) {
    if (fr[j] > fr[best] + kTieTolerance) {
      best = j;
    } else if (fr[j] >= fr[best] - kTieTolerance && lr[j] > lr[best] + kTieTolerance) {
      best = j;
    }
  }
  return best;
}

StackelbergSolution SolvePureStackelberg(const MatrixGame& game) {
  StackelbergSolution best;
  best.kind = SolutionKind::kPure;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.num_leader_actions; ++i) {
    const int response = FollowerBestResponseToAction(game, i);
    const double value = game.leader_payoff[i][response];
    if (value > best_value + kTieTolerance) {
      best_value = value;
      best.commitment = PureCommitment(game.num_leader_actions, i);
      best.follower_response = response;
      best.leader_value = value;
      best.follower_value = game.follower_payoff[i][response];
    }
  }
  best.total_value = best.leader_value + best.follower_value;
  return best;
}

StackelbergSolution SolveMixedStackelberg(const MatrixGame& game) {
  if (game.num_leader_actions != 2) {
    throw std::invalid_argument("exact mixed solver supports exactly two leader actions");
  }
  // Parameterize the commitment by x = P(row 0). For column j the follower's
  // expected value is F_j(x) = F[1][j] + x * (F[0][j] - F[1][j]); j is a best
  // response on the interval where F_j dominates every other column.
  const auto& L = game.leader_payoff;
  const auto& F = game.follower_payoff;
  StackelbergSolution best;
  best.kind = SolutionKind::kMixed;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < game.num_follower_actions; ++j) {
    double lo = 0.0, hi = 1.0;
    bool feasible = true;
    for (int k = 0; k < game.num_follower_actions && feasible; ++k) {
      if (k == j) continue;
      // Need b + c*x >= 0 on the interval.
      const double b = F[1][j] - F[1][k];
      const double c = (F[0][j] - F[1][j]) - (F[0][k] - F[1][k]);
      if (c == 0.0) {
        if (b < -kTieTolerance) feasible = false;
      } else if (c > 0.0) {
        lo = std::max(lo, -b / c);
      } else {
        hi = std::min(hi, -b / c);
      }
    }
    if (!feasible || lo > hi + kTieTolerance || lo > 1.0 + kTieTolerance || hi < -kTieTolerance) {
      continue;
    }
    const double endpoints[2] = {std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0)};
    for (double x : endpoints) {
      const double value = x * L[0][j] + (1.0 - x) * L[1][j];
      if (value > best_value + kTieTolerance) {
        best_value = value;
        best.commitment.probs = {x, 1.0 - x};
        best.follower_response = j;
        best.leader_value = value;
        best.follower_value = x * F[0][j] + (1.0 - x) * F[1][j];
      }
    }
  }
  best.total_value = best.leader_value + best.follower_value;
  return best;
}

StackelbergSolution BruteForceOracle(const MatrixGame& game, int resolution) {
  if (game.num_leader_actions != 2) {
    throw std::invalid_argument("brute-force oracle supports exactly two leader actions");
  }
  if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
  StackelbergSolution best;
  best.kind = SolutionKind::kMixed;
  double best_value = -std::numeric_limits<double>::infinity();
  MixedCommitment commitment;
  commitment.probs = {0.0, 0.0};
  std::vector<double> follower_values, leader_values;
  for (int k = 0; k <= resolution; ++k) {
    const double x = static_cast<double>(k) / resolution;
    commitment.probs[0] = x;
    commitment.probs[1] = 1.0 - x;
    ExpectedColumnValues(game, commitment, &follower_values, &leader_values);
    const int response = BestColumn(follower_values, leader_values);
    const double value = leader_values[response];
    if (value > best_value) {
      best_value = value;
      best.commitment = commitment;
      best.follower_response = response;
      best.leader_value = value;
      best.follower_value = follower_values[response];
    }
  }
  best.total_value = best.leader_value + best.follower_value;
  return best;
}

}  // namespace stacksim
