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

#ifndef STACKSIM_SOLVER_H_
#define STACKSIM_SOLVER_H_

#include <string>
#include <vector>

#include "stacksim/matrix_game.h"

namespace stacksim {

// Comparison slack for ties and feasibility checks. Well below the payoff
// granularity of the built-in games (integers, or integers divided by the
// normalization constant).
inline constexpr double kTieTolerance = 1e-9;

// Probability vector over leader actions, announced before the follower
// responds.
struct MixedCommitment {
  std::vector<double> probs;
};

MixedCommitment PureCommitment(int num_leader_actions, int action);
MixedCommitment UniformCommitment(int num_leader_actions);

// Throws std::invalid_argument on negative entries or a sum away from 1.
void ValidateCommitment(const MixedCommitment& commitment, int num_leader_actions);

enum class SolutionKind { kPure, kMixed };

struct StackelbergSolution {
  MixedCommitment commitment;
  int follower_response = 0;
  double leader_value = 0.0;
  double follower_value = 0.0;
  double total_value = 0.0;  // leader_value + follower_value
  SolutionKind kind = SolutionKind::kPure;
};

// The follower action maximizing expected follower payoff under the
// commitment. Ties (within kTieTolerance) are broken in favor of the action
// with the higher expected leader payoff, then by lowest index.
int FollowerBestResponse(const MatrixGame& game, const MixedCommitment& commitment);

// Best response to a single observed leader action, same tie-breaking.
int FollowerBestResponseToAction(const MatrixGame& game, int leader_action);

// Enumerates pure leader actions against best-responding followers; leader
// ties go to the lowest action index.
StackelbergSolution SolvePureStackelberg(const MatrixGame& game);

// Exact optimal mixed commitment for two leader actions: for each follower
// column the set of commitments making it a best response is an interval in
// the simplex parameter, and the linear leader objective peaks at an
// endpoint. Follower ties at the optimum are broken in the leader's favor.
// Throws std::invalid_argument for games with more than two leader actions.
StackelbergSolution SolveMixedStackelberg(const MatrixGame& game);

// Independent check: evaluates the leader's expected payoff under the
// follower's best response on the commitment grid {k/resolution}. Supports
// two leader actions; resolution must be at least 2.
StackelbergSolution BruteForceOracle(const MatrixGame& game, int resolution);

}  // namespace stacksim

#endif  // STACKSIM_SOLVER_H_
