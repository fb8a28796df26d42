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

#ifndef STACKSIM_AUDIT_H_
#define STACKSIM_AUDIT_H_

#include <span>
#include <vector>

#include "stacksim/matrix_game.h"
#include "stacksim/simulation.h"
#include "stacksim/solver.h"

namespace stacksim {

// All audit operations are pure over immutable trajectories.

struct RegretReport {
  long horizon = 0;
  double achieved = 0.0;      // sum of recorded rewards
  double best_dynamic = 0.0;  // per-round best response to the realized opponent actions
  double best_fixed = 0.0;    // best single action (or commitment) in hindsight
  double dynamic_regret = 0.0;
  double external_regret = 0.0;
  std::vector<double> regret_series;  // dynamic regret at every prefix length
};

struct SublinearityVerdict {
  double slope = 0.0;  // fitted exponent of series ~ c * t^slope
  double threshold = 0.9;
  bool is_sublinear = false;
  bool insufficient_data = false;
};

struct RewardAverageReport {
  SublinearityVerdict verdict;
  double final_per_round_diff = 0.0;
  std::vector<double> diff_series;  // |cumulative A - cumulative B| per prefix
};

struct GapReport {
  double stackelberg_total = 0.0;  // per-round equilibrium total utility, normalized
  std::vector<double> gap_series;  // |sum of totals - tau * U_S| per prefix
  double final_average_gap = 0.0;
  double epsilon = 0.05;
  bool within_bound = false;
};

// Decomposition of the final gap into per-player regrets measured against
// the equilibrium pair's per-round values. gap == |leader_regret +
// follower_regret| holds arithmetically, so gap <= |leader_regret| +
// |follower_regret| always.
struct GapDecomposition {
  double leader_regret = 0.0;    // T * V_L - achieved leader sum
  double follower_regret = 0.0;  // T * V_F - achieved follower sum
  double gap = 0.0;
  bool bound_holds = false;
};

// Dynamic regret takes the per-round best response to the realized leader
// actions (the follower observes the leader action before acting, so the
// hindsight maximum decomposes per round); external regret compares against
// the best single column in hindsight.
RegretReport FollowerRegret(const Trajectory& trajectory, const MatrixGame& game);

// External regret against the best fixed commitment in `arm_grid`, where
// each commitment is scored through the follower's realized per-context
// empirical response frequencies (uniform for unvisited contexts).
// best_dynamic is the hindsight per-round maximum against realized follower
// actions.
RegretReport LeaderRegret(const Trajectory& trajectory, const MatrixGame& game,
                          const std::vector<MixedCommitment>& arm_grid);

// Log-log least-squares fit of the positive entries in the second half of a
// regret prefix series. Series shorter than 100 flag insufficient_data; a
// window with no positive entries counts as sublinear (regret never
// accumulates).
SublinearityVerdict ClassifySublinear(std::span<const double> series, double threshold = 0.9);

// Compares two follower reward streams gathered under the same leader script
// (or leader seed sub-stream): sublinear growth of the cumulative difference
// means the two action series are reward-average.
RewardAverageReport RewardAverageCheck(const Trajectory& a, const Trajectory& b,
                                       double threshold = 0.9);

// Per-prefix |achieved total - tau * U_S| against the equilibrium total
// utility, in normalized units.
GapReport StackelbergGap(const Trajectory& trajectory, const StackelbergSolution& solution,
                         double epsilon = 0.05);

GapDecomposition GapDecompose(const Trajectory& trajectory, const StackelbergSolution& solution);

}  // namespace stacksim

#endif  // STACKSIM_AUDIT_H_
