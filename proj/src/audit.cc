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

#include "stacksim/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stacksim {
namespace {

void CheckCompatible(const Trajectory& trajectory, const MatrixGame& game) {
  if (trajectory.records.empty()) throw std::invalid_argument("trajectory is empty");
  if (!trajectory.game_name.empty() && trajectory.game_name != game.name) {
    throw std::invalid_argument("trajectory was recorded on game '" + trajectory.game_name +
                                "', not '" + game.name + "'");
  }
  for (const auto& record : trajectory.records) {
    if (record.leader_action < 0 || record.leader_action >= game.num_leader_actions ||
        record.follower_action < 0 || record.follower_action >= game.num_follower_actions) {
      throw std::invalid_argument("trajectory actions exceed game dimensions");
    }
  }
}

}  // namespace

RegretReport FollowerRegret(const Trajectory& trajectory, const MatrixGame& game) {
  CheckCompatible(trajectory, game);
  const long horizon = static_cast<long>(trajectory.records.size());
  RegretReport report;
  report.horizon = horizon;
  report.regret_series.reserve(horizon);

  std::vector<double> fixed_column_sums(game.num_follower_actions, 0.0);
  double achieved = 0.0;
  double best_dynamic = 0.0;
  for (const auto& record : trajectory.records) {
    const auto& row = game.follower_payoff[record.leader_action];
    achieved += record.follower_reward;
    best_dynamic += *std::max_element(row.begin(), row.end());
    for (int j = 0; j < game.num_follower_actions; ++j) fixed_column_sums[j] += row[j];
    report.regret_series.push_back(best_dynamic - achieved);
  }
  report.achieved = achieved;
  report.best_dynamic = best_dynamic;
  report.best_fixed = *std::max_element(fixed_column_sums.begin(), fixed_column_sums.end());
  report.dynamic_regret = best_dynamic - achieved;
  report.external_regret = report.best_fixed - achieved;
  return report;
}

RegretReport LeaderRegret(const Trajectory& trajectory, const MatrixGame& game,
                          const std::vector<MixedCommitment>& arm_grid) {
  CheckCompatible(trajectory, game);
  if (arm_grid.empty()) throw std::invalid_argument("arm grid is empty");
  const long horizon = static_cast<long>(trajectory.records.size());

  // Empirical conditional response frequencies per observed leader action.
  std::vector<std::vector<double>> counts(game.num_leader_actions,
                                          std::vector<double>(game.num_follower_actions, 0.0));
  std::vector<long> visits(game.num_leader_actions, 0);
  double achieved = 0.0;
  double best_dynamic = 0.0;
  RegretReport report;
  report.horizon = horizon;
  report.regret_series.reserve(horizon);
  for (const auto& record : trajectory.records) {
    achieved += record.leader_reward;
    double column_max = game.leader_payoff[0][record.follower_action];
    for (int i = 1; i < game.num_leader_actions; ++i) {
      column_max = std::max(column_max, game.leader_payoff[i][record.follower_action]);
    }
    best_dynamic += column_max;
    counts[record.leader_action][record.follower_action] += 1.0;
    ++visits[record.leader_action];
    report.regret_series.push_back(best_dynamic - achieved);
  }

  // Expected per-round leader payoff for each context, under the empirical
  // response distribution (uniform where the context was never observed).
  std::vector<double> context_value(game.num_leader_actions, 0.0);
  for (int i = 0; i < game.num_leader_actions; ++i) {
    if (visits[i] > 0) {
      for (int j = 0; j < game.num_follower_actions; ++j) {
        context_value[i] += counts[i][j] / visits[i] * game.leader_payoff[i][j];
      }
    } else {
      for (int j = 0; j < game.num_follower_actions; ++j) {
        context_value[i] += game.leader_payoff[i][j] / game.num_follower_actions;
      }
    }
  }
  double best_fixed_per_round = -std::numeric_limits<double>::infinity();
  for (const auto& arm : arm_grid) {
    ValidateCommitment(arm, game.num_leader_actions);
    double value = 0.0;
    for (int i = 0; i < game.num_leader_actions; ++i) value += arm.probs[i] * context_value[i];
    best_fixed_per_round = std::max(best_fixed_per_round, value);
  }

  report.achieved = achieved;
  report.best_dynamic = best_dynamic;
  report.best_fixed = best_fixed_per_round * horizon;
  report.dynamic_regret = best_dynamic - achieved;
  report.external_regret = report.best_fixed - achieved;
  return report;
}

SublinearityVerdict ClassifySublinear(std::span<const double> series, double threshold) {
  SublinearityVerdict verdict;
  verdict.threshold = threshold;
  if (series.size() < 100) {
    verdict.insufficient_data = true;
    return verdict;
  }
  // Fit log(Reg_t) ~ slope * log(t) on the positive entries of the second
  // half; the early transient is not informative about the growth rate.
  const size_t start = series.size() / 2;
  double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0, sum_xy = 0.0;
  long count = 0;
  for (size_t i = start; i < series.size(); ++i) {
    if (series[i] <= 0.0) continue;
    const double x = std::log(static_cast<double>(i + 1));
    const double y = std::log(series[i]);
    sum_x += x;
    sum_y += y;
    sum_xx += x * x;
    sum_xy += x * y;
    ++count;
  }
  if (count < 2) {
    // Regret never accumulates in the window; trivially sublinear.
    verdict.slope = 0.0;
    verdict.is_sublinear = true;
    return verdict;
  }
  const double denom = count * sum_xx - sum_x * sum_x;
  verdict.slope = denom != 0.0 ? (count * sum_xy - sum_x * sum_y) / denom : 0.0;
  verdict.is_sublinear = verdict.slope < threshold;
  return verdict;
}

RewardAverageReport RewardAverageCheck(const Trajectory& a, const Trajectory& b, double threshold) {
  if (a.records.size() != b.records.size()) throw std::invalid_argument("trajectories have different horizons");
  if (a.records.empty()) throw std::invalid_argument("trajectories are empty");
  if (!a.game_name.empty() && !b.game_name.empty() && a.game_name != b.game_name) {
    throw std::invalid_argument("trajectories come from different games");
  }
  RewardAverageReport report;
  report.diff_series.reserve(a.records.size());
  double sum_a = 0.0, sum_b = 0.0;
  for (size_t t = 0; t < a.records.size(); ++t) {
    sum_a += a.records[t].follower_reward;
    sum_b += b.records[t].follower_reward;
    report.diff_series.push_back(std::abs(sum_a - sum_b));
  }
  report.verdict = ClassifySublinear(report.diff_series, threshold);
  report.final_per_round_diff = report.diff_series.back() / static_cast<double>(a.records.size());
  return report;
}

GapReport StackelbergGap(const Trajectory& trajectory, const StackelbergSolution& solution,
                         double epsilon) {
  if (trajectory.records.empty()) throw std::invalid_argument("trajectory is empty");
  if (!trajectory.normalized || std::abs(solution.total_value) > 1.0 + 1e-9) {
    throw std::invalid_argument("gap audit requires normalized trajectory and solution");
  }
  GapReport report;
  report.stackelberg_total = solution.total_value;
  report.epsilon = epsilon;
  report.gap_series.reserve(trajectory.records.size());
  double achieved_total = 0.0;
  long tau = 0;
  for (const auto& record : trajectory.records) {
    achieved_total += record.leader_reward + record.follower_reward;
    ++tau;
    report.gap_series.push_back(std::abs(achieved_total - tau * solution.total_value));
  }
  report.final_average_gap = report.gap_series.back() / static_cast<double>(tau);
  report.within_bound = report.final_average_gap <= epsilon;
  return report;
}

GapDecomposition GapDecompose(const Trajectory& trajectory, const StackelbergSolution& solution) {
  if (trajectory.records.empty()) throw std::invalid_argument("trajectory is empty");
  const double horizon = static_cast<double>(trajectory.records.size());
  double leader_sum = 0.0, follower_sum = 0.0;
  for (const auto& record : trajectory.records) {
    leader_sum += record.leader_reward;
    follower_sum += record.follower_reward;
  }
  GapDecomposition decomposition;
  decomposition.leader_regret = horizon * solution.leader_value - leader_sum;
  decomposition.follower_regret = horizon * solution.follower_value - follower_sum;
  decomposition.gap = std::abs(horizon * solution.total_value - (leader_sum + follower_sum));
  decomposition.bound_holds =
      decomposition.gap <=
      std::abs(decomposition.leader_regret) + std::abs(decomposition.follower_regret) + 1e-9;
  return decomposition;
}

}  // namespace stacksim
