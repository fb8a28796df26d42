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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stacksim/audit.h"
#include "stacksim/util.h"

namespace stacksim {
namespace {

Trajectory Play(const MatrixGame& game, LeaderLearner leader, FollowerLearner follower,
                ScheduleMask mask, long rounds, uint64_t seed) {
  return RunEpisode(game, leader, follower, mask, rounds, seed);
}

Trajectory PlayWithStreams(const MatrixGame& game, LeaderLearner leader, FollowerLearner follower,
                           ScheduleMask mask, long rounds, EpisodeSeeds streams) {
  return RunEpisode(game, leader, follower, mask, rounds, /*record_seed=*/0, streams);
}

// Synthetic trajectory whose rewards repeat a fixed cycle.
Trajectory CycleTrajectory(const std::string& game_name,
                           const std::vector<std::pair<double, double>>& cycle, long rounds) {
  Trajectory trajectory;
  trajectory.game_name = game_name;
  trajectory.normalized = true;
  for (long t = 0; t < rounds; ++t) {
    const auto& [leader_reward, follower_reward] = cycle[t % cycle.size()];
    trajectory.records.push_back({t, 0, 0, leader_reward, follower_reward, true});
  }
  return trajectory;
}

TEST_CASE("oracle followers have exactly zero dynamic regret") {
  for (const char* name : {"prisoners_dilemma", "hero", "coordination"}) {
    const MatrixGame game = Normalize(LoadBuiltinGame(name));
    FollowerLearner oracle(FollowerAlgorithm::kBestResponseOracle, game, 2000);
    const Trajectory trajectory =
        Play(game, LeaderLearner::FixedCommitment(UniformCommitment(2)), oracle,
             {ScheduleKind::kAlways, 1, 100}, 2000, 1);
    const RegretReport report = FollowerRegret(trajectory, game);
    CHECK(report.dynamic_regret == 0.0);
    CHECK(report.regret_series.back() == 0.0);
  }
}

TEST_CASE("a worst-response follower accrues linear regret") {
  // A frozen greedy-Q follower plays column 0 forever, the worst column in
  // prisoners_dilemma; against leader row 0 the per-round deficit is 1/4 in
  // normalized units.
  const MatrixGame game = Normalize(LoadBuiltinGame("prisoners_dilemma"));
  const long rounds = 10000;
  FollowerLearner frozen(FollowerAlgorithm::kGreedyQ, game, rounds);
  const Trajectory trajectory =
      Play(game, LeaderLearner::FixedCommitment(MixedCommitment{{1.0, 0.0}}), frozen,
           {ScheduleKind::kNever, 1, 100}, rounds, 2);
  const RegretReport report = FollowerRegret(trajectory, game);
  CHECK(report.achieved == doctest::Approx(-0.25 * rounds));
  CHECK(report.best_dynamic == 0.0);
  CHECK(report.dynamic_regret == doctest::Approx(0.25 * rounds));
  const SublinearityVerdict verdict = ClassifySublinear(report.regret_series);
  CHECK(verdict.slope == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(verdict.is_sublinear);
}

TEST_CASE("single optimal round has zero regret everywhere") {
  const MatrixGame game = Normalize(LoadBuiltinGame("prisoners_dilemma"));
  FollowerLearner oracle(FollowerAlgorithm::kBestResponseOracle, game, 1);
  const Trajectory trajectory =
      Play(game, LeaderLearner::FixedCommitment(MixedCommitment{{1.0, 0.0}}), oracle,
           {ScheduleKind::kAlways, 1, 100}, 1, 3);
  const RegretReport report = FollowerRegret(trajectory, game);
  CHECK(report.dynamic_regret == 0.0);
  CHECK(report.external_regret == 0.0);
  CHECK(ClassifySublinear(report.regret_series).insufficient_data);
}

TEST_CASE("dynamic regret dominates external regret and achieved reward") {
  for (const auto& name : BuiltinGameNames()) {
    const MatrixGame game = Normalize(LoadBuiltinGame(name));
    for (auto algorithm :
         {FollowerAlgorithm::kHedge, FollowerAlgorithm::kExp3, FollowerAlgorithm::kGreedyQ}) {
      FollowerLearner follower(algorithm, game, 1000);
      const Trajectory trajectory =
          Play(game, LeaderLearner::FixedCommitment(UniformCommitment(2)), follower,
               {ScheduleKind::kAlways, 1, 100}, 1000, 4);
      const RegretReport report = FollowerRegret(trajectory, game);
      CHECK(report.best_dynamic >= report.best_fixed - 1e-9);
      CHECK(report.best_dynamic >= report.achieved - 1e-9);
      CHECK(report.dynamic_regret >= report.external_regret - 1e-9);
      CHECK(report.regret_series.back() == doctest::Approx(report.dynamic_regret));
    }
  }
}

TEST_CASE("regret audits reject mismatched games") {
  const MatrixGame pd = Normalize(LoadBuiltinGame("prisoners_dilemma"));
  const MatrixGame hero = Normalize(LoadBuiltinGame("hero"));
  FollowerLearner oracle(FollowerAlgorithm::kBestResponseOracle, pd, 10);
  const Trajectory trajectory = Play(pd, LeaderLearner::FixedCommitment(UniformCommitment(2)),
                                     oracle, {ScheduleKind::kAlways, 1, 100}, 10, 5);
  CHECK_THROWS_AS(FollowerRegret(trajectory, hero), std::invalid_argument);
}

TEST_CASE("sublinearity classification on synthetic series") {
  std::vector<double> sqrt_series, linear_series, zero_series;
  for (long t = 1; t <= 4000; ++t) {
    sqrt_series.push_back(std::sqrt(static_cast<double>(t)));
    linear_series.push_back(t / 4.0);
    zero_series.push_back(0.0);
  }
  const SublinearityVerdict sqrt_verdict = ClassifySublinear(sqrt_series);
  CHECK(sqrt_verdict.slope == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sqrt_verdict.is_sublinear);

  const SublinearityVerdict linear_verdict = ClassifySublinear(linear_series);
  CHECK(linear_verdict.slope == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(linear_verdict.is_sublinear);

  const SublinearityVerdict zero_verdict = ClassifySublinear(zero_series);
  CHECK(zero_verdict.is_sublinear);

  CHECK(ClassifySublinear(std::vector<double>(50, 1.0)).insufficient_data);
}

TEST_CASE("identical trajectories are trivially reward-average") {
  const MatrixGame game = Normalize(LoadBuiltinGame("battle"));
  FollowerLearner follower(FollowerAlgorithm::kHedge, game, 500);
  const Trajectory trajectory =
      Play(game, LeaderLearner::FixedCommitment(UniformCommitment(2)), follower,
           {ScheduleKind::kAlways, 1, 100}, 500, 6);
  const RewardAverageReport report = RewardAverageCheck(trajectory, trajectory);
  CHECK(report.final_per_round_diff == 0.0);
  CHECK(report.verdict.is_sublinear);
}

TEST_CASE("paired hedge followers are reward-average") {
  const MatrixGame game = Normalize(LoadBuiltinGame("stag_hunt"));
  const long rounds = 20000;
  const EpisodeSeeds base = DeriveEpisodeSeeds(77);
  auto play = [&](uint64_t follower_seed) {
    FollowerLearner hedge(FollowerAlgorithm::kHedge, game, rounds);
    return PlayWithStreams(game, LeaderLearner::FixedCommitment(UniformCommitment(2)), hedge,
                           {ScheduleKind::kAlways, 1, 100}, rounds, {base.leader, follower_seed});
  };
  const Trajectory a = play(base.follower);
  const Trajectory b = play(base.follower ^ 0xabcdef);
  // Same leader substream and a non-adaptive leader: identical scripts.
  for (size_t t = 0; t < a.records.size(); ++t) {
    REQUIRE(a.records[t].leader_action == b.records[t].leader_action);
  }
  const RewardAverageReport report = RewardAverageCheck(a, b);
  CHECK(report.verdict.is_sublinear);
  CHECK(report.final_per_round_diff <= 0.02);
}

TEST_CASE("hedge against a worst-response follower is not reward-average") {
  const MatrixGame game = Normalize(LoadBuiltinGame("prisoners_dilemma"));
  const long rounds = 20000;
  const EpisodeSeeds base = DeriveEpisodeSeeds(78);
  FollowerLearner hedge(FollowerAlgorithm::kHedge, game, rounds);
  const Trajectory a =
      PlayWithStreams(game, LeaderLearner::FixedCommitment(MixedCommitment{{1.0, 0.0}}), hedge,
                      {ScheduleKind::kAlways, 1, 100}, rounds, base);
  FollowerLearner frozen(FollowerAlgorithm::kGreedyQ, game, rounds);
  const Trajectory b =
      PlayWithStreams(game, LeaderLearner::FixedCommitment(MixedCommitment{{1.0, 0.0}}), frozen,
                      {ScheduleKind::kNever, 1, 100}, rounds, base);
  const RewardAverageReport report = RewardAverageCheck(a, b);
  CHECK_FALSE(report.verdict.is_sublinear);
  CHECK(report.final_per_round_diff > 0.2);
}

TEST_CASE("reward-average check rejects mismatched horizons") {
  const Trajectory a = CycleTrajectory("x", {{0.0, 0.0}}, 100);
  const Trajectory b = CycleTrajectory("x", {{0.0, 0.0}}, 101);
  CHECK_THROWS_AS(RewardAverageCheck(a, b), std::invalid_argument);
}

TEST_CASE("exact equilibrium play has zero gap") {
  const MatrixGame game = Normalize(LoadBuiltinGame("prisoners_dilemma"));
  const StackelbergSolution solution = SolveMixedStackelberg(game);
  const Trajectory trajectory =
      CycleTrajectory("prisoners_dilemma", {{solution.leader_value, solution.follower_value}}, 500);
  const GapReport report = StackelbergGap(trajectory, solution, 0.05);
  CHECK(report.final_average_gap <= 1e-12);
  CHECK(report.within_bound);
  for (double gap : report.gap_series) CHECK(gap <= 1e-9);
}

TEST_CASE("alternating play around the equilibrium total averages out") {
  const MatrixGame game = Normalize(LoadBuiltinGame("chicken"));
  const StackelbergSolution solution = SolveMixedStackelberg(game);
  const double u = solution.total_value;  // -1/3 in normalized units
  // Totals alternate u + 0.25 and u - 0.25; partial sums stay within one
  // half-cycle of the target.
  const Trajectory trajectory =
      CycleTrajectory("chicken", {{u / 2 + 0.25, u / 2}, {u / 2 - 0.25, u / 2}}, 10000);
  const GapReport report = StackelbergGap(trajectory, solution, 0.05);
  CHECK(report.final_average_gap <= 0.25 / 10000 + 1e-12);
  for (double gap : report.gap_series) CHECK(gap <= 0.25 + 1e-9);
}

TEST_CASE("converged hedge play lands near the equilibrium total") {
  const MatrixGame game = Normalize(LoadBuiltinGame("stag_hunt"));
  const StackelbergSolution solution = SolveMixedStackelberg(game);
  const long rounds = 100000;
  FollowerLearner hedge(FollowerAlgorithm::kHedge, game, rounds);
  // Optimal commitment for stag_hunt is pure row 0.
  const Trajectory trajectory =
      Play(game, LeaderLearner::FixedCommitment(MixedCommitment{solution.commitment.probs}), hedge,
           {ScheduleKind::kAlways, 1, 100}, rounds, 8);
  const GapReport report = StackelbergGap(trajectory, solution, 0.05);
  CHECK(report.final_average_gap <= 0.05);
  CHECK(report.within_bound);
}

TEST_CASE("gap audit requires normalized inputs") {
  const MatrixGame raw = LoadBuiltinGame("prisoners_dilemma");
  const StackelbergSolution raw_solution = SolveMixedStackelberg(raw);
  const Trajectory trajectory = CycleTrajectory("prisoners_dilemma", {{-2.0, -2.0}}, 200);
  CHECK_THROWS_AS(StackelbergGap(trajectory, raw_solution, 0.05), std::invalid_argument);
}

TEST_CASE("the gap decomposes into per-player equilibrium regrets") {
  const MatrixGame game = Normalize(LoadBuiltinGame("chicken"));
  const StackelbergSolution solution = SolveMixedStackelberg(game);
  const long rounds = 20000;
  FollowerLearner hedge(FollowerAlgorithm::kHedge, game, rounds);
  LeaderLearner leader = LeaderLearner::Exp3CommitmentGrid(CommitmentGrid(2, 11), rounds);
  const Trajectory trajectory =
      Play(game, std::move(leader), hedge, {ScheduleKind::kAlways, 1, 100}, rounds, 9);
  const GapReport gap = StackelbergGap(trajectory, solution, 0.05);
  const GapDecomposition decomposition = GapDecompose(trajectory, solution);
  // Arithmetic identity: the gap is the absolute sum of the two regrets.
  CHECK(std::abs(gap.gap_series.back() -
                 std::abs(decomposition.leader_regret + decomposition.follower_regret)) <= 1e-9);
  CHECK(decomposition.bound_holds);
  CHECK(gap.gap_series.back() <= std::abs(decomposition.leader_regret) +
                                     std::abs(decomposition.follower_regret) + 1e-9);
}

TEST_CASE("per-round regret shrinks over doubling horizons for hedge") {
  const MatrixGame game = Normalize(LoadBuiltinGame("prisoners_dilemma"));
  const long rounds = 20000;
  FollowerLearner hedge(FollowerAlgorithm::kHedge, game, rounds);
  const Trajectory trajectory =
      Play(game, LeaderLearner::FixedCommitment(UniformCommitment(2)), hedge,
           {ScheduleKind::kAlways, 1, 100}, rounds, 10);
  const RegretReport report = FollowerRegret(trajectory, game);
  CHECK(ClassifySublinear(report.regret_series).is_sublinear);
  const double half = report.regret_series[rounds / 2 - 1] / (rounds / 2);
  const double full = report.regret_series[rounds - 1] / rounds;
  CHECK(full <= half + 0.01);
}

TEST_CASE("reward-average against the oracle trace implies no regret") {
  // For every built-in learner on every game: when the cumulative-reward
  // difference to the best-response trace grows sublinearly, the dynamic
  // regret series must classify sublinear too (the two series coincide when
  // the leader scripts match).
  const long rounds = 5000;
  for (const auto& name : BuiltinGameNames()) {
    const MatrixGame game = Normalize(LoadBuiltinGame(name));
    const EpisodeSeeds base = DeriveEpisodeSeeds(Fnv1a(name));
    FollowerLearner oracle(FollowerAlgorithm::kBestResponseOracle, game, rounds);
    const Trajectory reference =
        PlayWithStreams(game, LeaderLearner::FixedCommitment(UniformCommitment(2)), oracle,
                        {ScheduleKind::kAlways, 1, 100}, rounds, base);
    for (auto algorithm : {FollowerAlgorithm::kHedge, FollowerAlgorithm::kExp3,
                           FollowerAlgorithm::kRegretMatching, FollowerAlgorithm::kBestResponseOracle,
                           FollowerAlgorithm::kGreedyQ}) {
      FollowerLearner follower(algorithm, game, rounds);
      const Trajectory trajectory =
          PlayWithStreams(game, LeaderLearner::FixedCommitment(UniformCommitment(2)), follower,
                          {ScheduleKind::kAlways, 1, 100}, rounds, base);
      const RewardAverageReport average = RewardAverageCheck(trajectory, reference);
      if (average.verdict.is_sublinear) {
        const RegretReport regret = FollowerRegret(trajectory, game);
        CHECK(ClassifySublinear(regret.regret_series).is_sublinear);
      }
    }
  }
}

TEST_CASE("leader external regret vanishes against its own arm") {
  const MatrixGame game = Normalize(LoadBuiltinGame("prisoners_dilemma"));
  FollowerLearner oracle(FollowerAlgorithm::kBestResponseOracle, game, 1000);
  const Trajectory trajectory =
      Play(game, LeaderLearner::FixedCommitment(MixedCommitment{{0.0, 1.0}}), oracle,
           {ScheduleKind::kAlways, 1, 100}, 1000, 11);
  const RegretReport self = LeaderRegret(trajectory, game, {MixedCommitment{{0.0, 1.0}}});
  CHECK(self.external_regret <= 1e-9);

  // The pure defect commitment is grid-optimal against a stationary
  // best-response follower; external regret over the full grid stays within
  // the sampling-noise bound.
  const RegretReport grid = LeaderRegret(trajectory, game, CommitmentGrid(2, 11));
  CHECK(grid.external_regret <= std::sqrt(1000.0 * std::log(11.0)));
  CHECK(grid.best_dynamic >= grid.achieved - 1e-9);
}

TEST_CASE("single-round leader regret is bounded by the reward range") {
  const MatrixGame game = Normalize(LoadBuiltinGame("chicken"));
  FollowerLearner oracle(FollowerAlgorithm::kBestResponseOracle, game, 1);
  const Trajectory trajectory =
      Play(game, LeaderLearner::FixedCommitment(UniformCommitment(2)), oracle,
           {ScheduleKind::kAlways, 1, 100}, 1, 12);
  const RegretReport report = LeaderRegret(trajectory, game, CommitmentGrid(2, 11));
  CHECK(std::abs(report.external_regret) <= 2.0);
  CHECK_THROWS_AS(LeaderRegret(trajectory, game, {}), std::invalid_argument);
}

}  // namespace
}  // namespace stacksim
