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
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stacksim/learners.h"
#include "stacksim/matrix_game.h"
#include "stacksim/util.h"

namespace stacksim {
namespace {

// Already normalized: cell sums are -1 and 0.
MatrixGame TwoLossGame() {
  return MakeMatrixGame("two_loss", {{0, 0}, {0, 0}}, {{-1, 0}, {-1, 0}});
}

TEST_CASE("schedule masks gate epochs as specified") {
  const ScheduleMask after{ScheduleKind::kAfterK, 100, 100};
  CHECK_FALSE(ScheduleActive(after, 9999));  // epoch 99
  CHECK(ScheduleActive(after, 10000));       // epoch 100
  const ScheduleMask every{ScheduleKind::kEveryK, 100, 100};
  CHECK(ScheduleActive(every, 0));
  CHECK_FALSE(ScheduleActive(every, 100));
  CHECK(ScheduleActive(every, 10050));
  CHECK(ScheduleActive({ScheduleKind::kAlways, 1, 100}, 123456));
  CHECK_FALSE(ScheduleActive({ScheduleKind::kNever, 1, 100}, 0));

  CHECK(ActiveRoundCount({ScheduleKind::kAlways, 1, 100}, 1000) == 1000);
  CHECK(ActiveRoundCount({ScheduleKind::kNever, 1, 100}, 1000) == 0);
  CHECK(ActiveRoundCount({ScheduleKind::kEveryK, 2, 100}, 1000) == 500);
  CHECK(ActiveRoundCount({ScheduleKind::kAfterK, 3, 100}, 1000) == 700);
}

TEST_CASE("default step size follows the hedge tuning") {
  CHECK(DefaultStepSize(2, 10000) == doctest::Approx(0.0235482).epsilon(1e-4));
  CHECK(DefaultStepSize(1, 1000) > 0.0);  // ln(2) guard for a single action
  CHECK(DefaultStepSize(2, 1000) / DefaultStepSize(2, 4000) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(DefaultStepSize(2, 0), std::invalid_argument);
}

TEST_CASE("fresh hedge plays uniformly") {
  const MatrixGame game = Normalize(LoadBuiltinGame("prisoners_dilemma"));
  FollowerLearner hedge(FollowerAlgorithm::kHedge, game, 1000);
  const auto policy = hedge.ContextPolicy(0);
  CHECK(policy[0] == doctest::Approx(0.5));
  CHECK(policy[1] == doctest::Approx(0.5));
}

TEST_CASE("hedge with a single follower action always plays it") {
  const MatrixGame game = MakeMatrixGame("single", {{0.0}, {0.0}}, {{0.5}, {-0.5}});
  FollowerLearner hedge(FollowerAlgorithm::kHedge, game, 100);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    CHECK(hedge.Act(0, rng) == 0);
    hedge.Update(0, 0, game, true);
  }
}

TEST_CASE("best-response oracle follows the strong convention") {
  const MatrixGame pd = Normalize(LoadBuiltinGame("prisoners_dilemma"));
  FollowerLearner oracle(FollowerAlgorithm::kBestResponseOracle, pd, 100);
  std::mt19937_64 rng(3);
  CHECK(oracle.Act(0, rng) == 1);
  CHECK(oracle.Act(1, rng) == 1);
  CHECK_THROWS_AS(oracle.Act(5, rng), std::out_of_range);
}

TEST_CASE("zero step size freezes hedge weights") {
  const MatrixGame game = TwoLossGame();
  FollowerParams params;
  params.step_size = 0.0;
  FollowerLearner hedge(FollowerAlgorithm::kHedge, game, 1000, params);
  for (int t = 0; t < 100; ++t) hedge.Update(0, 0, game, true);
  const auto policy = hedge.ContextPolicy(0);
  CHECK(policy[0] == 0.5);
  CHECK(policy[1] == 0.5);
}

TEST_CASE("hedge converges at the closed-form sigmoid rate") {
  // Context payoffs (-1, 0) give losses (1, 0.5), so after t updates the
  // weight ratio is exp(eta * t / 2).
  const MatrixGame game = TwoLossGame();
  FollowerParams params;
  params.step_size = 0.2;
  FollowerLearner hedge(FollowerAlgorithm::kHedge, game, 1000, params);
  double previous = 0.5;
  for (int t = 1; t <= 120; ++t) {
    hedge.Update(0, 0, game, true);
    const double p1 = hedge.ContextPolicy(0)[1];
    const double expected = 1.0 / (1.0 + std::exp(-0.2 * 0.5 * t));
    CHECK(std::abs(p1 - expected) <= 1e-9);
    CHECK(p1 > previous);
    previous = p1;
  }
  CHECK(previous > 0.99);
}

TEST_CASE("inactive epochs leave the learner state untouched") {
  const MatrixGame game = Normalize(LoadBuiltinGame("stag_hunt"));
  for (auto algorithm : {FollowerAlgorithm::kHedge, FollowerAlgorithm::kExp3,
                         FollowerAlgorithm::kRegretMatching, FollowerAlgorithm::kGreedyQ}) {
    FollowerLearner learner(algorithm, game, 1000);
    for (int t = 0; t < 20; ++t) learner.Update(t % 2, t % 2, game, true);
    const auto before0 = learner.ContextPolicy(0);
    const auto before1 = learner.ContextPolicy(1);
    for (int t = 0; t < 50; ++t) learner.Update(t % 2, (t + 1) % 2, game, false);
    CHECK(learner.ContextPolicy(0) == before0);
    CHECK(learner.ContextPolicy(1) == before1);
  }
}

TEST_CASE("hedge and exp3 reject unnormalized rewards") {
  const MatrixGame raw = LoadBuiltinGame("prisoners_dilemma");  // payoffs down to -3
  FollowerLearner hedge(FollowerAlgorithm::kHedge, raw, 1000);
  CHECK_THROWS_AS(hedge.Update(0, 0, raw, true), std::invalid_argument);
  FollowerLearner exp3(FollowerAlgorithm::kExp3, raw, 1000);
  CHECK_THROWS_AS(exp3.Update(0, 0, raw, true), std::invalid_argument);
  // Regret matching has no exponential map and accepts raw payoffs.
  FollowerLearner rm(FollowerAlgorithm::kRegretMatching, raw, 1000);
  CHECK_NOTHROW(rm.Update(0, 0, raw, true));
}

TEST_CASE("regret matching shifts mass toward positive regret") {
  const MatrixGame game = TwoLossGame();
  FollowerLearner rm(FollowerAlgorithm::kRegretMatching, game, 1000);
  // Playing the bad action accumulates positive regret for the good one.
  for (int t = 0; t < 10; ++t) rm.Update(0, 0, game, true);
  const auto policy = rm.ContextPolicy(0);
  CHECK(policy[1] == doctest::Approx(1.0));
}

TEST_CASE("greedy q settles on the best deterministic action") {
  const MatrixGame game = Normalize(LoadBuiltinGame("hero"));
  FollowerLearner greedy(FollowerAlgorithm::kGreedyQ, game, 1000);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 500; ++t) {
    for (int context = 0; context < 2; ++context) {
      const int action = greedy.Act(context, rng);
      greedy.Update(context, action, game, true);
    }
  }
  // hero: context 0 prefers column 1, context 1 prefers column 0.
  CHECK(greedy.Act(0, rng) == 1);
  CHECK(greedy.Act(1, rng) == 0);
}

TEST_CASE("hedge keeps per-context reward regret under the bound") {
  // Random leader sequences; realized dynamic regret must stay below
  // sqrt(2 T ln 2) in every run.
  const long rounds = 10000;
  const double bound = std::sqrt(2.0 * rounds * std::log(2.0));
  for (const char* name : {"prisoners_dilemma", "stag_hunt", "battle"}) {
    const MatrixGame game = Normalize(LoadBuiltinGame(name));
    for (uint64_t seed = 0; seed < 20; ++seed) {
      FollowerLearner hedge(FollowerAlgorithm::kHedge, game, rounds);
      auto leader_rng = MakeSubStream(seed, 17);
      auto follower_rng = MakeSubStream(seed, 23);
      double context_regret[2] = {0.0, 0.0};
      for (long t = 0; t < rounds; ++t) {
        const int context = UniformUnit(leader_rng) < 0.5 ? 0 : 1;
        const int action = hedge.Act(context, follower_rng);
        hedge.Update(context, action, game, true);
        const auto& row = game.follower_payoff[context];
        context_regret[context] += std::max(row[0], row[1]) - row[action];
      }
      CHECK(context_regret[0] <= bound);
      CHECK(context_regret[1] <= bound);
      CHECK(context_regret[0] + context_regret[1] <= bound);
    }
  }
}

TEST_CASE("commitment grids span the simplex") {
  const auto grid = CommitmentGrid(2, 101);
  CHECK(grid.size() == 101);
  CHECK(grid.front().probs[0] == 0.0);
  CHECK(grid.back().probs[0] == 1.0);
  CHECK(grid[50].probs[0] == doctest::Approx(0.5));
  CHECK(CommitmentGrid(2, 1).size() == 1);
  CHECK_THROWS_AS(CommitmentGrid(3, 5), std::invalid_argument);
}

TEST_CASE("fixed commitment leader is degenerate and ignores updates") {
  LeaderLearner leader = LeaderLearner::FixedCommitment(MixedCommitment{{1.0, 0.0}});
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const auto [arm, action] = leader.Act({}, rng);
    CHECK(arm == 0);
    CHECK(action == 0);
    leader.Update(arm, 0.7);
  }
}

TEST_CASE("single-arm exp3 leader always plays that arm") {
  LeaderLearner leader = LeaderLearner::Exp3CommitmentGrid({MixedCommitment{{0.25, 0.75}}}, 1000);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto [arm, action] = leader.Act({}, rng);
    CHECK(arm == 0);
    leader.Update(arm, -0.2);
  }
  CHECK(leader.ArmProbabilities() == std::vector<double>{1.0});
  CHECK_THROWS_AS(LeaderLearner::Exp3CommitmentGrid({}, 1000), std::invalid_argument);
}

TEST_CASE("exp3 leader stays symmetric under identical rewards") {
  // Equal rewards make the log-weight difference a martingale, so arm
  // probabilities stay a valid mixture and average out to 0.5.
  double mean_p0 = 0.0;
  const int seeds = 20;
  for (uint64_t seed = 0; seed < seeds; ++seed) {
    LeaderLearner leader = LeaderLearner::Exp3CommitmentGrid(CommitmentGrid(2, 2), 10000);
    std::mt19937_64 rng = MakeSubStream(seed, 31);
    for (int t = 0; t < 10000; ++t) {
      const auto [arm, action] = leader.Act({}, rng);
      leader.Update(arm, 0.3);
    }
    const auto probs = leader.ArmProbabilities();
    CHECK(probs[0] + probs[1] == doctest::Approx(1.0));
    CHECK(probs[0] > 0.0);
    CHECK(probs[0] < 1.0);
    mean_p0 += probs[0];
  }
  mean_p0 /= seeds;
  CHECK(mean_p0 > 0.3);
  CHECK(mean_p0 < 0.7);
}

TEST_CASE("exp3 leader concentrates on the better arm") {
  LeaderLearner leader = LeaderLearner::Exp3CommitmentGrid(CommitmentGrid(2, 2), 20000);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20000; ++t) {
    const auto [arm, action] = leader.Act({}, rng);
    leader.Update(arm, arm == 1 ? 0.5 : -0.5);
  }
  CHECK(leader.ArmProbabilities()[1] > 0.9);
}

TEST_CASE("q_memory with full exploration plays uniformly") {
  LeaderLearner leader = LeaderLearner::QMemory(2, 2, 0, /*epsilon=*/1.0, 0.1);
  std::mt19937_64 rng(9);
  int counts[2] = {0, 0};
  const int draws = 4000;
  for (int t = 0; t < draws; ++t) ++counts[leader.Act({}, rng).second];
  CHECK(std::abs(counts[0] - draws / 2) < draws / 10);
}

TEST_CASE("q_memory with unit learning rate overwrites the table") {
  LeaderLearner leader = LeaderLearner::QMemory(2, 2, 0, 0.0, /*learning_rate=*/1.0);
  std::mt19937_64 rng(10);
  const auto [arm, action] = leader.Act({}, rng);
  leader.Update(arm, 0.625);
  CHECK(leader.QValue(0, arm) == 0.625);
  leader.Act({}, rng);
  leader.Update(arm, -0.125);
  CHECK(leader.QValue(0, arm) == -0.125);
}

TEST_CASE("q_memory conditions on recent joint actions") {
  LeaderLearner leader = LeaderLearner::QMemory(2, 2, 1, 0.0, 1.0);
  std::mt19937_64 rng(11);
  const std::vector<JointAction> memory_a = {{0, 1}};
  const std::vector<JointAction> memory_b = {{1, 0}};
  auto acted = leader.Act(memory_a, rng);
  leader.Update(acted.first, -1.0);  // context (0,1) learns a bad value for row 0
  acted = leader.Act(memory_b, rng);
  leader.Update(acted.first, 1.0);
  // Greedy choice now differs by context.
  CHECK(leader.Act(memory_a, rng).second == 1);
  CHECK(leader.Act(memory_b, rng).second == 0);
  CHECK(leader.memory_length() == 1);
}

TEST_CASE("leader updates validate the reward range") {
  LeaderLearner leader = LeaderLearner::Exp3CommitmentGrid(CommitmentGrid(2, 3), 100);
  std::mt19937_64 rng(12);
  const auto [arm, action] = leader.Act({}, rng);
  (void)action;
  CHECK_THROWS_AS(leader.Update(arm, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(leader.Update(99, 0.5), std::out_of_range);
}

}  // namespace
}  // namespace stacksim
