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

#ifndef STACKSIM_MATRIX_GAME_H_
#define STACKSIM_MATRIX_GAME_H_

#include <string>
#include <utility>
#include <vector>

namespace stacksim {

using Matrix = std::vector<std::vector<double>>;

// A two-player bimatrix game. Rows index leader actions, columns follower
// actions. Values are immutable after construction and safe to share across
// threads.
//
// `scale` records the cumulative divisor applied by Normalize (1 for raw
// payoffs), so audited quantities can be reported back in original units.
struct MatrixGame {
  std::string name;
  int num_leader_actions = 0;
  int num_follower_actions = 0;
  Matrix leader_payoff;
  Matrix follower_payoff;
  double scale = 1.0;
};

// Validates shape and finiteness. Throws std::invalid_argument on malformed
// input (ragged rows, mismatched matrices, non-finite entries).
MatrixGame MakeMatrixGame(std::string name, Matrix leader_payoff, Matrix follower_payoff);

// The 12 built-in 2x2 games, in canonical order starting with
// prisoners_dilemma and ending with chicken.
const std::vector<std::string>& BuiltinGameNames();

// Loads a built-in game with raw integer payoffs and scale 1. Throws
// std::invalid_argument for unknown names, listing the valid ones.
MatrixGame LoadBuiltinGame(const std::string& name);

// Largest |leader + follower| over all cells: the per-round total-utility
// bound used by normalization.
double MaxAbsCellSum(const MatrixGame& game);

// True when every round's total utility is guaranteed to lie in [-1, 1].
bool IsNormalized(const MatrixGame& game);

// Divides both payoff matrices by the largest absolute cell sum, so the
// total per-round utility lies in [-1, 1] with the extreme cell mapped to
// magnitude 1 exactly. Positive rescaling, so every per-row/per-column
// argmax set is unchanged. A game whose cell sums are all zero is returned
// unchanged.
MatrixGame Normalize(const MatrixGame& game);

// (leader, follower) payoff of a joint action. Throws std::out_of_range on
// bad indices.
std::pair<double, double> Payoff(const MatrixGame& game, int leader_action, int follower_action);

// Parses {"name": ..., "leader_payoff": [[...]], "follower_payoff": [[...]]}.
MatrixGame GameFromJson(const std::string& json_text);
MatrixGame LoadGameFile(const std::string& path);

}  // namespace stacksim

#endif  // STACKSIM_MATRIX_GAME_H_
