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

#include "stacksim/matrix_game.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "stacksim/util.h"

namespace stacksim {
namespace {

struct BuiltinSpec {
  const char* name;
  double leader[2][2];
  double follower[2][2];
};

// clang-format off
constexpr BuiltinSpec kBuiltins[] = {
    {"prisoners_dilemma", {{-1, -3}, { 0, -2}}, {{-1,  0}, {-3, -2}}},
    {"stag_hunt",         {{ 0, -3}, {-1, -2}}, {{ 0, -1}, {-3, -2}}},
    {"assurance",         {{ 1, -2}, { 0, -1}}, {{ 0, -1}, {-2, -3}}},
    {"coordination",      {{ 0, -2}, { 0, -3}}, {{ 0, -3}, {-2, -3}}},
    {"mixedharmony",      {{ 0, -1}, {-1, -3}}, {{ 0, -3}, {-1, -3}}},
    {"harmony",           {{ 0, -1}, {-2, -3}}, {{ 0, -2}, {-1, -3}}},
    {"noconflict",        {{ 0, -2}, {-1, -3}}, {{-1, -3}, { 0, -2}}},
    {"deadlock",          {{-2, -3}, {-1,  0}}, {{-2,  0}, {-3, -1}}},
    {"prisoners_delight", {{ 0, -2}, {-1, -3}}, {{ 0, -3}, {-2, -1}}},
    {"hero",              {{ 0, -3}, {-2, -1}}, {{-3, -1}, { 0, -2}}},
    {"battle",            {{-1, -2}, {-2, -3}}, {{-2, -3}, {-1,  0}}},
    {"chicken",           {{-1, -2}, { 0, -3}}, {{-1,  0}, {-2, -3}}},
};
// clang-format on

Matrix ToMatrix(const double (&values)[2][2]) {
  return {{values[0][0], values[0][1]}, {values[1][0], values[1][1]}};
}

void CheckRectangular(const Matrix& matrix, const std::string& which) {
  if (matrix.empty() || matrix[0].empty()) {
    throw std::invalid_argument(which + " must have at least one row and column");
  }
  const size_t cols = matrix[0].size();
  for (const auto& row : matrix) {
    if (row.size() != cols) throw std::invalid_argument(which + " has ragged rows");
    for (double v : row) {
      if (!std::isfinite(v)) throw std::invalid_argument(which + " has a non-finite entry");
    }
  }
}

}  // namespace

MatrixGame MakeMatrixGame(std::string name, Matrix leader_payoff, Matrix follower_payoff) {
  CheckRectangular(leader_payoff, "leader_payoff");
  CheckRectangular(follower_payoff, "follower_payoff");
  if (leader_payoff.size() != follower_payoff.size() ||
      leader_payoff[0].size() != follower_payoff[0].size()) {
    throw std::invalid_argument("leader and follower payoff matrices must have equal dimensions");
  }
  MatrixGame game;
  game.name = std::move(name);
  game.num_leader_actions = static_cast<int>(leader_payoff.size());
  game.num_follower_actions = static_cast<int>(leader_payoff[0].size());
  game.leader_payoff = std::move(leader_payoff);
  game.follower_payoff = std::move(follower_payoff);
  return game;
}

const std::vector<std::string>& BuiltinGameNames() {
  static const std::vector<std::string>* names = [] {
    auto* v = new std::vector<std::string>();
    for (const auto& spec : kBuiltins) v->push_back(spec.name);
    return v;
  }();
  return *names;
}

MatrixGame LoadBuiltinGame(const std::string& name) {
  for (const auto& spec : kBuiltins) {
    if (name == spec.name) {
      return MakeMatrixGame(spec.name, ToMatrix(spec.leader), ToMatrix(spec.follower));
    }
  }
  std::ostringstream msg;
  msg << "unknown game '" << name << "'; valid names:";
  for (const auto& valid : BuiltinGameNames()) msg << " " << valid;
  throw std::invalid_argument(msg.str());
}

double MaxAbsCellSum(const MatrixGame& game) {
  double max_abs = 0.0;
  for (int i = 0; i < game.num_leader_actions; ++i) {
    for (int j = 0; j < game.num_follower_actions; ++j) {
      max_abs = std::max(max_abs, std::abs(game.leader_payoff[i][j] + game.follower_payoff[i][j]));
    }
  }
  return max_abs;
}

bool IsNormalized(const MatrixGame& game) { return MaxAbsCellSum(game) <= 1.0 + 1e-9; }

MatrixGame Normalize(const MatrixGame& game) {
  const double divisor = MaxAbsCellSum(game);
  if (divisor == 0.0) return game;
  MatrixGame result = game;
  for (int i = 0; i < game.num_leader_actions; ++i) {
    for (int j = 0; j < game.num_follower_actions; ++j) {
      result.leader_payoff[i][j] = game.leader_payoff[i][j] / divisor;
      result.follower_payoff[i][j] = game.follower_payoff[i][j] / divisor;
    }
  }
  result.scale = game.scale * divisor;
  return result;
}

std::pair<double, double> Payoff(const MatrixGame& game, int leader_action, int follower_action) {
  if (leader_action < 0 || leader_action >= game.num_leader_actions) {
    throw std::out_of_range("leader action out of range");
  }
  if (follower_action < 0 || follower_action >= game.num_follower_actions) {
    throw std::out_of_range("follower action out of range");
  }
  return {game.leader_payoff[leader_action][follower_action],
          game.follower_payoff[leader_action][follower_action]};
}

MatrixGame GameFromJson(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid game JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("leader_payoff") || !doc.contains("follower_payoff")) {
    throw std::invalid_argument("game JSON must contain leader_payoff and follower_payoff");
  }
  auto parse_matrix = [&doc](const char* key) {
    Matrix matrix;
    for (const auto& row : doc.at(key)) {
      matrix.emplace_back();
      for (const auto& cell : row) {
        if (!cell.is_number()) throw std::invalid_argument("payoff entries must be numbers");
        matrix.back().push_back(cell.get<double>());
      }
    }
    return matrix;
  };
  const std::string name = doc.value("name", std::string("custom"));
  return MakeMatrixGame(name, parse_matrix("leader_payoff"), parse_matrix("follower_payoff"));
}

MatrixGame LoadGameFile(const std::string& path) { return GameFromJson(ReadTextFile(path)); }

}  // namespace stacksim
