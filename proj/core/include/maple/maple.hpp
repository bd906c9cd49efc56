// Copyright (C) 2026 The MAPLE Sequencing Authors
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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maple/domain.hpp"
#include "maple/random.hpp"

namespace maple {

// Hyperparameters of the bandit sequencer.
//
// The exploration noise added to each weight is gamma * U(-1, 1), so gamma
// has to be small relative to the mean weight 1/N for the ranking to matter.
struct MapleParams {
  double eta = 0.7;      // passing grade; grade > eta is a success
  double gamma0 = 0.002;
  double alpha1 = 1.2;   // success: scale on weights harder than the pick
  double alpha2 = 1.05;  // success: exploration growth
  double alpha3 = 0.3;   // failure: scale on weights harder than the pick
  double alpha4 = 0.95;  // failure: exploration decay
  double softmax_scale = 6.0;
  double gamma_min = 0.0002;
  double gamma_max = 0.01;
  double pi_floor = 1e-9;
  // Repeats allowed by default: with session length equal to the bank size a
  // no-repeat session is just a permutation of the whole bank.
  bool no_repeat = false;

  // Throws ValidationError naming the offending field.
  void validate() const;
};

struct Selection {
  QuestionId question;
  std::size_t position = 0;  // 0-based ranking position (0 = easiest)
};

// Bandit state for one student: weights over ranking positions on the
// probability simplex, the exploration rate, and the answered mask.
class MapleState {
 public:
  // Validates every invariant; used for deserialisation.
  MapleState(DifficultyRanking order, std::vector<double> weights, double gamma,
             MapleParams params, std::vector<bool> answered);

  const DifficultyRanking& order() const { return order_; }
  std::span<const double> weights() const { return weights_; }
  double gamma() const { return gamma_; }
  const MapleParams& params() const { return params_; }
  const std::vector<bool>& answered() const { return answered_; }
  std::size_t size() const { return weights_.size(); }
  std::size_t remaining() const;

  friend MapleState update(MapleState state, std::size_t position, Grade grade);

 private:
  DifficultyRanking order_;
  std::vector<double> weights_;
  double gamma_;
  MapleParams params_;
  std::vector<bool> answered_;
};

// Softmax initialisation: w_j proportional to exp(c (N - j) / N) for 1-based
// position j, so easier questions start heavier.
MapleState initialize(DifficultyRanking ranking, const MapleParams& params);

// Exploration-mixed selection distribution for given noise draws
// epsilons[j] in [-1, 1]: clamp at pi_floor, zero answered positions under
// no_repeat, normalise.
std::vector<double> exploration_distribution(const MapleState& state,
                                             std::span<const double> epsilons);

// Samples the next question. Does not modify the state. Throws
// ExhaustedPoolError when no_repeat is set and every question was answered.
Selection next_question(const MapleState& state, Rng& rng);

// Grade-driven update at 0-based position. Throws std::out_of_range for a
// position outside the ranking.
MapleState update(MapleState state, std::size_t position, Grade grade);

}  // namespace maple
