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

#include "maple/maple.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace maple {
namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ValidationError(std::string(field) + ": " + what);
}

void normalize(std::vector<double>& w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
}

}  // namespace

void MapleParams::validate() const {
  require(eta > 0.0 && eta < 1.0, "eta", "must lie in (0, 1)");
  require(alpha1 > 0.0 && alpha2 > 0.0 && alpha3 > 0.0 && alpha4 > 0.0, "alpha",
          "normalisation factors must be positive");
  require(alpha1 >= 1.0, "alpha1", "must be >= 1");
  require(alpha3 <= 1.0, "alpha3", "must be <= 1");
  require(alpha2 >= 1.0, "alpha2", "must be >= 1");
  require(alpha4 <= 1.0, "alpha4", "must be <= 1");
  require(softmax_scale >= 0.0 && std::isfinite(softmax_scale), "softmax_scale",
          "must be a finite nonnegative number");
  require(gamma_min >= 0.0, "gamma_min", "must be nonnegative");
  require(gamma_max <= 1.0, "gamma_max", "must be <= 1");
  require(gamma_min <= gamma0, "gamma0", "must be >= gamma_min");
  require(gamma0 <= gamma_max, "gamma0", "must be <= gamma_max");
  require(pi_floor > 0.0, "pi_floor", "must be positive");
}

MapleState::MapleState(DifficultyRanking order, std::vector<double> weights, double gamma,
                       MapleParams params, std::vector<bool> answered)
    : order_(std::move(order)),
      weights_(std::move(weights)),
      gamma_(gamma),
      params_(params),
      answered_(std::move(answered)) {
  params_.validate();
  if (order_.empty()) throw ValidationError("maple state: empty ranking");
  if (weights_.size() != order_.size() || answered_.size() != order_.size()) {
    throw ValidationError("maple state: weights/answered length differs from ranking");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("maple state: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("maple state: weights do not sum to 1");
  if (!(gamma_ >= params_.gamma_min && gamma_ <= params_.gamma_max)) {
    throw ValidationError("maple state: gamma outside [gamma_min, gamma_max]");
  }
}

std::size_t MapleState::remaining() const {
  return static_cast<std::size_t>(std::count(answered_.begin(), answered_.end(), false));
}

MapleState initialize(DifficultyRanking ranking, const MapleParams& params) {
  params.validate();
  const std::size_t n = ranking.size();
  if (n == 0) throw ValidationError("initialize: empty ranking");
  std::vector<double> w(n);
  const double scale = params.softmax_scale / static_cast<double>(n);
  // Position p (0-based) has rank j = p + 1 and score c (N - j) / N.
  for (std::size_t p = 0; p < n; ++p) {
    w[p] = std::exp(scale * static_cast<double>(n - 1 - p));
  }
  normalize(w);
  return MapleState(std::move(ranking), std::move(w), params.gamma0, params,
                    std::vector<bool>(n, false));
}

std::vector<double> exploration_distribution(const MapleState& state,
                                             std::span<const double> epsilons) {
  const std::size_t n = state.size();
  if (epsilons.size() != n) throw std::invalid_argument("exploration noise length mismatch");
  const MapleParams& p = state.params();
  const double gamma = state.gamma();
  std::vector<double> pi(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    pi[j] = std::max(state.weights()[j] * (1.0 - gamma) + epsilons[j] * gamma, p.pi_floor);
    if (p.no_repeat && state.answered()[j]) pi[j] = 0.0;
    total += pi[j];
  }
  if (total <= 0.0) throw ExhaustedPoolError("maple: every question has been answered");
  for (double& x : pi) x /= total;
  return pi;
}

Selection next_question(const MapleState& state, Rng& rng) {
  if (state.params().no_repeat && state.remaining() == 0) {
    throw ExhaustedPoolError("maple: every question has been answered");
  }
  std::vector<double> eps(state.size());
  for (double& e : eps) e = rng.uniform(-1.0, 1.0);
  const auto pi = exploration_distribution(state, eps);
  const std::size_t s = sample_categorical(pi, rng);
  return {state.order().at(s), s};
}

MapleState update(MapleState state, std::size_t position, Grade grade) {
  const std::size_t n = state.size();
  if (position >= n) {
    std::ostringstream msg;
    msg << "maple update: position " << position << " outside ranking of " << n;
    throw std::out_of_range(msg.str());
  }
  const MapleParams& p = state.params_;
  const double reward = grade.value() - p.eta;
  const bool success = grade.value() > p.eta;
  const double factor = (success ? p.alpha1 : p.alpha3) * std::exp(reward);
  for (std::size_t j = position + 1; j < n; ++j) state.weights_[j] *= factor;
  normalize(state.weights_);
  state.gamma_ = success ? std::min(p.alpha2 * state.gamma_, p.gamma_max)
                         : std::max(p.alpha4 * state.gamma_, p.gamma_min);
  state.answered_[position] = true;
  return state;
}

}  // namespace maple
