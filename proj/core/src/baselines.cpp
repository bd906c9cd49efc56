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

#include "maple/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace maple {

AscendingSchedule::AscendingSchedule(std::span<const Question> questions) {
  for (const Question& q : questions) {
    if (q.level < kMinLevel || q.level > kMaxLevel) {
      throw ValidationError("ascending schedule: question " + std::to_string(q.id.value) +
                            " has level " + std::to_string(q.level));
    }
    pools_[static_cast<std::size_t>(q.level - kMinLevel)].push_back(q.id);
  }
  for (auto& pool : pools_) std::sort(pool.begin(), pool.end());
}

int AscendingSchedule::scheduled_level(std::size_t session_length, std::size_t step) {
  if (step >= session_length) throw std::out_of_range("ascending: step beyond session length");
  std::size_t cumulative = 0;
  for (std::size_t k = 0; k < kPercent.size(); ++k) {
    cumulative += static_cast<std::size_t>(kPercent[k]);
    const std::size_t boundary = (cumulative * session_length + 99) / 100;
    if (step < boundary) return static_cast<int>(k) + kMinLevel;
  }
  return kMaxLevel;
}

std::size_t AscendingSchedule::remaining(int level) const {
  return pools_.at(static_cast<std::size_t>(level - kMinLevel)).size();
}

std::size_t AscendingSchedule::remaining() const {
  std::size_t total = 0;
  for (const auto& pool : pools_) total += pool.size();
  return total;
}

QuestionId ascending_next(AscendingSchedule& schedule, std::size_t session_length,
                          std::size_t step, Rng& rng) {
  const int wanted = AscendingSchedule::scheduled_level(session_length, step);
  auto try_level = [&](int level) -> std::vector<QuestionId>* {
    auto& pool = schedule.pools_[static_cast<std::size_t>(level - kMinLevel)];
    return pool.empty() ? nullptr : &pool;
  };
  std::vector<QuestionId>* pool = nullptr;
  for (int level = wanted; level <= kMaxLevel && !pool; ++level) pool = try_level(level);
  for (int level = wanted - 1; level >= kMinLevel && !pool; --level) pool = try_level(level);
  if (!pool) throw ExhaustedPoolError("ascending: every question has been asked");

  const std::size_t pick = rng.below(pool->size());
  const QuestionId chosen = (*pool)[pick];
  pool->erase(pool->begin() + static_cast<std::ptrdiff_t>(pick));
  return chosen;
}

QuestionId edurank_next(const DifficultyRanking& ranking, std::size_t step) {
  if (step >= ranking.size()) {
    std::ostringstream msg;
    msg << "edurank: step " << step << " beyond ranking of " << ranking.size();
    throw std::out_of_range(msg.str());
  }
  return ranking.at(step);
}

std::string_view to_string(NaiveInit mode) {
  switch (mode) {
    case NaiveInit::kUniformRandomOrder:
      return "uniform_random_order";
    case NaiveInit::kDirichletWeights:
      return "dirichlet_weights";
  }
  return "uniform_random_order";
}

NaiveInit naive_init_from_string(std::string_view token) {
  if (token == "uniform_random_order") return NaiveInit::kUniformRandomOrder;
  if (token == "dirichlet_weights") return NaiveInit::kDirichletWeights;
  throw ValidationError("naive_init: unknown mode '" + std::string(token) + "'");
}

MapleState naive_maple_initialize(std::span<const QuestionId> question_set,
                                  const MapleParams& params, Rng& rng, NaiveInit mode,
                                  StudentId student) {
  params.validate();
  if (question_set.empty()) throw ValidationError("naive maple: empty question set");
  std::vector<QuestionId> order(question_set.begin(), question_set.end());
  rng.shuffle(order);

  const std::size_t n = order.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  if (mode == NaiveInit::kDirichletWeights) {
    // Flat Dirichlet via normalised unit exponentials.
    for (double& x : w) x = -std::log1p(-rng.uniform());
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
  }
  return MapleState(DifficultyRanking(student, std::move(order)), std::move(w), params.gamma0,
                    params, std::vector<bool>(n, false));
}

}  // namespace maple
