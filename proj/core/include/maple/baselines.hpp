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

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "maple/domain.hpp"
#include "maple/maple.hpp"
#include "maple/random.hpp"
#include "maple/sequencer.hpp"

namespace maple {

// Expert schedule: 10/20/30/30/10 percent of a session drawn from levels 1..5
// in that order.
class AscendingSchedule {
 public:
  static constexpr std::array<int, kNumLevels> kPercent = {10, 20, 30, 30, 10};

  explicit AscendingSchedule(std::span<const Question> questions);

  // Level (1..5) scheduled for 0-based step t of a session of length L,
  // from the cumulative boundaries ceil(0.1L), ceil(0.3L), ceil(0.6L),
  // ceil(0.9L).
  static int scheduled_level(std::size_t session_length, std::size_t step);

  std::size_t remaining(int level) const;
  std::size_t remaining() const;

 private:
  friend QuestionId ascending_next(AscendingSchedule&, std::size_t, std::size_t, Rng&);

  std::array<std::vector<QuestionId>, kNumLevels> pools_;  // not yet asked
};

// Uniformly random unasked question of the scheduled level. An exhausted
// level spills forward to the next level with questions left, then back to
// the nearest easier one. Throws ExhaustedPoolError when nothing is left and
// std::out_of_range for step >= session_length.
QuestionId ascending_next(AscendingSchedule& schedule, std::size_t session_length,
                          std::size_t step, Rng& rng);

// Question at ranking position `step` (0-based).
QuestionId edurank_next(const DifficultyRanking& ranking, std::size_t step);

enum class NaiveInit { kUniformRandomOrder, kDirichletWeights };

std::string_view to_string(NaiveInit mode);
NaiveInit naive_init_from_string(std::string_view token);

// Bandit without difficulty knowledge: a uniformly random order over the
// question set with uniform weights (or flat-Dirichlet weights).
MapleState naive_maple_initialize(std::span<const QuestionId> question_set,
                                  const MapleParams& params, Rng& rng,
                                  NaiveInit mode = NaiveInit::kUniformRandomOrder,
                                  StudentId student = StudentId{0});

class AscendingSequencer final : public Sequencer {
 public:
  AscendingSequencer(std::span<const Question> questions, std::size_t session_length)
      : schedule_(questions), session_length_(session_length) {}

  Selection next(std::size_t step, Rng& rng) override {
    return {ascending_next(schedule_, session_length_, step, rng), step};
  }
  void update(const Selection&, Grade) override {}

 private:
  AscendingSchedule schedule_;
  std::size_t session_length_;
};

class EduRankSequencer final : public Sequencer {
 public:
  explicit EduRankSequencer(DifficultyRanking ranking) : ranking_(std::move(ranking)) {}

  Selection next(std::size_t step, Rng&) override { return {edurank_next(ranking_, step), step}; }
  void update(const Selection&, Grade) override {}

 private:
  DifficultyRanking ranking_;
};

}  // namespace maple
