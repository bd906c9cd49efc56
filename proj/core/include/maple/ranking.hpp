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

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maple/domain.hpp"

namespace maple {

enum class TieBreak { kAscendingId, kDescendingId };

std::string_view to_string(TieBreak rule);
TieBreak tie_break_from_string(std::string_view token);

struct RankingParams {
  int k_neighbors = 20;
  int min_common_questions = 3;
  TieBreak tie_break = TieBreak::kAscendingId;

  // Throws ValidationError naming the offending field.
  void validate() const;
};

// Kendall tau-b between paired samples. Returns 0 when either side is
// constant (the coefficient is undefined there).
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

// 1 - mean grade for every question the student attempted (higher = harder).
// Throws ValidationError if the student has no history.
std::map<QuestionId, double> per_student_difficulty(const InteractionHistory& history,
                                                    StudentId student);

// Kendall tau-b over commonly attempted questions; 0 below the
// min_common_questions threshold.
double student_similarity(const InteractionHistory& history, StudentId a, StudentId b,
                          const RankingParams& params);

struct ScoredRanking {
  DifficultyRanking ranking;
  // Aligned with ranking positions.
  std::vector<int> copeland;
  std::vector<bool> has_evidence;
};

// Collaborative difficulty ranking: neighbours by tau-b similarity, a
// similarity-weighted pairwise vote, Copeland aggregation, then fallback by
// global mean difficulty and finally by id.
//
// Precomputes per-student difficulty tables once so many targets can be
// ranked against the same history.
class RankingModel {
 public:
  RankingModel(const InteractionHistory& history, RankingParams params);

  const RankingParams& params() const { return params_; }
  std::span<const StudentId> students() const { return students_; }

  double similarity(StudentId a, StudentId b) const;

  // Throws ValidationError on an empty question set or an unknown target.
  ScoredRanking rank(StudentId target, std::span<const QuestionId> question_set) const;

  // Ranks every target over the same question set. Output order follows
  // `targets`; work is spread over `threads` workers (0 = hardware).
  std::vector<DifficultyRanking> rank_all(std::span<const StudentId> targets,
                                          std::span<const QuestionId> question_set,
                                          unsigned threads = 0) const;

 private:
  struct Entry {
    std::uint32_t question;
    double score;
  };

  std::size_t index_of(StudentId student) const;
  double similarity_at(std::size_t a, std::size_t b) const;
  std::vector<std::size_t> neighbours(std::size_t target,
                                      const std::vector<double>* cached_row) const;
  ScoredRanking rank_with(std::size_t target, std::span<const QuestionId> question_set,
                          const std::vector<double>* cached_row) const;

  RankingParams params_;
  std::vector<StudentId> students_;
  std::map<std::uint32_t, std::size_t> index_;
  std::vector<std::vector<Entry>> tables_;  // per student, sorted by question
  std::map<std::uint32_t, double> global_mean_;
};

DifficultyRanking rank_questions(const InteractionHistory& history, StudentId target,
                                 std::span<const QuestionId> question_set,
                                 const RankingParams& params = {});

ScoredRanking rank_questions_scored(const InteractionHistory& history, StudentId target,
                                    std::span<const QuestionId> question_set,
                                    const RankingParams& params = {});

}  // namespace maple
