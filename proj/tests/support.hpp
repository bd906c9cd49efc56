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

#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <span>
#include <tuple>
#include <vector>

#include "maple/domain.hpp"

namespace maple::test {

struct Row {
  std::uint32_t student;
  std::uint32_t question;
  double grade;
};

// Attempt indices are assigned per student in row order.
inline InteractionHistory history_of(std::initializer_list<Row> rows) {
  InteractionHistory h;
  std::map<std::uint32_t, std::uint32_t> next;
  for (const Row& r : rows) {
    h.append({StudentId{r.student}, QuestionId{r.question}, Grade(r.grade), next[r.student]++});
  }
  return h;
}

inline InteractionHistory history_of(std::span<const Row> rows) {
  InteractionHistory h;
  std::map<std::uint32_t, std::uint32_t> next;
  for (const Row& r : rows) {
    h.append({StudentId{r.student}, QuestionId{r.question}, Grade(r.grade), next[r.student]++});
  }
  return h;
}

inline std::vector<QuestionId> qids(std::initializer_list<std::uint32_t> ids) {
  std::vector<QuestionId> out;
  for (auto id : ids) out.emplace_back(id);
  return out;
}

inline DifficultyRanking ranking_of(std::size_t n, std::uint32_t student = 0) {
  std::vector<QuestionId> order;
  for (std::uint32_t i = 0; i < n; ++i) order.emplace_back(i + 1);
  return DifficultyRanking(StudentId{student}, std::move(order));
}

inline double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace maple::test
