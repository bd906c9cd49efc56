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

#include "maple/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "parallel.hpp"

namespace maple {

std::string_view to_string(TieBreak rule) {
  switch (rule) {
    case TieBreak::kAscendingId:
      return "ascending_id";
    case TieBreak::kDescendingId:
      return "descending_id";
  }
  return "ascending_id";
}

TieBreak tie_break_from_string(std::string_view token) {
  if (token == "ascending_id") return TieBreak::kAscendingId;
  if (token == "descending_id") return TieBreak::kDescendingId;
  throw ValidationError("tie_break: unknown rule '" + std::string(token) + "'");
}

void RankingParams::validate() const {
  if (k_neighbors < 1) throw ValidationError("k_neighbors: must be >= 1");
  if (min_common_questions < 1) throw ValidationError("min_common_questions: must be >= 1");
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("kendall_tau_b: length mismatch");
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) {
        ++ties_x;
        ++ties_y;
      } else if (dx == 0.0) {
        ++ties_x;
      } else if (dy == 0.0) {
        ++ties_y;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const long long pairs = static_cast<long long>(n) * static_cast<long long>(n - (n > 0)) / 2;
  // One sqrt of the exact integer product keeps perfect agreement at exactly
  // 1, so equally similar neighbours compare equal.
  const double denom = std::sqrt(static_cast<double>(pairs - ties_x) *
                                 static_cast<double>(pairs - ties_y));
  if (denom == 0.0) return 0.0;
  return std::clamp(static_cast<double>(concordant - discordant) / denom, -1.0, 1.0);
}

std::map<QuestionId, double> per_student_difficulty(const InteractionHistory& history,
                                                    StudentId student) {
  const auto& rows = history.for_student(student);
  if (rows.empty()) {
    std::ostringstream msg;
    msg << "student " << student << " has no history";
    throw ValidationError(msg.str());
  }
  std::map<QuestionId, std::pair<double, int>> sums;
  for (std::size_t i : rows) {
    auto& [total, count] = sums[history[i].question];
    total += history[i].grade.value();
    ++count;
  }
  std::map<QuestionId, double> out;
  for (const auto& [q, tc] : sums) out.emplace(q, 1.0 - tc.first / tc.second);
  return out;
}

double student_similarity(const InteractionHistory& history, StudentId a, StudentId b,
                          const RankingParams& params) {
  const auto da = per_student_difficulty(history, a);
  const auto db = per_student_difficulty(history, b);
  std::vector<double> xs, ys;
  for (const auto& [q, score] : da) {
    if (auto it = db.find(q); it != db.end()) {
      xs.push_back(score);
      ys.push_back(it->second);
    }
  }
  if (xs.size() < static_cast<std::size_t>(params.min_common_questions)) return 0.0;
  return kendall_tau_b(xs, ys);
}

RankingModel::RankingModel(const InteractionHistory& history, RankingParams params)
    : params_(params) {
  params_.validate();
  if (history.empty()) throw ValidationError("ranking requires a nonempty history");

  students_ = history.students();
  tables_.reserve(students_.size());
  std::map<std::uint32_t, std::pair<double, int>> global;
  for (std::size_t s = 0; s < students_.size(); ++s) {
    index_.emplace(students_[s].value, s);
    std::vector<Entry> table;
    for (const auto& [q, score] : per_student_difficulty(history, students_[s])) {
      table.push_back({q.value, score});
      auto& [total, count] = global[q.value];
      total += score;
      ++count;
    }
    tables_.push_back(std::move(table));
  }
  for (const auto& [q, tc] : global) global_mean_.emplace(q, tc.first / tc.second);
}

std::size_t RankingModel::index_of(StudentId student) const {
  auto it = index_.find(student.value);
  if (it == index_.end()) {
    std::ostringstream msg;
    msg << "student " << student << " has no history";
    throw ValidationError(msg.str());
  }
  return it->second;
}

double RankingModel::similarity(StudentId a, StudentId b) const {
  return similarity_at(index_of(a), index_of(b));
}

double RankingModel::similarity_at(std::size_t a, std::size_t b) const {
  const auto& ta = tables_[a];
  const auto& tb = tables_[b];
  std::vector<double> xs, ys;
  xs.reserve(std::min(ta.size(), tb.size()));
  ys.reserve(xs.capacity());
  auto ia = ta.begin();
  auto ib = tb.begin();
  while (ia != ta.end() && ib != tb.end()) {
    if (ia->question < ib->question) {
      ++ia;
    } else if (ib->question < ia->question) {
      ++ib;
    } else {
      xs.push_back(ia->score);
      ys.push_back(ib->score);
      ++ia;
      ++ib;
    }
  }
  if (xs.size() < static_cast<std::size_t>(params_.min_common_questions)) return 0.0;
  return kendall_tau_b(xs, ys);
}

std::vector<std::size_t> RankingModel::neighbours(std::size_t target,
                                                  const std::vector<double>* cached_row) const {
  std::vector<std::pair<double, std::size_t>> candidates;
  for (std::size_t s = 0; s < students_.size(); ++s) {
    if (s == target) continue;
    const double sim = cached_row ? (*cached_row)[s] : similarity_at(target, s);
    if (sim > 0.0) candidates.emplace_back(sim, s);
  }
  // Most similar first; equal similarity falls back to ascending student id.
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  if (candidates.size() > static_cast<std::size_t>(params_.k_neighbors)) {
    candidates.resize(static_cast<std::size_t>(params_.k_neighbors));
  }
  std::vector<std::size_t> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(c.second);
  return out;
}

ScoredRanking RankingModel::rank(StudentId target,
                                 std::span<const QuestionId> question_set) const {
  return rank_with(index_of(target), question_set, nullptr);
}

ScoredRanking RankingModel::rank_with(std::size_t target,
                                      std::span<const QuestionId> question_set,
                                      const std::vector<double>* cached_row) const {
  if (question_set.empty()) throw ValidationError("ranking requires a nonempty question set");
  const std::size_t n = question_set.size();

  const auto near = neighbours(target, cached_row);

  // Dense difficulty matrix [neighbour][question]; NaN = not attempted.
  const double missing = std::nan("");
  std::vector<std::vector<double>> scores(near.size(), std::vector<double>(n, missing));
  std::vector<double> weight(near.size());
  std::map<std::uint32_t, std::size_t> column;
  for (std::size_t j = 0; j < n; ++j) column.emplace(question_set[j].value, j);
  if (column.size() != n) throw ValidationError("question set contains duplicates");
  for (std::size_t k = 0; k < near.size(); ++k) {
    weight[k] = cached_row ? (*cached_row)[near[k]] : similarity_at(target, near[k]);
    for (const Entry& e : tables_[near[k]]) {
      if (auto it = column.find(e.question); it != column.end()) scores[k][it->second] = e.score;
    }
  }

  std::vector<int> copeland(n, 0);
  std::vector<bool> evidence(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double easier_i = 0.0, easier_j = 0.0;
      bool shared = false;
      for (std::size_t k = 0; k < near.size(); ++k) {
        const double si = scores[k][i];
        const double sj = scores[k][j];
        if (std::isnan(si) || std::isnan(sj)) continue;
        shared = true;
        if (si < sj) {
          easier_i += weight[k];
        } else if (sj < si) {
          easier_j += weight[k];
        }
      }
      if (!shared) continue;
      evidence[i] = evidence[j] = true;
      if (easier_i > easier_j) {
        ++copeland[i];
        --copeland[j];
      } else if (easier_j > easier_i) {
        ++copeland[j];
        --copeland[i];
      }
    }
  }

  const bool ascending = params_.tie_break == TieBreak::kAscendingId;
  auto id_before = [&](std::size_t a, std::size_t b) {
    return ascending ? question_set[a] < question_set[b] : question_set[b] < question_set[a];
  };
  auto mean_of = [&](std::size_t j) -> const double* {
    auto it = global_mean_.find(question_set[j].value);
    return it == global_mean_.end() ? nullptr : &it->second;
  };
  // Tier 0: neighbour evidence, by Copeland score (high = easy).
  // Tier 1: global mean difficulty. Tier 2: never observed.
  auto tier = [&](std::size_t j) { return evidence[j] ? 0 : (mean_of(j) ? 1 : 2); };

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const int ta = tier(a), tb = tier(b);
    if (ta != tb) return ta < tb;
    if (ta == 0 && copeland[a] != copeland[b]) return copeland[a] > copeland[b];
    if (ta == 1) {
      const double ma = *mean_of(a), mb = *mean_of(b);
      if (ma != mb) return ma < mb;
    }
    return id_before(a, b);
  });

  ScoredRanking out;
  std::vector<QuestionId> order;
  order.reserve(n);
  for (std::size_t j : idx) {
    order.push_back(question_set[j]);
    out.copeland.push_back(copeland[j]);
    out.has_evidence.push_back(evidence[j]);
  }
  out.ranking = DifficultyRanking(students_[target], std::move(order));
  return out;
}

std::vector<DifficultyRanking> RankingModel::rank_all(std::span<const StudentId> targets,
                                                      std::span<const QuestionId> question_set,
                                                      unsigned threads) const {
  std::vector<std::size_t> target_idx;
  target_idx.reserve(targets.size());
  for (StudentId t : targets) target_idx.push_back(index_of(t));

  // Symmetric similarity matrix, computed once for all targets.
  const std::size_t m = students_.size();
  std::vector<std::vector<double>> sim(m, std::vector<double>(m, 0.0));
  detail::parallel_for(m, threads, [&](std::size_t a) {
    for (std::size_t b = a + 1; b < m; ++b) sim[a][b] = similarity_at(a, b);
  });
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) sim[b][a] = sim[a][b];
  }

  std::vector<DifficultyRanking> out(targets.size());
  detail::parallel_for(targets.size(), threads, [&](std::size_t i) {
    out[i] = rank_with(target_idx[i], question_set, &sim[target_idx[i]]).ranking;
  });
  return out;
}

DifficultyRanking rank_questions(const InteractionHistory& history, StudentId target,
                                 std::span<const QuestionId> question_set,
                                 const RankingParams& params) {
  return rank_questions_scored(history, target, question_set, params).ranking;
}

ScoredRanking rank_questions_scored(const InteractionHistory& history, StudentId target,
                                    std::span<const QuestionId> question_set,
                                    const RankingParams& params) {
  return RankingModel(history, params).rank(target, question_set);
}

}  // namespace maple
