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

#include "maple/domain.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

namespace maple {

Grade::Grade(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream msg;
    msg << "grade " << value << " outside [0, 1]";
    throw ValidationError(msg.str());
  }
}

void InteractionHistory::append(const AttemptRecord& record) {
  auto& mine = by_student_[record.student.value];
  if (!mine.empty() && records_[mine.back()].attempt_index >= record.attempt_index) {
    std::ostringstream msg;
    msg << "student " << record.student << ": attempt_index " << record.attempt_index
        << " does not follow " << records_[mine.back()].attempt_index;
    if (mine.empty()) by_student_.erase(record.student.value);
    throw ValidationError(msg.str());
  }
  mine.push_back(records_.size());
  by_question_[record.question.value].push_back(records_.size());
  records_.push_back(record);
}

std::vector<StudentId> InteractionHistory::students() const {
  std::vector<StudentId> out;
  out.reserve(by_student_.size());
  for (const auto& [id, _] : by_student_) out.emplace_back(id);
  return out;
}

namespace {
const std::vector<std::size_t> kNoRecords;
}

const std::vector<std::size_t>& InteractionHistory::for_student(StudentId student) const {
  auto it = by_student_.find(student.value);
  return it == by_student_.end() ? kNoRecords : it->second;
}

const std::vector<std::size_t>& InteractionHistory::for_question(QuestionId question) const {
  auto it = by_question_.find(question.value);
  return it == by_question_.end() ? kNoRecords : it->second;
}

std::vector<AttemptRecord> InteractionHistory::for_pair(StudentId student,
                                                        QuestionId question) const {
  std::vector<AttemptRecord> out;
  for (std::size_t i : for_student(student)) {
    if (records_[i].question == question) out.push_back(records_[i]);
  }
  return out;
}

DifficultyRanking::DifficultyRanking(StudentId student, std::vector<QuestionId> order)
    : student_(student), order_(std::move(order)) {
  positions_.reserve(order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (!positions_.emplace(order_[i].value, i).second) {
      std::ostringstream msg;
      msg << "ranking for student " << student_ << " lists question " << order_[i] << " twice";
      throw ValidationError(msg.str());
    }
  }
}

QuestionId DifficultyRanking::at(std::size_t position) const {
  if (position >= order_.size()) throw std::out_of_range("ranking position out of range");
  return order_[position];
}

std::size_t DifficultyRanking::position_of(QuestionId question) const {
  auto it = positions_.find(question.value);
  if (it == positions_.end()) throw std::out_of_range("question not in ranking");
  return it->second;
}

std::vector<std::size_t> DifficultyRanking::inverse() const {
  std::vector<QuestionId> sorted(order_);
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> inv(sorted.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) inv[k] = position_of(sorted[k]);
  return inv;
}

ValidationReport validate_dataset(std::span<const Question> questions,
                                  std::span<const AttemptRecord> records) {
  ValidationReport report;
  auto add = [&report](Violation::Kind kind, const std::string& text) {
    report.push_back({kind, text});
  };

  std::unordered_set<std::uint32_t> known;
  for (const Question& q : questions) {
    const std::string name = "question " + std::to_string(q.id.value);
    if (!known.insert(q.id.value).second) {
      add(Violation::Kind::kDuplicateQuestion, name + ": duplicate id");
    }
    if (q.level < kMinLevel || q.level > kMaxLevel) {
      add(Violation::Kind::kLevelOutOfRange,
          name + ": level " + std::to_string(q.level) + " outside 1..5");
    }
    if (!(q.ql > 0.0 && q.ql <= 1.0)) {
      add(Violation::Kind::kLatentOutOfRange, name + ": latent difficulty outside (0, 1]");
    }
  }

  std::unordered_map<std::uint32_t, std::uint32_t> last_attempt;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const AttemptRecord& r = records[i];
    const std::string where = "record " + std::to_string(i);
    if (!known.contains(r.question.value)) {
      add(Violation::Kind::kUnknownQuestion,
          where + ": references unknown question " + std::to_string(r.question.value));
    }
    auto [it, fresh] = last_attempt.emplace(r.student.value, r.attempt_index);
    if (!fresh) {
      if (r.attempt_index <= it->second) {
        add(Violation::Kind::kAttemptOrder,
            where + ": attempt_index " + std::to_string(r.attempt_index) +
                " not increasing for student " + std::to_string(r.student.value));
      }
      it->second = r.attempt_index;
    }
  }
  return report;
}

ValidationReport validate_dataset(std::span<const Question> questions,
                                  const InteractionHistory& history) {
  return validate_dataset(questions, history.records());
}

}  // namespace maple
