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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace maple {

// Raised when a value or a dataset violates a documented invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a sequencer has no question left to offer.
class ExhaustedPoolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class Tag>
struct StrongId {
  std::uint32_t value = 0;

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(StrongId, StrongId) = default;
  friend std::ostream& operator<<(std::ostream& os, StrongId id) { return os << id.value; }
};

using QuestionId = StrongId<struct QuestionTag>;
using StudentId = StrongId<struct StudentTag>;
using SkillId = StrongId<struct SkillTag>;

inline constexpr int kMinLevel = 1;
inline constexpr int kMaxLevel = 5;
inline constexpr int kNumLevels = kMaxLevel - kMinLevel + 1;

// Latent difficulty of a generated question: ql = level / 5.
constexpr double level_to_latent(int level) {
  return static_cast<double>(level) / static_cast<double>(kMaxLevel);
}

// A practice question. Plain aggregate so malformed input can be represented
// and reported by validate_dataset().
struct Question {
  QuestionId id;
  SkillId skill;
  int level = kMinLevel;  // 1 (easiest) .. 5 (hardest)
  double ql = level_to_latent(kMinLevel);

  friend bool operator==(const Question&, const Question&) = default;
};

// Grade in [0, 1]. Construction outside the range throws.
class Grade {
 public:
  constexpr Grade() = default;
  explicit Grade(double value);

  static Grade fail() { return Grade(0.0); }
  static Grade pass() { return Grade(1.0); }

  constexpr double value() const { return value_; }

  friend constexpr auto operator<=>(const Grade&, const Grade&) = default;

 private:
  double value_ = 0.0;
};

struct AttemptRecord {
  StudentId student;
  QuestionId question;
  Grade grade;
  std::uint32_t attempt_index = 0;  // ordinal within the student's history

  friend bool operator==(const AttemptRecord&, const AttemptRecord&) = default;
};

// Append-only interaction log indexed by student and by question.
class InteractionHistory {
 public:
  InteractionHistory() = default;

  // Throws ValidationError if attempt_index does not strictly increase for
  // the record's student.
  void append(const AttemptRecord& record);

  std::span<const AttemptRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  bool contains(StudentId student) const { return by_student_.contains(student.value); }

  // Students in ascending id order.
  std::vector<StudentId> students() const;

  // Record positions in attempt order; empty if absent.
  const std::vector<std::size_t>& for_student(StudentId student) const;
  const std::vector<std::size_t>& for_question(QuestionId question) const;
  std::vector<AttemptRecord> for_pair(StudentId student, QuestionId question) const;

  const AttemptRecord& operator[](std::size_t i) const { return records_[i]; }

  friend bool operator==(const InteractionHistory& a, const InteractionHistory& b) {
    return a.records_ == b.records_;
  }

 private:
  std::vector<AttemptRecord> records_;
  std::map<std::uint32_t, std::vector<std::size_t>> by_student_;
  std::unordered_map<std::uint32_t, std::vector<std::size_t>> by_question_;
};

// Per-student total order over a question set, easiest first.
class DifficultyRanking {
 public:
  DifficultyRanking() = default;
  // Throws ValidationError on duplicate question ids.
  DifficultyRanking(StudentId student, std::vector<QuestionId> order);

  StudentId student() const { return student_; }
  std::span<const QuestionId> order() const { return order_; }
  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }

  // 0-based position; position 0 is the easiest question.
  QuestionId at(std::size_t position) const;
  std::size_t position_of(QuestionId question) const;
  bool contains(QuestionId question) const { return positions_.contains(question.value); }

  // inverse()[k] is the position of the k-th smallest question id.
  std::vector<std::size_t> inverse() const;

  friend bool operator==(const DifficultyRanking& a, const DifficultyRanking& b) {
    return a.student_ == b.student_ && a.order_ == b.order_;
  }

 private:
  StudentId student_;
  std::vector<QuestionId> order_;
  std::unordered_map<std::uint32_t, std::size_t> positions_;
};

struct Violation {
  enum class Kind {
    kDuplicateQuestion,
    kLevelOutOfRange,
    kLatentOutOfRange,
    kUnknownQuestion,
    kAttemptOrder,
  };
  Kind kind;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

// Reports every invariant violation; an empty report means well-formed.
ValidationReport validate_dataset(std::span<const Question> questions,
                                  std::span<const AttemptRecord> records);
ValidationReport validate_dataset(std::span<const Question> questions,
                                  const InteractionHistory& history);

}  // namespace maple

template <class Tag>
struct std::hash<maple::StrongId<Tag>> {
  std::size_t operator()(maple::StrongId<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
