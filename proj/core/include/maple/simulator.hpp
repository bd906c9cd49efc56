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
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "maple/domain.hpp"
#include "maple/random.hpp"

namespace maple {

enum class GradeMode {
  kBinary,      // grade is a Bernoulli(p) draw
  kContinuous,  // grade is p itself
};

std::string_view to_string(GradeMode mode);
GradeMode grade_mode_from_string(std::string_view token);

struct SimParams {
  double theta = 10.0;  // logistic slope
  double beta = 0.95;   // weight of the logistic term against U(0,1) noise
  double delta1 = 0.10;  // learning rate on success
  double delta2 = 0.05;  // decay rate on failure
  double eta = 0.7;      // a grade above eta counts as success
  GradeMode grade_mode = GradeMode::kBinary;
  bool history_with_replacement = true;

  void validate() const;
};

// Latent competency per skill, dense by SkillId.
struct StudentProfile {
  StudentId id;
  std::vector<double> skills;

  double mean_skill() const;
  double skill(SkillId k) const;

  friend bool operator==(const StudentProfile&, const StudentProfile&) = default;
};

// 1 / (1 + exp(theta (ql - sl))).
double p_success_deterministic(double sl, double ql, double theta);

// beta * logistic + (1 - beta) * eps, eps ~ U(0, 1) drawn from rng.
double p_success(double sl, double ql, const SimParams& params, Rng& rng);

// Grade for one attempt: draws eps first, then the Bernoulli outcome (binary
// mode). Throws ValidationError if the profile lacks the question's skill.
Grade attempt(const StudentProfile& student, const Question& question, const SimParams& params,
              Rng& rng);

// Success (grade > eta): sl + delta1 ql (1 - sl). Failure: sl - delta2 (1 - ql) sl.
double update_skill(double sl, double ql, Grade grade, const SimParams& params);

struct Population {
  std::vector<StudentProfile> students;
  std::vector<Question> questions;
};

// Uniform skill per question, uniform level in 1..5, ql = level / 5, and
// i.i.d. U(0, 1) competencies.
Population generate_population(std::size_t n_students, std::size_t n_questions,
                               std::size_t n_skills, Rng& rng);

// Pre-session interaction log. Each student draws from its own substream of
// `seed`; skills evolve on a private copy, the input profiles are untouched.
InteractionHistory generate_history(std::span<const StudentProfile> students,
                                    std::span<const Question> questions,
                                    std::size_t attempts_per_student, const SimParams& params,
                                    std::uint64_t seed);

}  // namespace maple
