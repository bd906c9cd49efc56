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

#include "maple/simulator.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace maple {

std::string_view to_string(GradeMode mode) {
  return mode == GradeMode::kBinary ? "binary" : "continuous";
}

GradeMode grade_mode_from_string(std::string_view token) {
  if (token == "binary") return GradeMode::kBinary;
  if (token == "continuous") return GradeMode::kContinuous;
  throw ValidationError("grade_mode: unknown mode '" + std::string(token) + "'");
}

void SimParams::validate() const {
  if (!(theta > 0.0)) throw ValidationError("theta: must be positive");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ValidationError("beta: must lie in [0, 1]");
  if (!(delta1 > 0.0 && delta1 < 1.0)) throw ValidationError("delta1: must lie in (0, 1)");
  if (!(delta2 > 0.0 && delta2 < 1.0)) throw ValidationError("delta2: must lie in (0, 1)");
  if (!(eta > 0.0 && eta < 1.0)) throw ValidationError("eta: must lie in (0, 1)");
}

double StudentProfile::mean_skill() const {
  if (skills.empty()) return 0.0;
  return std::accumulate(skills.begin(), skills.end(), 0.0) / static_cast<double>(skills.size());
}

double StudentProfile::skill(SkillId k) const {
  if (k.value >= skills.size()) {
    std::ostringstream msg;
    msg << "student " << id << " has no competency for skill " << k;
    throw ValidationError(msg.str());
  }
  return skills[k.value];
}

double p_success_deterministic(double sl, double ql, double theta) {
  return 1.0 / (1.0 + std::exp(theta * (ql - sl)));
}

double p_success(double sl, double ql, const SimParams& params, Rng& rng) {
  const double noise = rng.uniform();
  return params.beta * p_success_deterministic(sl, ql, params.theta) +
         (1.0 - params.beta) * noise;
}

Grade attempt(const StudentProfile& student, const Question& question, const SimParams& params,
              Rng& rng) {
  const double sl = student.skill(question.skill);
  const double p = std::min(1.0, std::max(0.0, p_success(sl, question.ql, params, rng)));
  if (params.grade_mode == GradeMode::kContinuous) return Grade(p);
  return rng.uniform() < p ? Grade::pass() : Grade::fail();
}

double update_skill(double sl, double ql, Grade grade, const SimParams& params) {
  if (grade.value() > params.eta) return sl + params.delta1 * ql * (1.0 - sl);
  return sl - params.delta2 * (1.0 - ql) * sl;
}

Population generate_population(std::size_t n_students, std::size_t n_questions,
                               std::size_t n_skills, Rng& rng) {
  if (n_students == 0 || n_questions == 0 || n_skills == 0) {
    throw ValidationError("generate_population: counts must be >= 1");
  }
  Population pop;
  pop.questions.reserve(n_questions);
  for (std::size_t i = 0; i < n_questions; ++i) {
    Question q;
    q.id = QuestionId(static_cast<std::uint32_t>(i));
    q.skill = SkillId(static_cast<std::uint32_t>(rng.below(n_skills)));
    q.level = kMinLevel + static_cast<int>(rng.below(kNumLevels));
    q.ql = level_to_latent(q.level);
    pop.questions.push_back(q);
  }
  pop.students.reserve(n_students);
  for (std::size_t s = 0; s < n_students; ++s) {
    StudentProfile p{StudentId(static_cast<std::uint32_t>(s)), std::vector<double>(n_skills)};
    for (double& sl : p.skills) sl = rng.uniform();
    pop.students.push_back(std::move(p));
  }
  return pop;
}

InteractionHistory generate_history(std::span<const StudentProfile> students,
                                    std::span<const Question> questions,
                                    std::size_t attempts_per_student, const SimParams& params,
                                    std::uint64_t seed) {
  params.validate();
  if (attempts_per_student == 0) {
    throw ValidationError("generate_history: attempts_per_student must be >= 1");
  }
  if (questions.empty()) throw ValidationError("generate_history: no questions");

  InteractionHistory history;
  std::vector<std::size_t> deck(questions.size());
  for (const StudentProfile& original : students) {
    StudentProfile student = original;
    Rng rng = Rng::substream(seed, {student.id.value});
    std::size_t dealt = deck.size();
    for (std::size_t a = 0; a < attempts_per_student; ++a) {
      std::size_t pick;
      if (params.history_with_replacement) {
        pick = rng.below(questions.size());
      } else {
        // Without replacement within each pass over the bank.
        if (dealt == deck.size()) {
          std::iota(deck.begin(), deck.end(), std::size_t{0});
          rng.shuffle(deck);
          dealt = 0;
        }
        pick = deck[dealt++];
      }
      const Question& q = questions[pick];
      const Grade g = attempt(student, q, params, rng);
      history.append({student.id, q.id, g, static_cast<std::uint32_t>(a)});
      double& sl = student.skills[q.skill.value];
      sl = update_skill(sl, q.ql, g, params);
    }
  }
  return history;
}

}  // namespace maple
