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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maple/baselines.hpp"
#include "maple/domain.hpp"
#include "maple/maple.hpp"
#include "maple/random.hpp"
#include "maple/ranking.hpp"
#include "maple/sequencer.hpp"
#include "maple/simulator.hpp"

namespace maple {

enum class Algorithm { kMaple, kAscending, kEduRank, kNaiveMaple };

inline constexpr std::array<Algorithm, 4> kAllAlgorithms = {
    Algorithm::kMaple, Algorithm::kAscending, Algorithm::kEduRank, Algorithm::kNaiveMaple};

std::string_view to_string(Algorithm algorithm);
Algorithm algorithm_from_string(std::string_view token);

// kAll is a reporting aggregate; classify_student never returns it.
enum class Segment { kWeak, kAverage, kStrong, kAll };

inline constexpr std::array<Segment, 4> kReportSegments = {Segment::kWeak, Segment::kAverage,
                                                           Segment::kStrong, Segment::kAll};

std::string_view to_string(Segment segment);

// weak: mean initial skill < 0.33; average: [0.33, 0.67]; strong: > 0.67.
Segment classify_mean_skill(double mean);
Segment classify_student(const StudentProfile& profile);

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t n_students = 300;
  std::size_t n_questions = 100;
  std::size_t n_skills = 10;
  std::size_t session_length = 100;
  std::size_t history_attempts = 150;
  std::size_t replications = 3;
  std::vector<Algorithm> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
  MapleParams maple;
  SimParams sim;
  RankingParams ranking;
  NaiveInit naive_init = NaiveInit::kUniformRandomOrder;
  unsigned threads = 0;  // worker count, 0 = hardware; never changes results

  static ExperimentConfig desk();
  static ExperimentConfig paper();

  // Every violated constraint, one message per problem, each naming the key.
  std::vector<std::string> problems() const;
  // Throws ValidationError listing problems().
  void validate() const;
};

struct TraceStep {
  QuestionId question;
  int level = 0;
  Grade grade;
  double mean_skill = 0.0;  // after the skill update
};

using SessionTrace = std::vector<TraceStep>;

// Plays one session: next question, attempt, sequencer update, skill update.
// `student` is updated in place. Outcome randomness for the k-th attempt of
// question q comes from Rng::substream(outcome_seed, {q, k}), so two
// sequencers facing the same student share luck on the same question.
SessionTrace run_session(StudentProfile& student, std::span<const Question> questions,
                         Sequencer& sequencer, const SimParams& params,
                         std::size_t session_length, Rng& sequencer_rng,
                         std::uint64_t outcome_seed);

struct ArmResult {
  Algorithm algorithm = Algorithm::kMaple;
  // progression[r][t][g]: mean skill at step t (0 = before the session) for
  // kReportSegments[g] in replication r.
  std::vector<std::vector<std::array<double, 4>>> progression;
  // mix[r][t][level - 1]: questions of each level served at step t (0-based).
  std::vector<std::vector<std::array<std::size_t, kNumLevels>>> mix;
};

struct ExperimentResult {
  ExperimentConfig config;
  // segment_sizes[r][g], shared by every arm (paired design).
  std::vector<std::array<std::size_t, 4>> segment_sizes;
  std::vector<ArmResult> arms;

  const ArmResult& arm(Algorithm algorithm) const;
  double final_mean(Algorithm algorithm, std::size_t replication, Segment segment) const;
};

// Population and history generation, rankings, paired sessions for every
// arm, aggregation. Deterministic in (config minus threads).
ExperimentResult run_experiment(const ExperimentConfig& config);

// Building blocks of run_experiment, exposed for tools and tests.
struct ReplicationData {
  Population population;
  InteractionHistory history;
};

std::uint64_t replication_seed(std::uint64_t seed, std::size_t replication);
ReplicationData generate_replication(const ExperimentConfig& config, std::size_t replication);

}  // namespace maple
