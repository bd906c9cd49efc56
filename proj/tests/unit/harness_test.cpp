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


#include <doctest.h>

#include <algorithm>
#include <vector>

#include "maple/harness.hpp"
#include "support.hpp"

using namespace maple;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n_students = 40;
  c.n_questions = 30;
  c.n_skills = 4;
  c.session_length = 20;
  c.history_attempts = 30;
  c.replications = 2;
  c.seed = 17;
  return c;
}

bool mentions(const std::vector<std::string>& problems, std::string_view key) {
  return std::any_of(problems.begin(), problems.end(),
                     [&](const std::string& p) { return p.rfind(key, 0) == 0; });
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("segment thresholds") {
  CHECK(classify_mean_skill(0.2) == Segment::kWeak);
  CHECK(classify_mean_skill(0.5) == Segment::kAverage);
  CHECK(classify_mean_skill(0.33) == Segment::kAverage);
  CHECK(classify_mean_skill(0.67) == Segment::kAverage);
  CHECK(classify_mean_skill(0.3299) == Segment::kWeak);
  CHECK(classify_mean_skill(0.6701) == Segment::kStrong);
  CHECK(classify_student(StudentProfile{StudentId{1}, {0.9, 0.8}}) == Segment::kStrong);
  CHECK(to_string(Segment::kAll) == "all");
  CHECK(algorithm_from_string("naive_maple") == Algorithm::kNaiveMaple);
  CHECK(to_string(Algorithm::kEduRank) == "edurank");
  CHECK_THROWS_AS(algorithm_from_string("ybkt"), ValidationError);
}

TEST_CASE("presets") {
  const auto desk = ExperimentConfig::desk();
  CHECK(desk.n_students == 300);
  CHECK(desk.n_questions == 100);
  CHECK(desk.session_length == 100);
  CHECK(desk.history_attempts == 150);
  CHECK(desk.replications == 3);
  CHECK(desk.algorithms.size() == 4);
  CHECK(desk.problems().empty());
  const auto paper = ExperimentConfig::paper();
  CHECK(paper.n_students == 1000);
  CHECK(paper.session_length == 200);
  CHECK(paper.history_attempts == 500);
  CHECK(paper.maple.eta == 0.7);
  CHECK(paper.problems().empty());
}

TEST_CASE("config problems name their keys") {
  auto c = small_config();
  c.sim.eta = 0.6;
  c.n_students = 0;
  c.replications = 0;
  c.algorithms = {Algorithm::kMaple, Algorithm::kMaple};
  const auto problems = c.problems();
  CHECK(mentions(problems, "eta"));
  CHECK(mentions(problems, "n_students"));
  CHECK(mentions(problems, "replications"));
  CHECK(mentions(problems, "algorithms"));
  CHECK_THROWS_AS(c.validate(), ValidationError);

  auto longer = small_config();
  longer.session_length = 31;
  longer.algorithms = {Algorithm::kMaple};
  CHECK(longer.problems().empty());  // repeats allowed
  longer.maple.no_repeat = true;
  CHECK(mentions(longer.problems(), "session_length"));
  longer.maple.no_repeat = false;
  longer.algorithms = {Algorithm::kAscending};
  CHECK(mentions(longer.problems(), "session_length"));
}

TEST_CASE("run_session") {
  const auto data = generate_replication(small_config(), 0);
  const auto& questions = data.population.questions;
  StudentProfile student = data.population.students.front();
  const StudentProfile initial = student;

  MapleSequencer empty(initialize(maple::test::ranking_of(questions.size()), MapleParams{}));
  Rng rng(1);
  CHECK(run_session(student, questions, empty, SimParams{}, 0, rng, 5).empty());
  CHECK(student == initial);

  auto play = [&](std::uint64_t seed) {
    StudentProfile s = initial;
    std::vector<QuestionId> order;
    for (const auto& q : questions) order.push_back(q.id);
    MapleSequencer seq(initialize(DifficultyRanking(s.id, order), MapleParams{}));
    Rng r(seed);
    return std::make_pair(run_session(s, questions, seq, SimParams{}, 25, r, seed), s);
  };
  const auto [trace, after] = play(3);
  CHECK(trace.size() == 25);
  for (const auto& step : trace) {
    CHECK(step.mean_skill >= 0.0);
    CHECK(step.mean_skill <= 1.0);
    CHECK(step.level >= kMinLevel);
    CHECK(step.level <= kMaxLevel);
  }
  CHECK(trace.back().mean_skill == doctest::Approx(after.mean_skill()));
  const auto [again, after_again] = play(3);
  CHECK(after == after_again);
  for (std::size_t t = 0; t < trace.size(); ++t) {
    CHECK(trace[t].question == again[t].question);
    CHECK(trace[t].grade == again[t].grade);
  }
}

TEST_CASE("single-arm experiment") {
  auto c = small_config();
  c.algorithms = {Algorithm::kAscending};
  const auto result = run_experiment(c);
  REQUIRE(result.arms.size() == 1);
  CHECK(result.arms[0].algorithm == Algorithm::kAscending);
  CHECK_THROWS(result.arm(Algorithm::kMaple));
}

TEST_CASE("experiment invariants") {
  const auto c = small_config();
  const auto result = run_experiment(c);
  REQUIRE(result.arms.size() == 4);
  REQUIRE(result.segment_sizes.size() == c.replications);
  for (std::size_t r = 0; r < c.replications; ++r) {
    const auto& sizes = result.segment_sizes[r];
    CHECK(sizes[0] + sizes[1] + sizes[2] == c.n_students);
    CHECK(sizes[3] == c.n_students);
  }
  for (const auto& arm : result.arms) {
    for (std::size_t r = 0; r < c.replications; ++r) {
      REQUIRE(arm.progression[r].size() == c.session_length + 1);
      REQUIRE(arm.mix[r].size() == c.session_length);
      // paired design: every arm starts from the same students
      CHECK(arm.progression[r][0] == result.arms[0].progression[r][0]);
      for (const auto& step : arm.progression[r]) {
        for (std::size_t g = 0; g < 4; ++g) {
          if (result.segment_sizes[r][g] == 0) continue;
          CHECK(step[g] >= 0.0);
          CHECK(step[g] <= 1.0);
        }
      }
      for (const auto& counts : arm.mix[r]) {
        std::size_t total = 0;
        for (auto n : counts) total += n;
        CHECK(total == c.n_students);
      }
    }
  }
  // replications use different populations
  CHECK(result.arms[0].progression[0][0] != result.arms[0].progression[1][0]);
}

TEST_CASE("results do not depend on the worker count") {
  auto c = small_config();
  c.threads = 1;
  const auto one = run_experiment(c);
  c.threads = 4;
  const auto four = run_experiment(c);
  REQUIRE(one.arms.size() == four.arms.size());
  for (std::size_t a = 0; a < one.arms.size(); ++a) {
    CHECK(one.arms[a].progression == four.arms[a].progression);
    CHECK(one.arms[a].mix == four.arms[a].mix);
  }
}

TEST_CASE("experiment rejects an invalid config before running") {
  auto c = small_config();
  c.replications = 0;
  CHECK_THROWS_AS(run_experiment(c), ValidationError);
}

}
