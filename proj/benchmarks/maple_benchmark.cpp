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


#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "maple/baselines.hpp"
#include "maple/harness.hpp"
#include "maple/maple.hpp"
#include "maple/ranking.hpp"
#include "maple/simulator.hpp"

namespace {

using namespace maple;

DifficultyRanking ranking_of(std::size_t n) {
  std::vector<QuestionId> order;
  for (std::uint32_t i = 0; i < n; ++i) order.emplace_back(i);
  return DifficultyRanking(StudentId{0}, std::move(order));
}

void BM_NextQuestion(benchmark::State& state) {
  const auto s = initialize(ranking_of(static_cast<std::size_t>(state.range(0))), MapleParams{});
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(next_question(s, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NextQuestion)->Arg(100)->Arg(500)->Arg(2000);

void BM_Update(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  auto s = initialize(ranking_of(n), MapleParams{});
  Rng rng(2);
  for (auto _ : state) {
    const std::size_t pos = rng.below(n);
    s = update(std::move(s), pos, rng.below(2) ? Grade::pass() : Grade::fail());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Update)->Arg(100)->Arg(500)->Arg(2000);

struct RankingFixture {
  Population population;
  InteractionHistory history;
  std::vector<QuestionId> set;

  RankingFixture(std::size_t students, std::size_t questions, std::size_t attempts) {
    Rng rng(3);
    population = generate_population(students, questions, 10, rng);
    history = generate_history(population.students, population.questions, attempts, SimParams{}, 4);
    for (const auto& q : population.questions) set.push_back(q.id);
  }
};

void BM_RankOneStudent(benchmark::State& state) {
  const RankingFixture f(300, static_cast<std::size_t>(state.range(0)), 150);
  const RankingModel model(f.history, RankingParams{});
  for (auto _ : state) benchmark::DoNotOptimize(model.rank(StudentId{0}, f.set));
}
BENCHMARK(BM_RankOneStudent)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_RankAllStudents(benchmark::State& state) {
  const RankingFixture f(300, 100, 150);
  const RankingModel model(f.history, RankingParams{});
  std::vector<StudentId> targets;
  for (const auto& s : f.population.students) targets.push_back(s.id);
  for (auto _ : state) benchmark::DoNotOptimize(model.rank_all(targets, f.set, 1));
}
BENCHMARK(BM_RankAllStudents)->Unit(benchmark::kMillisecond);

void BM_RunSession(benchmark::State& state) {
  Rng rng(5);
  const auto pop = generate_population(1, 100, 10, rng);
  std::vector<QuestionId> order;
  for (const auto& q : pop.questions) order.push_back(q.id);
  const DifficultyRanking ranking(StudentId{0}, order);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    StudentProfile student = pop.students.front();
    MapleSequencer seq(initialize(ranking, MapleParams{}));
    Rng seq_rng(seed);
    benchmark::DoNotOptimize(
        run_session(student, pop.questions, seq, SimParams{}, 100, seq_rng, seed++));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_RunSession);

}  // namespace

BENCHMARK_MAIN();
