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

#include "maple/harness.hpp"

#include <algorithm>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "parallel.hpp"

namespace maple {
namespace {

// Substream tags.
enum : std::uint64_t {
  kPopulationStream = 1,
  kHistoryStream = 2,
  kSequencerStream = 3,
  kOutcomeStream = 4,
  kNaiveInitStream = 5,
};

constexpr std::size_t segment_slot(Segment s) { return static_cast<std::size_t>(s); }

bool needs_ranking(const ExperimentConfig& config) {
  return std::any_of(config.algorithms.begin(), config.algorithms.end(), [](Algorithm a) {
    return a == Algorithm::kMaple || a == Algorithm::kEduRank;
  });
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kMaple:
      return "maple";
    case Algorithm::kAscending:
      return "ascending";
    case Algorithm::kEduRank:
      return "edurank";
    case Algorithm::kNaiveMaple:
      return "naive_maple";
  }
  return "maple";
}

Algorithm algorithm_from_string(std::string_view token) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == token) return a;
  }
  throw ValidationError("algorithms: unknown algorithm '" + std::string(token) + "'");
}

std::string_view to_string(Segment segment) {
  switch (segment) {
    case Segment::kWeak:
      return "weak";
    case Segment::kAverage:
      return "average";
    case Segment::kStrong:
      return "strong";
    case Segment::kAll:
      return "all";
  }
  return "all";
}

Segment classify_mean_skill(double mean) {
  if (mean < 0.33) return Segment::kWeak;
  if (mean > 0.67) return Segment::kStrong;
  return Segment::kAverage;
}

Segment classify_student(const StudentProfile& profile) {
  if (profile.skills.empty()) throw ValidationError("classify_student: empty profile");
  return classify_mean_skill(profile.mean_skill());
}

ExperimentConfig ExperimentConfig::desk() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::paper() {
  ExperimentConfig c;
  c.n_students = 1000;
  c.n_questions = 500;
  c.session_length = 200;
  c.history_attempts = 500;
  c.replications = 1;
  return c;
}

std::vector<std::string> ExperimentConfig::problems() const {
  std::vector<std::string> out;
  auto check = [&out](auto&& fn) {
    try {
      fn();
    } catch (const ValidationError& e) {
      out.emplace_back(e.what());
    }
  };
  check([&] { maple.validate(); });
  check([&] { sim.validate(); });
  check([&] { ranking.validate(); });
  if (maple.eta != sim.eta) out.emplace_back("eta: sequencer and simulator thresholds differ");
  if (n_students == 0) out.emplace_back("n_students: must be >= 1");
  if (n_questions == 0) out.emplace_back("n_questions: must be >= 1");
  if (n_skills == 0) out.emplace_back("n_skills: must be >= 1");
  if (history_attempts == 0) out.emplace_back("history_attempts: must be >= 1");
  if (replications == 0) out.emplace_back("replications: must be >= 1");
  if (algorithms.empty()) out.emplace_back("algorithms: at least one algorithm required");
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (algorithms[i] == algorithms[j]) {
        out.emplace_back("algorithms: '" + std::string(to_string(algorithms[i])) +
                         "' listed twice");
      }
    }
  }
  const bool fixed_order = std::any_of(algorithms.begin(), algorithms.end(), [](Algorithm a) {
    return a == Algorithm::kAscending || a == Algorithm::kEduRank;
  });
  if ((maple.no_repeat || fixed_order) && session_length > n_questions) {
    out.emplace_back("session_length: exceeds n_questions for a no-repeat sequencer");
  }
  return out;
}

void ExperimentConfig::validate() const {
  const auto list = problems();
  if (list.empty()) return;
  std::string joined;
  for (const auto& p : list) joined += (joined.empty() ? "" : "; ") + p;
  throw ValidationError(joined);
}

SessionTrace run_session(StudentProfile& student, std::span<const Question> questions,
                         Sequencer& sequencer, const SimParams& params,
                         std::size_t session_length, Rng& sequencer_rng,
                         std::uint64_t outcome_seed) {
  std::unordered_map<QuestionId, const Question*> lookup;
  lookup.reserve(questions.size());
  for (const Question& q : questions) lookup.emplace(q.id, &q);
  std::unordered_map<QuestionId, std::uint32_t> seen;

  SessionTrace trace;
  trace.reserve(session_length);
  for (std::size_t t = 0; t < session_length; ++t) {
    const Selection sel = sequencer.next(t, sequencer_rng);
    auto it = lookup.find(sel.question);
    if (it == lookup.end()) {
      std::ostringstream msg;
      msg << "sequencer proposed unknown question " << sel.question;
      throw ValidationError(msg.str());
    }
    const Question& q = *it->second;
    Rng outcome = Rng::substream(outcome_seed, {q.id.value, seen[q.id]++});
    const Grade g = attempt(student, q, params, outcome);
    sequencer.update(sel, g);
    double& sl = student.skills[q.skill.value];
    sl = update_skill(sl, q.ql, g, params);
    trace.push_back({q.id, q.level, g, student.mean_skill()});
  }
  return trace;
}

const ArmResult& ExperimentResult::arm(Algorithm algorithm) const {
  for (const auto& a : arms) {
    if (a.algorithm == algorithm) return a;
  }
  throw std::out_of_range("experiment has no arm '" + std::string(to_string(algorithm)) + "'");
}

double ExperimentResult::final_mean(Algorithm algorithm, std::size_t replication,
                                    Segment segment) const {
  return arm(algorithm).progression.at(replication).back()[segment_slot(segment)];
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t replication) {
  return Rng::mix(seed, {static_cast<std::uint64_t>(replication)});
}

ReplicationData generate_replication(const ExperimentConfig& config, std::size_t replication) {
  const std::uint64_t rs = replication_seed(config.seed, replication);
  Rng pop_rng = Rng::substream(rs, {kPopulationStream});
  ReplicationData data;
  data.population =
      generate_population(config.n_students, config.n_questions, config.n_skills, pop_rng);
  data.history = generate_history(data.population.students, data.population.questions,
                                  config.history_attempts, config.sim,
                                  Rng::mix(rs, {kHistoryStream}));
  return data;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();

  ExperimentResult result;
  result.config = config;
  for (Algorithm a : config.algorithms) result.arms.push_back(ArmResult{a, {}, {}});

  const std::size_t n = config.n_students;
  const std::size_t steps = config.session_length;

  for (std::size_t rep = 0; rep < config.replications; ++rep) {
    const std::uint64_t rs = replication_seed(config.seed, rep);
    const ReplicationData data = generate_replication(config, rep);
    const auto& students = data.population.students;
    const auto& questions = data.population.questions;

    std::vector<QuestionId> qids;
    qids.reserve(questions.size());
    for (const Question& q : questions) qids.push_back(q.id);

    std::vector<DifficultyRanking> rankings;
    if (needs_ranking(config)) {
      std::vector<StudentId> sids;
      for (const auto& s : students) sids.push_back(s.id);
      rankings = RankingModel(data.history, config.ranking).rank_all(sids, qids, config.threads);
    }

    std::vector<Segment> segment(n);
    std::array<std::size_t, 4> sizes{};
    for (std::size_t i = 0; i < n; ++i) {
      segment[i] = classify_student(students[i]);
      ++sizes[segment_slot(segment[i])];
      ++sizes[segment_slot(Segment::kAll)];
    }
    result.segment_sizes.push_back(sizes);

    for (ArmResult& arm : result.arms) {
      const Algorithm alg = arm.algorithm;
      std::vector<SessionTrace> traces(n);
      detail::parallel_for(n, config.threads, [&](std::size_t i) {
        StudentProfile student = students[i];
        const std::uint32_t sid = student.id.value;
        std::unique_ptr<Sequencer> seq;
        switch (alg) {
          case Algorithm::kMaple:
            seq = std::make_unique<MapleSequencer>(initialize(rankings[i], config.maple));
            break;
          case Algorithm::kAscending:
            seq = std::make_unique<AscendingSequencer>(questions, steps);
            break;
          case Algorithm::kEduRank:
            seq = std::make_unique<EduRankSequencer>(rankings[i]);
            break;
          case Algorithm::kNaiveMaple: {
            Rng init_rng = Rng::substream(rs, {kNaiveInitStream, sid});
            seq = std::make_unique<MapleSequencer>(naive_maple_initialize(
                qids, config.maple, init_rng, config.naive_init, student.id));
            break;
          }
        }
        Rng seq_rng = Rng::substream(rs, {kSequencerStream, static_cast<std::uint64_t>(alg), sid});
        traces[i] = run_session(student, questions, *seq, config.sim, steps, seq_rng,
                                Rng::mix(rs, {kOutcomeStream, sid}));
      });

      // Deterministic reduction in student order.
      std::vector<std::array<double, 4>> prog(steps + 1, std::array<double, 4>{});
      std::vector<std::array<std::size_t, kNumLevels>> mix(steps);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t g = segment_slot(segment[i]);
        const std::size_t all = segment_slot(Segment::kAll);
        const double start = students[i].mean_skill();
        prog[0][g] += start;
        prog[0][all] += start;
        for (std::size_t t = 0; t < steps; ++t) {
          prog[t + 1][g] += traces[i][t].mean_skill;
          prog[t + 1][all] += traces[i][t].mean_skill;
          ++mix[t][static_cast<std::size_t>(traces[i][t].level - kMinLevel)];
        }
      }
      for (auto& row : prog) {
        for (std::size_t g = 0; g < row.size(); ++g) {
          row[g] = sizes[g] ? row[g] / static_cast<double>(sizes[g]) : 0.0;
        }
      }
      arm.progression.push_back(std::move(prog));
      arm.mix.push_back(std::move(mix));
    }
  }
  return result;
}

}  // namespace maple
