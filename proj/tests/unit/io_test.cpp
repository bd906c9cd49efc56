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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "maple/io.hpp"
#include "support.hpp"

using namespace maple;

namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

std::string header() { return std::string(kHistoryHeader) + "\n"; }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "maple_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("empty history is a header-only file") {
  std::ostringstream out;
  write_history(out, {}, InteractionHistory{});
  CHECK(out.str() == header());
  std::istringstream in(out.str());
  const Dataset d = read_history(in);
  CHECK(d.history.empty());
  CHECK(d.questions.empty());
}

TEST_CASE("history round trip") {
  const std::vector<Question> questions{{QuestionId{4}, SkillId{1}, 2, 0.4},
                                        {QuestionId{7}, SkillId{0}, 5, 1.0}};
  InteractionHistory h;
  h.append({StudentId{1}, QuestionId{4}, Grade(0.1 + 0.2), 0});
  h.append({StudentId{1}, QuestionId{7}, Grade(1.0), 3});
  h.append({StudentId{2}, QuestionId{4}, Grade(1.0 / 3.0), 0});
  const auto path = scratch("round_trip.csv");
  save_history(path, questions, h);
  const Dataset d = load_history(path);
  CHECK(d.history == h);
  CHECK(d.questions == questions);

  std::ostringstream first, second;
  write_history(first, questions, h);
  write_history(second, d.questions, d.history);
  CHECK(first.str() == second.str());
}

TEST_CASE("malformed rows name line and field") {
  const std::string bad_grade = header() + "1,1,0,1,1.0,0\n1,2,0,1,0.5,1\n1,3,0,1,1.5,2\n";
  std::istringstream in(bad_grade);
  const auto msg = error_of([&] { read_history(in); });
  CHECK(msg.find("line 4") != std::string::npos);
  CHECK(msg.find("grade") != std::string::npos);

  auto err = [](const std::string& text) {
    std::istringstream s(text);
    return error_of([&] { read_history(s); });
  };
  CHECK(err(header() + "1,1,0,9,1.0,0\n").find("level") != std::string::npos);
  CHECK(err(header() + "1,x,0,1,1.0,0\n").find("question_id") != std::string::npos);
  CHECK(err(header() + "1,1,0,1,1.0\n").find("line 2") != std::string::npos);
  CHECK(err(header() + "1,1,0,1,1.0,1\n1,2,0,1,1.0,1\n").find("attempt_index") !=
        std::string::npos);
  CHECK(err(header() + "1,1,0,1,1.0,0\n2,1,0,2,1.0,0\n").find("question_id") !=
        std::string::npos);
  CHECK(err("student,question\n").find("line 1") != std::string::npos);
  CHECK(err("").find("header") != std::string::npos);
}

TEST_CASE("config parsing") {
  const auto defaults = parse_config("{}");
  CHECK(defaults.n_students == ExperimentConfig::desk().n_students);
  CHECK(defaults.maple.eta == 0.7);
  CHECK(defaults.problems().empty());

  const auto eta = parse_config(R"({"eta": 0.7})");
  CHECK(eta.maple.eta == 0.7);
  CHECK(eta.sim.eta == 0.7);

  const auto unknown = error_of([] { parse_config(R"({"etaa": 0.7})"); });
  CHECK(unknown.find("etaa") != std::string::npos);
  CHECK(unknown.find("unknown") != std::string::npos);

  CHECK(error_of([] { parse_config(R"({"seed": "one"})"); }).find("seed") != std::string::npos);
  CHECK(error_of([] { parse_config(R"({"n_students": -3})"); }).find("n_students") !=
        std::string::npos);
  CHECK(error_of([] { parse_config("[1, 2]"); }).find("object") != std::string::npos);
  CHECK(error_of([] { parse_config("{"); }).find("JSON") != std::string::npos);
  CHECK(error_of([] { parse_config(R"({"algorithms": ["maple", "ybkt"]})"); })
            .find("algorithms") != std::string::npos);
  try {
    parse_config(R"({"eta": 1.5})");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("eta") != std::string::npos);
  }

  const auto paper = parse_config(R"({"preset": "paper", "seed": 9})");
  CHECK(paper.n_students == 1000);
  CHECK(paper.seed == 9);
  const auto based = parse_config(R"({"seed": 9})", ExperimentConfig::paper());
  CHECK(based.n_students == 1000);

  const auto custom = parse_config(R"({"algorithms": ["ascending", "maple"], "alpha3": 0.5,
      "theta": 4.0, "grade_mode": "continuous", "tie_break": "descending_id",
      "no_repeat": true, "naive_init": "dirichlet_weights", "k_neighbors": 5})");
  CHECK(custom.algorithms == std::vector<Algorithm>{Algorithm::kAscending, Algorithm::kMaple});
  CHECK(custom.maple.alpha3 == 0.5);
  CHECK(custom.sim.theta == 4.0);
  CHECK(custom.sim.grade_mode == GradeMode::kContinuous);
  CHECK(custom.ranking.tie_break == TieBreak::kDescendingId);
  CHECK(custom.maple.no_repeat);
  CHECK(custom.naive_init == NaiveInit::kDirichletWeights);
  CHECK(custom.ranking.k_neighbors == 5);
}

TEST_CASE("config serialisation round trips") {
  auto c = ExperimentConfig::desk();
  c.seed = 123;
  c.maple.gamma0 = 0.003;
  c.sim.beta = 0.9;
  c.algorithms = {Algorithm::kEduRank, Algorithm::kNaiveMaple};
  const auto back = parse_config(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.seed == 123);
  CHECK(back.algorithms == c.algorithms);

  const auto path = scratch("config.json");
  std::ofstream(path) << R"({"replications": 2})";
  CHECK(load_config(path).replications == 2);
  CHECK_THROWS_AS(load_config(scratch("missing.json")), std::exception);
}

TEST_CASE("maple state json round trip") {
  MapleParams p;
  p.no_repeat = true;
  auto s = initialize(DifficultyRanking(StudentId{5}, test::qids({9, 3, 7})), p);
  s = update(std::move(s), 1, Grade(1.0));
  const std::string text = maple_state_to_json(s);
  for (const char* key : {"\"order\"", "\"w\"", "\"gamma\"", "\"answered\"", "\"params\""}) {
    CHECK(text.find(key) != std::string::npos);
  }
  const MapleState back = maple_state_from_json(text);
  CHECK(back.order() == s.order());
  CHECK(std::equal(back.weights().begin(), back.weights().end(), s.weights().begin()));
  CHECK(back.gamma() == s.gamma());
  CHECK(back.answered() == s.answered());
  CHECK(back.params().no_repeat);
  CHECK(maple_state_to_json(back) == text);

  CHECK_THROWS_AS(maple_state_from_json(R"({"order": [1, 2], "w": [0.9, 0.9], "gamma": 0.002,
      "answered": [false, false], "params": {}})"),
                  ValidationError);
}

TEST_CASE("result files") {
  ExperimentConfig c;
  c.n_students = 20;
  c.n_questions = 15;
  c.n_skills = 3;
  c.session_length = 10;
  c.history_attempts = 10;
  c.replications = 2;
  c.algorithms = {Algorithm::kMaple, Algorithm::kAscending};
  const auto result = run_experiment(c);
  const auto dir = scratch("results");
  std::filesystem::remove_all(dir);
  write_results(dir, result);
  for (auto name : {kProgressionFile, kMixFile, kSummaryFile}) {
    CHECK(std::filesystem::exists(dir / name));
  }

  std::ifstream prog(dir / kProgressionFile);
  std::string first;
  std::getline(prog, first);
  CHECK(first == kProgressionHeader);

  const auto rows = load_skill_progression(dir / kProgressionFile);
  // algorithm x replication x (steps 0..L) x segments
  CHECK(rows.size() == 2 * 2 * 11 * 4);
  CHECK(rows.front().algorithm == "maple");
  CHECK(rows.front().step == 0);
  CHECK(rows.back().algorithm == "ascending");
  CHECK(rows.back().segment == "all");

  const auto mix = load_difficulty_mix(dir / kMixFile);
  CHECK(mix.size() == 2 * 10 * 5);
  std::size_t total = 0;
  for (const auto& row : mix) {
    if (row.algorithm == "maple" && row.step == 1) total += row.count;
  }
  CHECK(total == c.n_students * c.replications);

  std::ostringstream summary;
  write_summary(summary, result);
  CHECK(summary.str().find("\"final_mean\"") != std::string::npos);
  CHECK_THROWS(load_skill_progression(dir / "absent.csv"));
}

}
