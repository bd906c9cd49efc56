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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "maple/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = maple::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "maple_cli_test" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

// question_id column of a rank table, in printed order
std::vector<std::string> ranked_ids(const std::string& table) {
  std::istringstream in(table);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::vector<std::string> ids;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string position, id;
    row >> position >> id;
    ids.push_back(id);
  }
  return ids;
}

const char* kSmallConfig = R"({"n_students": 30, "n_questions": 20, "n_skills": 3,
  "session_length": 15, "history_attempts": 20, "replications": 2})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors") {
  CHECK(cli({}).code == maple::cli::kUsage);
  CHECK(cli({"frobnicate"}).code == maple::cli::kUsage);
  CHECK(cli({"run", "--no-such-flag"}).code == maple::cli::kUsage);
  CHECK(cli({"run", "--preset", "huge"}).code == maple::cli::kUsage);
  CHECK(cli({"run", "--algo", "ybkt"}).code == maple::cli::kUsage);
  CHECK(cli({"rank"}).code == maple::cli::kUsage);
  const auto help = cli({"--help"});
  CHECK(help.code == maple::cli::kOk);
  CHECK(help.out.find("gen-history") != std::string::npos);
}

TEST_CASE("gen-history") {
  const auto dir = scratch("gen");
  const auto first = cli({"gen-history", "--out-dir", (dir / "a").string()});
  REQUIRE(first.code == 0);
  CHECK(first.out.find("records: 45000") != std::string::npos);
  CHECK(first.out.find("mean_grade: ") != std::string::npos);
  const auto second = cli({"gen-history", "--out-dir", (dir / "b").string()});
  REQUIRE(second.code == 0);
  CHECK(slurp(dir / "a" / "history.csv") == slurp(dir / "b" / "history.csv"));

  const auto other = cli({"gen-history", "--seed", "2", "--out-dir", (dir / "c").string()});
  CHECK(slurp(dir / "a" / "history.csv") != slurp(dir / "c" / "history.csv"));

  const auto loaded = maple::load_history(dir / "a" / "history.csv");
  CHECK(loaded.history.size() == 300 * 150);
}

TEST_CASE("gen-history with the paper preset") {
  const auto dir = scratch("paper");
  const auto r = cli({"gen-history", "--preset", "paper", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("records: 500000") != std::string::npos);
}

TEST_CASE("invalid configs exit with the validation code") {
  const auto dir = scratch("bad");
  write(dir / "typo.json", R"({"etaa": 0.7})");
  const auto typo = cli({"gen-history", "--config", (dir / "typo.json").string()});
  CHECK(typo.code == maple::cli::kValidation);
  CHECK(typo.err.find("etaa") != std::string::npos);
  write(dir / "range.json", R"({"eta": 1.5})");
  CHECK(cli({"run", "--config", (dir / "range.json").string()}).code == maple::cli::kValidation);
  CHECK(cli({"run", "--config", (dir / "absent.json").string()}).code != 0);
}

TEST_CASE("run, then report") {
  const auto dir = scratch("run");
  write(dir / "config.json", kSmallConfig);
  const auto r = cli({"run", "--config", (dir / "config.json").string(), "--out-dir",
                      (dir / "out").string(), "--algo", "ascending", "--algo", "maple"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("ascending") != std::string::npos);
  CHECK(r.out.find("edurank") == std::string::npos);
  const auto rows = maple::load_skill_progression(dir / "out" / maple::kProgressionFile);
  std::set<std::string> arms;
  for (const auto& row : rows) arms.insert(row.algorithm);
  CHECK(arms == std::set<std::string>{"ascending", "maple"});
  CHECK(fs::exists(dir / "out" / maple::kMixFile));
  CHECK(fs::exists(dir / "out" / maple::kSummaryFile));

  const auto report = cli({"report", "--out-dir", (dir / "out").string()});
  REQUIRE(report.code == 0);
  CHECK(report.out.find("Final skill") != std::string::npos);
  CHECK(report.out.find("Difficulty mix") != std::string::npos);

  CHECK(cli({"report", "--out-dir", (dir / "nowhere").string()}).code != 0);
}

TEST_CASE("rank") {
  const auto dir = scratch("rank");
  // same toy instance as the ranking tests: expected order 10, 11, 12
  write(dir / "toy.csv", std::string(maple::kHistoryHeader) +
                             "\n1,10,0,1,1,0\n1,11,0,2,0.5,1\n1,12,0,3,0,2\n"
                             "2,10,0,1,0.5,0\n2,11,0,2,1,1\n2,12,0,3,0,2\n"
                             "3,10,0,1,1,0\n3,11,0,2,0,1\n3,12,0,3,0,2\n");
  const auto toy = cli({"rank", "--history", (dir / "toy.csv").string(), "--student", "1"});
  REQUIRE(toy.code == 0);
  CHECK(ranked_ids(toy.out) == std::vector<std::string>{"10", "11", "12"});
  CHECK(toy.out.find("copeland") != std::string::npos);

  // unanimous neighbours: question 5 easier than 4
  write(dir / "unanimous.csv", std::string(maple::kHistoryHeader) +
                                   "\n1,1,0,1,1,0\n1,2,0,1,0.5,1\n1,3,0,1,0,2\n"
                                   "2,1,0,1,1,0\n2,2,0,1,0.5,1\n2,3,0,1,0,2\n2,4,0,1,0,3\n2,5,0,1,1,4\n");
  const auto u = cli({"rank", "--history", (dir / "unanimous.csv").string(), "--student", "1"});
  REQUIRE(u.code == 0);
  const auto ids = ranked_ids(u.out);
  CHECK(std::find(ids.begin(), ids.end(), "5") < std::find(ids.begin(), ids.end(), "4"));

  // a student alone in the log: no neighbours, so mean difficulty then id
  write(dir / "alone.csv", std::string(maple::kHistoryHeader) + "\n7,30,0,1,1,0\n7,10,0,1,1,1\n7,20,0,1,0,2\n");
  const auto alone = cli({"rank", "--history", (dir / "alone.csv").string(), "--student", "7"});
  REQUIRE(alone.code == 0);
  CHECK(ranked_ids(alone.out) == std::vector<std::string>{"10", "30", "20"});

  const auto missing = cli({"rank", "--history", (dir / "toy.csv").string(), "--student", "99"});
  CHECK(missing.code == maple::cli::kValidation);
  CHECK(missing.err.find("99") != std::string::npos);

  const auto generated = cli({"rank", "--student", "0"});
  CHECK(generated.code == 0);
  CHECK(ranked_ids(generated.out).size() == 100);
}

TEST_CASE("diagnostics go to stderr only") {
  const auto dir = scratch("log");
  ::setenv("MAPLE_LOG", "info", 1);
  const auto loud = cli({"gen-history", "--out-dir", dir.string()});
  ::setenv("MAPLE_LOG", "error", 1);
  const auto quiet = cli({"gen-history", "--out-dir", dir.string()});
  ::unsetenv("MAPLE_LOG");
  CHECK(loud.out == quiet.out);
  CHECK(loud.err.find("info:") != std::string::npos);
  CHECK(quiet.err.empty());
}

}
