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


#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "maple/domain.hpp"
#include "maple/harness.hpp"
#include "maple/io.hpp"
#include "maple/ranking.hpp"

namespace maple::cli {
namespace {

namespace fs = std::filesystem;

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

LogLevel log_level_from_env() {
  const char* raw = std::getenv("MAPLE_LOG");
  if (raw == nullptr) return LogLevel::kError;
  const std::string_view value(raw);
  if (value == "debug") return LogLevel::kDebug;
  if (value == "info") return LogLevel::kInfo;
  return LogLevel::kError;
}

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err), level_(log_level_from_env()) {}

  void info(const std::string& message) const { emit(LogLevel::kInfo, "info", message); }
  void debug(const std::string& message) const { emit(LogLevel::kDebug, "debug", message); }
  void error(const std::string& message) const { err_ << "error: " << message << '\n'; }

 private:
  void emit(LogLevel level, std::string_view tag, const std::string& message) const {
    if (level <= level_) err_ << tag << ": " << message << '\n';
  }

  std::ostream& err_;
  LogLevel level_;
};

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string preset = "desk";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON configuration file");
  cmd->add_option("--seed", opts.seed, "Master seed (overrides the config)");
  cmd->add_option("--out-dir", opts.out_dir, "Output directory (created if absent)");
  cmd->add_option("--preset", opts.preset, "Base configuration")
      ->check(CLI::IsMember({"desk", "paper"}));
}

ExperimentConfig resolve_config(const CommonOptions& opts, const Log& log) {
  ExperimentConfig config =
      opts.preset == "paper" ? ExperimentConfig::paper() : ExperimentConfig::desk();
  if (!opts.config_path.empty()) {
    log.info("loading config " + opts.config_path);
    config = load_config(opts.config_path, config);
  }
  if (opts.seed) config.seed = *opts.seed;
  config.validate();
  log.debug("config " + config_to_json(config));
  return config;
}

std::string fixed(double value, int precision = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << value;
  return os.str();
}

// Left-aligned first column, right-aligned remainder.
void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out << "  ";
      if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << cells[c];
      } else {
        out << std::right << std::setw(static_cast<int>(width[c])) << cells[c];
      }
    }
    out << std::right << '\n';
  };
  line(header);
  std::size_t total = 0;
  for (std::size_t w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& row : rows) line(row);
}

// Mean over replications of the step-0 and final-step means per
// (algorithm, segment), skipping empty segments.
struct FinalStats {
  double initial = 0.0;
  double final = 0.0;
  std::size_t replications = 0;
};

void print_final_table(std::ostream& out, const std::vector<ProgressionRow>& rows) {
  std::vector<std::string> algorithms;
  std::map<std::pair<std::string, std::size_t>, std::size_t> last_step;
  for (const auto& row : rows) {
    if (std::find(algorithms.begin(), algorithms.end(), row.algorithm) == algorithms.end()) {
      algorithms.push_back(row.algorithm);
    }
    auto& step = last_step[{row.algorithm, row.replication}];
    step = std::max(step, row.step);
  }
  std::map<std::pair<std::string, std::string>, FinalStats> stats;
  std::map<std::tuple<std::string, std::size_t, std::string>, double> initial;
  for (const auto& row : rows) {
    if (row.n == 0) continue;
    if (row.step == 0) initial[{row.algorithm, row.replication, row.segment}] = row.mean_skill;
  }
  for (const auto& row : rows) {
    if (row.n == 0 || row.step != last_step[{row.algorithm, row.replication}]) continue;
    auto& s = stats[{row.algorithm, row.segment}];
    s.initial += initial[{row.algorithm, row.replication, row.segment}];
    s.final += row.mean_skill;
    ++s.replications;
  }
  std::vector<std::vector<std::string>> table;
  for (const auto& algorithm : algorithms) {
    for (Segment segment : kReportSegments) {
      const std::string name(to_string(segment));
      auto it = stats.find({algorithm, name});
      if (it == stats.end()) {
        table.push_back({algorithm, name, "-", "-", "-"});
        continue;
      }
      const double n = static_cast<double>(it->second.replications);
      const double a = it->second.initial / n;
      const double b = it->second.final / n;
      table.push_back({algorithm, name, fixed(a), fixed(b), fixed(b - a)});
    }
  }
  print_table(out, {"algorithm", "segment", "initial", "final", "gain"}, table);
}

void print_progression_table(std::ostream& out, const std::vector<ProgressionRow>& rows) {
  std::size_t max_step = 0;
  std::vector<std::string> algorithms;
  for (const auto& row : rows) {
    max_step = std::max(max_step, row.step);
    if (std::find(algorithms.begin(), algorithms.end(), row.algorithm) == algorithms.end()) {
      algorithms.push_back(row.algorithm);
    }
  }
  std::vector<std::size_t> checkpoints;
  for (std::size_t k = 0; k <= 4; ++k) checkpoints.push_back(max_step * k / 4);
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  // (algorithm, segment, step) -> sum, count over replications.
  std::map<std::tuple<std::string, std::string, std::size_t>, std::pair<double, std::size_t>>
      acc;
  for (const auto& row : rows) {
    if (row.n == 0) continue;
    auto& cell = acc[{row.algorithm, row.segment, row.step}];
    cell.first += row.mean_skill;
    ++cell.second;
  }
  std::vector<std::string> header = {"algorithm", "segment"};
  for (std::size_t step : checkpoints) header.push_back("t=" + std::to_string(step));
  std::vector<std::vector<std::string>> table;
  for (const auto& algorithm : algorithms) {
    for (Segment segment : kReportSegments) {
      std::vector<std::string> line = {algorithm, std::string(to_string(segment))};
      for (std::size_t step : checkpoints) {
        auto it = acc.find({algorithm, std::string(to_string(segment)), step});
        line.push_back(it == acc.end() ? "-" : fixed(it->second.first / it->second.second));
      }
      table.push_back(std::move(line));
    }
  }
  print_table(out, header, table);
}

// Level shares per tenth of the session.
void print_mix_table(std::ostream& out, const std::vector<MixRow>& rows) {
  std::size_t max_step = 0;
  std::vector<std::string> algorithms;
  for (const auto& row : rows) {
    max_step = std::max(max_step, row.step);
    if (std::find(algorithms.begin(), algorithms.end(), row.algorithm) == algorithms.end()) {
      algorithms.push_back(row.algorithm);
    }
  }
  if (max_step == 0) return;
  constexpr std::size_t kBins = 10;
  std::map<std::string, std::vector<std::array<double, kNumLevels>>> counts;
  for (const auto& algorithm : algorithms) counts[algorithm].assign(kBins, {});
  for (const auto& row : rows) {
    const std::size_t bin = std::min(kBins - 1, (row.step - 1) * kBins / max_step);
    counts[row.algorithm][bin][row.level - kMinLevel] += static_cast<double>(row.count);
  }
  std::vector<std::vector<std::string>> table;
  for (const auto& algorithm : algorithms) {
    for (std::size_t bin = 0; bin < kBins; ++bin) {
      const auto& c = counts[algorithm][bin];
      double total = 0.0;
      for (double v : c) total += v;
      std::vector<std::string> line = {algorithm,
                                       std::to_string(bin * 10) + "-" +
                                           std::to_string(bin * 10 + 10) + "%"};
      for (double v : c) line.push_back(total > 0.0 ? fixed(v / total, 3) : "-");
      table.push_back(std::move(line));
    }
  }
  print_table(out, {"algorithm", "steps", "L1", "L2", "L3", "L4", "L5"}, table);
}

void print_run_summary(std::ostream& out, const ExperimentResult& result) {
  std::vector<std::vector<std::string>> table;
  const std::size_t reps = result.segment_sizes.size();
  for (const auto& arm : result.arms) {
    for (std::size_t g = 0; g < kReportSegments.size(); ++g) {
      double initial = 0.0;
      double final = 0.0;
      std::size_t used = 0;
      std::size_t students = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        students += result.segment_sizes[r][g];
        if (result.segment_sizes[r][g] == 0) continue;
        initial += arm.progression[r].front()[g];
        final += arm.progression[r].back()[g];
        ++used;
      }
      std::vector<std::string> line = {std::string(to_string(arm.algorithm)),
                                       std::string(to_string(kReportSegments[g])),
                                       std::to_string(students)};
      if (used == 0) {
        line.insert(line.end(), {"-", "-", "-"});
      } else {
        const double a = initial / static_cast<double>(used);
        const double b = final / static_cast<double>(used);
        line.insert(line.end(), {fixed(a), fixed(b), fixed(b - a)});
      }
      table.push_back(std::move(line));
    }
  }
  print_table(out, {"algorithm", "segment", "students", "initial", "final", "gain"}, table);
}

int cmd_gen_history(const CommonOptions& opts, std::ostream& out, const Log& log) {
  const ExperimentConfig config = resolve_config(opts, log);
  log.info("generating " + std::to_string(config.n_students) + " students x " +
           std::to_string(config.history_attempts) + " attempts");
  const ReplicationData data = generate_replication(config, 0);
  fs::create_directories(opts.out_dir);
  const fs::path path = fs::path(opts.out_dir) / "history.csv";
  save_history(path, data.population.questions, data.history);
  double sum = 0.0;
  for (const auto& record : data.history.records()) sum += record.grade.value();
  const std::size_t count = data.history.size();
  out << "records: " << count << '\n';
  out << "mean_grade: " << fixed(count == 0 ? 0.0 : sum / static_cast<double>(count)) << '\n';
  out << "written: " << path.string() << '\n';
  return kOk;
}

int cmd_rank(const CommonOptions& opts, const std::string& history_path, std::uint32_t student,
             std::ostream& out, const Log& log) {
  const ExperimentConfig config = resolve_config(opts, log);
  Dataset dataset;
  if (history_path.empty()) {
    log.info("no --history given; generating replication 0 from the config");
    ReplicationData data = generate_replication(config, 0);
    dataset.questions = std::move(data.population.questions);
    dataset.history = std::move(data.history);
  } else {
    log.info("loading history " + history_path);
    dataset = load_history(history_path);
  }
  std::vector<QuestionId> ids;
  std::map<QuestionId, const Question*> by_id;
  for (const auto& q : dataset.questions) {
    ids.push_back(q.id);
    by_id[q.id] = &q;
  }
  const RankingModel model(dataset.history, config.ranking);
  const ScoredRanking scored = model.rank(StudentId{student}, ids);
  std::vector<std::vector<std::string>> table;
  for (std::size_t i = 0; i < scored.ranking.size(); ++i) {
    const QuestionId q = scored.ranking.at(i);
    table.push_back({std::to_string(i + 1), std::to_string(q.value),
                     std::to_string(by_id.at(q)->level), std::to_string(scored.copeland[i]),
                     scored.has_evidence[i] ? "yes" : "no"});
  }
  print_table(out, {"position", "question_id", "level", "copeland", "evidence"}, table);
  return kOk;
}

int cmd_run(const CommonOptions& opts, const std::vector<std::string>& algos,
            std::optional<unsigned> threads, std::ostream& out, const Log& log) {
  ExperimentConfig config = resolve_config(opts, log);
  if (!algos.empty()) {
    config.algorithms.clear();
    for (const auto& name : algos) config.algorithms.push_back(algorithm_from_string(name));
  }
  if (threads) config.threads = *threads;
  config.validate();
  log.info("running " + std::to_string(config.replications) + " replication(s) of " +
           std::to_string(config.algorithms.size()) + " arm(s)");
  const ExperimentResult result = run_experiment(config);
  write_results(opts.out_dir, result);
  log.info("results written to " + opts.out_dir);
  print_run_summary(out, result);
  return kOk;
}

int cmd_report(const CommonOptions& opts, std::ostream& out, const Log& log) {
  const fs::path dir(opts.out_dir);
  log.info("reading results from " + dir.string());
  const auto progression = load_skill_progression(dir / kProgressionFile);
  const auto mix = load_difficulty_mix(dir / kMixFile);
  out << "Final skill (mean over replications)\n\n";
  print_final_table(out, progression);
  out << "\nSkill progression (mean over replications)\n\n";
  print_progression_table(out, progression);
  out << "\nDifficulty mix by session tenth (share of questions per level)\n\n";
  print_mix_table(out, mix);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Log log(err);
  CLI::App app{"Question sequencing experiments", "maple"};
  app.require_subcommand(1);

  CommonOptions gen_opts;
  auto* gen = app.add_subcommand("gen-history", "Generate a historical interaction file");
  add_common(gen, gen_opts);

  CommonOptions rank_opts;
  std::string history_path;
  std::uint32_t student = 0;
  auto* rank = app.add_subcommand("rank", "Print a student's difficulty ranking");
  add_common(rank, rank_opts);
  rank->add_option("--history", history_path, "History CSV (generated from the config if absent)");
  rank->add_option("--student", student, "Student id")->required();

  CommonOptions run_opts;
  std::vector<std::string> algos;
  std::optional<unsigned> threads;
  auto* run_cmd = app.add_subcommand("run", "Run the simulation experiment");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--algo", algos, "Arm to run (repeatable)")
      ->check(CLI::IsMember({"maple", "ascending", "edurank", "naive_maple"}));
  run_cmd->add_option("--threads", threads, "Worker threads (0 = hardware)");

  CommonOptions report_opts;
  auto* report = app.add_subcommand("report", "Render result files as text tables");
  report->add_option("--out-dir", report_opts.out_dir, "Directory holding the result files");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen_history(gen_opts, out, log);
    if (rank->parsed()) return cmd_rank(rank_opts, history_path, student, out, log);
    if (run_cmd->parsed()) return cmd_run(run_opts, algos, threads, out, log);
    if (report->parsed()) return cmd_report(report_opts, out, log);
  } catch (const ValidationError& e) {
    log.error(e.what());
    return kValidation;
  } catch (const std::exception& e) {
    log.error(e.what());
    return kRuntime;
  }
  return kUsage;
}

}  // namespace maple::cli
