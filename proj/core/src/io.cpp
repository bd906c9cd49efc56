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

#include "maple/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

namespace maple {
namespace {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail_field(std::size_t line, std::string_view field, std::string_view why) {
  std::ostringstream msg;
  msg << "line " << line << ", field '" << field << "': " << why;
  throw ParseError(msg.str());
}

template <class T>
T parse_integer(std::string_view text, std::size_t line, std::string_view field) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    fail_field(line, field, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view text, std::size_t line, std::string_view field) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    fail_field(line, field, "expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string read_all(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

// ---- config ---------------------------------------------------------------

[[noreturn]] void fail_key(std::string_view key, std::string_view why) {
  throw ParseError(std::string(key) + ": " + std::string(why));
}

double as_real(const json& v, std::string_view key) {
  if (!v.is_number()) fail_key(key, "expected a number");
  return v.get<double>();
}

std::size_t as_count(const json& v, std::string_view key) {
  if (!v.is_number_unsigned()) fail_key(key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

int as_int(const json& v, std::string_view key) {
  if (!v.is_number_integer()) fail_key(key, "expected an integer");
  return v.get<int>();
}

bool as_bool(const json& v, std::string_view key) {
  if (!v.is_boolean()) fail_key(key, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, std::string_view key) {
  if (!v.is_string()) fail_key(key, "expected a string");
  return v.get<std::string>();
}

// Token parsers already prefix their messages with the field name.
template <class Fn>
auto parse_token(Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
}

void apply_key(ExperimentConfig& c, const std::string& key, const json& v) {
  if (key == "seed") {
    if (!v.is_number_unsigned()) fail_key(key, "expected a nonnegative integer");
    c.seed = v.get<std::uint64_t>();
  } else if (key == "n_students") {
    c.n_students = as_count(v, key);
  } else if (key == "n_questions") {
    c.n_questions = as_count(v, key);
  } else if (key == "n_skills") {
    c.n_skills = as_count(v, key);
  } else if (key == "session_length") {
    c.session_length = as_count(v, key);
  } else if (key == "history_attempts") {
    c.history_attempts = as_count(v, key);
  } else if (key == "replications") {
    c.replications = as_count(v, key);
  } else if (key == "threads") {
    c.threads = static_cast<unsigned>(as_count(v, key));
  } else if (key == "algorithms") {
    if (!v.is_array()) fail_key(key, "expected an array of algorithm names");
    c.algorithms.clear();
    for (const auto& item : v) {
      const std::string token = as_string(item, key);
      c.algorithms.push_back(parse_token([&] { return algorithm_from_string(token); }));
    }
  } else if (key == "eta") {
    c.maple.eta = c.sim.eta = as_real(v, key);
  } else if (key == "gamma0") {
    c.maple.gamma0 = as_real(v, key);
  } else if (key == "alpha1") {
    c.maple.alpha1 = as_real(v, key);
  } else if (key == "alpha2") {
    c.maple.alpha2 = as_real(v, key);
  } else if (key == "alpha3") {
    c.maple.alpha3 = as_real(v, key);
  } else if (key == "alpha4") {
    c.maple.alpha4 = as_real(v, key);
  } else if (key == "softmax_scale") {
    c.maple.softmax_scale = as_real(v, key);
  } else if (key == "gamma_min") {
    c.maple.gamma_min = as_real(v, key);
  } else if (key == "gamma_max") {
    c.maple.gamma_max = as_real(v, key);
  } else if (key == "pi_floor") {
    c.maple.pi_floor = as_real(v, key);
  } else if (key == "no_repeat") {
    c.maple.no_repeat = as_bool(v, key);
  } else if (key == "naive_init") {
    const std::string token = as_string(v, key);
    c.naive_init = parse_token([&] { return naive_init_from_string(token); });
  } else if (key == "theta") {
    c.sim.theta = as_real(v, key);
  } else if (key == "beta") {
    c.sim.beta = as_real(v, key);
  } else if (key == "delta1") {
    c.sim.delta1 = as_real(v, key);
  } else if (key == "delta2") {
    c.sim.delta2 = as_real(v, key);
  } else if (key == "grade_mode") {
    const std::string token = as_string(v, key);
    c.sim.grade_mode = parse_token([&] { return grade_mode_from_string(token); });
  } else if (key == "history_with_replacement") {
    c.sim.history_with_replacement = as_bool(v, key);
  } else if (key == "k_neighbors") {
    c.ranking.k_neighbors = as_int(v, key);
  } else if (key == "min_common_questions") {
    c.ranking.min_common_questions = as_int(v, key);
  } else if (key == "tie_break") {
    const std::string token = as_string(v, key);
    c.ranking.tie_break = parse_token([&] { return tie_break_from_string(token); });
  } else {
    fail_key(key, "unknown configuration key");
  }
}

json params_json(const MapleParams& p) {
  return json{{"eta", p.eta},
              {"gamma0", p.gamma0},
              {"alpha1", p.alpha1},
              {"alpha2", p.alpha2},
              {"alpha3", p.alpha3},
              {"alpha4", p.alpha4},
              {"softmax_scale", p.softmax_scale},
              {"gamma_min", p.gamma_min},
              {"gamma_max", p.gamma_max},
              {"pi_floor", p.pi_floor},
              {"no_repeat", p.no_repeat}};
}

json config_json(const ExperimentConfig& c) {
  json algos = json::array();
  for (Algorithm a : c.algorithms) algos.push_back(std::string(to_string(a)));
  json j = params_json(c.maple);
  j.update(json{{"seed", c.seed},
                {"n_students", c.n_students},
                {"n_questions", c.n_questions},
                {"n_skills", c.n_skills},
                {"session_length", c.session_length},
                {"history_attempts", c.history_attempts},
                {"replications", c.replications},
                {"algorithms", algos},
                {"naive_init", std::string(to_string(c.naive_init))},
                {"theta", c.sim.theta},
                {"beta", c.sim.beta},
                {"delta1", c.sim.delta1},
                {"delta2", c.sim.delta2},
                {"grade_mode", std::string(to_string(c.sim.grade_mode))},
                {"history_with_replacement", c.sim.history_with_replacement},
                {"k_neighbors", c.ranking.k_neighbors},
                {"min_common_questions", c.ranking.min_common_questions},
                {"tie_break", std::string(to_string(c.ranking.tie_break))}});
  return j;
}

}  // namespace

// ---- history ----------------------------------------------------------------

void write_history(std::ostream& out, std::span<const Question> questions,
                   const InteractionHistory& history) {
  std::map<QuestionId, const Question*> lookup;
  for (const Question& q : questions) lookup.emplace(q.id, &q);
  out << kHistoryHeader << '\n';
  for (const AttemptRecord& r : history.records()) {
    auto it = lookup.find(r.question);
    if (it == lookup.end()) {
      throw ValidationError("history references unknown question " +
                            std::to_string(r.question.value));
    }
    out << r.student.value << ',' << r.question.value << ',' << it->second->skill.value << ','
        << it->second->level << ',' << format_double(r.grade.value()) << ',' << r.attempt_index
        << '\n';
  }
}

void save_history(const std::filesystem::path& path, std::span<const Question> questions,
                  const InteractionHistory& history) {
  auto out = open_out(path);
  write_history(out, questions, history);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Dataset read_history(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw ParseError("line 1: missing header");
  if (line != kHistoryHeader) {
    throw ParseError("line 1: expected header '" + std::string(kHistoryHeader) + "'");
  }

  Dataset data;
  std::map<QuestionId, Question> questions;
  std::size_t lineno = 1;
  while (next_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 6) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 6 fields, got " +
                       std::to_string(f.size()));
    }
    const auto student = parse_integer<std::uint32_t>(f[0], lineno, "student_id");
    const auto question = parse_integer<std::uint32_t>(f[1], lineno, "question_id");
    const auto skill = parse_integer<std::uint32_t>(f[2], lineno, "skill_id");
    const auto level = parse_integer<int>(f[3], lineno, "level");
    const double grade = parse_real(f[4], lineno, "grade");
    const auto attempt = parse_integer<std::uint32_t>(f[5], lineno, "attempt_index");

    if (level < kMinLevel || level > kMaxLevel) fail_field(lineno, "level", "outside 1..5");
    if (!(grade >= 0.0 && grade <= 1.0)) fail_field(lineno, "grade", "outside [0, 1]");

    Question q{QuestionId(question), SkillId(skill), level, level_to_latent(level)};
    auto [it, fresh] = questions.emplace(q.id, q);
    if (!fresh && !(it->second == q)) {
      fail_field(lineno, "question_id", "skill or level disagrees with an earlier row");
    }
    try {
      data.history.append({StudentId(student), q.id, Grade(grade), attempt});
    } catch (const ValidationError& e) {
      fail_field(lineno, "attempt_index", e.what());
    }
  }
  for (auto& [_, q] : questions) data.questions.push_back(q);

  const auto report = validate_dataset(data.questions, data.history);
  if (!report.empty()) throw ParseError("invalid history: " + report.front().message);
  return data;
}

Dataset load_history(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_history(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---- config -----------------------------------------------------------------

ExperimentConfig parse_config(std::string_view json_text, const ExperimentConfig& base) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config: expected a JSON object");

  ExperimentConfig config = base;
  if (auto it = doc.find("preset"); it != doc.end()) {
    const std::string preset = as_string(*it, "preset");
    if (preset == "paper") {
      config = ExperimentConfig::paper();
    } else if (preset == "desk") {
      config = ExperimentConfig::desk();
    } else {
      fail_key("preset", "expected 'desk' or 'paper'");
    }
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "preset") continue;
    apply_key(config, key, value);
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path, const ExperimentConfig& base) {
  return parse_config(read_all(path), base);
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

// ---- maple state --------------------------------------------------------------

std::string maple_state_to_json(const MapleState& state) {
  json order = json::array();
  for (QuestionId q : state.order().order()) order.push_back(q.value);
  json w = json::array();
  for (double x : state.weights()) w.push_back(x);
  json answered = json::array();
  for (bool a : state.answered()) answered.push_back(a);
  json j{{"student", state.order().student().value},
         {"order", order},
         {"w", w},
         {"gamma", state.gamma()},
         {"answered", answered},
         {"params", params_json(state.params())}};
  return j.dump(2);
}

MapleState maple_state_from_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("maple state: malformed JSON: ") + e.what());
  }
  auto field = [&](const char* key) -> const json& {
    auto it = doc.find(key);
    if (it == doc.end()) fail_key(key, "missing");
    return *it;
  };
  std::vector<QuestionId> order;
  for (const auto& q : field("order")) {
    order.emplace_back(static_cast<std::uint32_t>(as_count(q, "order")));
  }
  std::vector<double> w;
  for (const auto& x : field("w")) w.push_back(as_real(x, "w"));
  std::vector<bool> answered;
  for (const auto& a : field("answered")) answered.push_back(as_bool(a, "answered"));

  MapleParams p;
  const json& pj = field("params");
  if (!pj.is_object()) fail_key("params", "expected an object");
  for (const auto& [key, v] : pj.items()) {
    if (key == "eta") p.eta = as_real(v, key);
    else if (key == "gamma0") p.gamma0 = as_real(v, key);
    else if (key == "alpha1") p.alpha1 = as_real(v, key);
    else if (key == "alpha2") p.alpha2 = as_real(v, key);
    else if (key == "alpha3") p.alpha3 = as_real(v, key);
    else if (key == "alpha4") p.alpha4 = as_real(v, key);
    else if (key == "softmax_scale") p.softmax_scale = as_real(v, key);
    else if (key == "gamma_min") p.gamma_min = as_real(v, key);
    else if (key == "gamma_max") p.gamma_max = as_real(v, key);
    else if (key == "pi_floor") p.pi_floor = as_real(v, key);
    else if (key == "no_repeat") p.no_repeat = as_bool(v, key);
    else fail_key(key, "unknown parameter");
  }
  const auto student = doc.contains("student") ? as_count(doc["student"], "student") : 0;
  return MapleState(DifficultyRanking(StudentId(static_cast<std::uint32_t>(student)),
                                      std::move(order)),
                    std::move(w), as_real(field("gamma"), "gamma"), p, std::move(answered));
}

// ---- results ------------------------------------------------------------------

void write_skill_progression(std::ostream& out, const ExperimentResult& result) {
  out << kProgressionHeader << '\n';
  for (const ArmResult& arm : result.arms) {
    for (std::size_t r = 0; r < arm.progression.size(); ++r) {
      for (std::size_t t = 0; t < arm.progression[r].size(); ++t) {
        for (std::size_t g = 0; g < kReportSegments.size(); ++g) {
          const std::size_t n = result.segment_sizes[r][g];
          out << to_string(arm.algorithm) << ',' << r << ',' << t << ','
              << to_string(kReportSegments[g]) << ','
              << (n ? format_double(arm.progression[r][t][g]) : std::string()) << ',' << n
              << '\n';
        }
      }
    }
  }
}

void write_difficulty_mix(std::ostream& out, const ExperimentResult& result) {
  out << kMixHeader << '\n';
  for (const ArmResult& arm : result.arms) {
    if (arm.mix.empty()) continue;
    const std::size_t steps = arm.mix.front().size();
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t l = 0; l < static_cast<std::size_t>(kNumLevels); ++l) {
        std::size_t count = 0;
        for (const auto& rep : arm.mix) count += rep[t][l];
        out << to_string(arm.algorithm) << ',' << t + 1 << ',' << l + kMinLevel << ',' << count
            << '\n';
      }
    }
  }
}

void write_summary(std::ostream& out, const ExperimentResult& result) {
  json arms = json::array();
  for (const ArmResult& arm : result.arms) {
    json segments = json::array();
    for (std::size_t g = 0; g < kReportSegments.size(); ++g) {
      std::vector<double> finals, initials;
      std::size_t n = 0;
      json by_rep = json::array();
      for (std::size_t r = 0; r < arm.progression.size(); ++r) {
        const std::size_t size = result.segment_sizes[r][g];
        n += size;
        if (size == 0) {
          by_rep.push_back(nullptr);
          continue;
        }
        finals.push_back(arm.progression[r].back()[g]);
        initials.push_back(arm.progression[r].front()[g]);
        by_rep.push_back(finals.back());
      }
      json seg{{"segment", std::string(to_string(kReportSegments[g]))},
               {"n", n},
               {"final_by_replication", by_rep}};
      if (finals.empty()) {
        seg["initial_mean"] = nullptr;
        seg["final_mean"] = nullptr;
        seg["final_se"] = nullptr;
        seg["gain"] = nullptr;
      } else {
        const double k = static_cast<double>(finals.size());
        double mean = 0.0, start = 0.0;
        for (double f : finals) mean += f;
        for (double s : initials) start += s;
        mean /= k;
        start /= k;
        seg["initial_mean"] = start;
        seg["final_mean"] = mean;
        seg["gain"] = mean - start;
        if (finals.size() > 1) {
          double ss = 0.0;
          for (double f : finals) ss += (f - mean) * (f - mean);
          seg["final_se"] = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
        } else {
          seg["final_se"] = nullptr;
        }
      }
      segments.push_back(std::move(seg));
    }
    arms.push_back(json{{"algorithm", std::string(to_string(arm.algorithm))},
                        {"segments", std::move(segments)}});
  }
  json sizes = json::array();
  for (std::size_t r = 0; r < result.segment_sizes.size(); ++r) {
    json row{{"replication", r}};
    for (std::size_t g = 0; g < kReportSegments.size(); ++g) {
      row[std::string(to_string(kReportSegments[g]))] = result.segment_sizes[r][g];
    }
    sizes.push_back(std::move(row));
  }
  json doc{{"design", "paired: every arm starts from the same cloned student population"},
           {"config", config_json(result.config)},
           {"segment_sizes", std::move(sizes)},
           {"arms", std::move(arms)}};
  out << doc.dump(2) << '\n';
}

void write_results(const std::filesystem::path& dir, const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / kProgressionFile);
    write_skill_progression(out, result);
  }
  {
    auto out = open_out(dir / kMixFile);
    write_difficulty_mix(out, result);
  }
  {
    auto out = open_out(dir / kSummaryFile);
    write_summary(out, result);
  }
}

std::vector<ProgressionRow> load_skill_progression(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!next_line(in, line) || line != kProgressionHeader) {
    throw ParseError(path.string() + ": line 1: unexpected header");
  }
  std::vector<ProgressionRow> rows;
  std::size_t lineno = 1;
  while (next_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 6) throw ParseError(path.string() + ": line " + std::to_string(lineno) +
                                        ": expected 6 fields");
    ProgressionRow row;
    row.algorithm = std::string(f[0]);
    row.replication = parse_integer<std::size_t>(f[1], lineno, "replication");
    row.step = parse_integer<std::size_t>(f[2], lineno, "step");
    row.segment = std::string(f[3]);
    row.mean_skill = f[4].empty() ? std::nan("") : parse_real(f[4], lineno, "mean_skill");
    row.n = parse_integer<std::size_t>(f[5], lineno, "n");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<MixRow> load_difficulty_mix(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!next_line(in, line) || line != kMixHeader) {
    throw ParseError(path.string() + ": line 1: unexpected header");
  }
  std::vector<MixRow> rows;
  std::size_t lineno = 1;
  while (next_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 4) throw ParseError(path.string() + ": line " + std::to_string(lineno) +
                                        ": expected 4 fields");
    rows.push_back({std::string(f[0]), parse_integer<std::size_t>(f[1], lineno, "step"),
                    parse_integer<int>(f[2], lineno, "level"),
                    parse_integer<std::size_t>(f[3], lineno, "count")});
  }
  return rows;
}

}  // namespace maple
