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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "maple/domain.hpp"
#include "maple/harness.hpp"
#include "maple/maple.hpp"

namespace maple {

// Malformed input; the message names the line (CSV) or key (JSON).
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

inline constexpr std::string_view kHistoryHeader =
    "student_id,question_id,skill_id,level,grade,attempt_index";
inline constexpr std::string_view kProgressionHeader =
    "algorithm,replication,step,segment,mean_skill,n";
inline constexpr std::string_view kMixHeader = "algorithm,step,level,count";

inline constexpr std::string_view kProgressionFile = "skill_progression.csv";
inline constexpr std::string_view kMixFile = "difficulty_mix.csv";
inline constexpr std::string_view kSummaryFile = "summary.json";

struct Dataset {
  std::vector<Question> questions;  // every question referenced, ascending id
  InteractionHistory history;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// History CSV. Grades are written in shortest round-trip form.
void write_history(std::ostream& out, std::span<const Question> questions,
                   const InteractionHistory& history);
void save_history(const std::filesystem::path& path, std::span<const Question> questions,
                  const InteractionHistory& history);

// Parses and validates (validate_dataset); throws ParseError naming the line
// and field of the first malformed row.
Dataset read_history(std::istream& in);
Dataset load_history(const std::filesystem::path& path);

// Flat JSON object. Missing keys keep their defaults ("preset" selects the
// base: "desk" or "paper"); unknown keys and type mismatches throw ParseError
// naming the key, constraint violations throw ValidationError.
ExperimentConfig parse_config(std::string_view json_text,
                              const ExperimentConfig& base = ExperimentConfig::desk());
ExperimentConfig load_config(const std::filesystem::path& path,
                             const ExperimentConfig& base = ExperimentConfig::desk());
std::string config_to_json(const ExperimentConfig& config);

// {"order": [...], "w": [...], "gamma": g, "answered": [...], "params": {...},
//  "student": id}
std::string maple_state_to_json(const MapleState& state);
MapleState maple_state_from_json(std::string_view json_text);

void write_skill_progression(std::ostream& out, const ExperimentResult& result);
void write_difficulty_mix(std::ostream& out, const ExperimentResult& result);
void write_summary(std::ostream& out, const ExperimentResult& result);

// Writes skill_progression.csv, difficulty_mix.csv and summary.json,
// creating the directory if needed.
void write_results(const std::filesystem::path& dir, const ExperimentResult& result);

struct ProgressionRow {
  std::string algorithm;
  std::size_t replication = 0;
  std::size_t step = 0;
  std::string segment;
  double mean_skill = 0.0;
  std::size_t n = 0;
};

struct MixRow {
  std::string algorithm;
  std::size_t step = 0;
  int level = 0;
  std::size_t count = 0;
};

std::vector<ProgressionRow> load_skill_progression(const std::filesystem::path& path);
std::vector<MixRow> load_difficulty_mix(const std::filesystem::path& path);

}  // namespace maple
