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
#include <memory>
#include <string_view>

#include "maple/domain.hpp"
#include "maple/maple.hpp"
#include "maple/random.hpp"

namespace maple {

// Common interface of every sequencing policy driven by the harness.
// `step` is the 0-based index within the session.
class Sequencer {
 public:
  virtual ~Sequencer() = default;

  virtual Selection next(std::size_t step, Rng& rng) = 0;
  virtual void update(const Selection& selection, Grade grade) = 0;
};

class MapleSequencer final : public Sequencer {
 public:
  explicit MapleSequencer(MapleState state) : state_(std::move(state)) {}

  Selection next(std::size_t, Rng& rng) override { return next_question(state_, rng); }
  void update(const Selection& selection, Grade grade) override {
    state_ = maple::update(std::move(state_), selection.position, grade);
  }

  const MapleState& state() const { return state_; }

 private:
  MapleState state_;
};

}  // namespace maple
