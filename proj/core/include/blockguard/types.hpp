/**
 * Copyright 2026 The Blockguard Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace blockguard {

using PeerId = std::uint32_t;
using GroupId = std::uint32_t;
using CommitteeId = std::uint32_t;
using TxnId = std::uint32_t;
using BlockId = std::uint32_t;
using Round = std::uint32_t;

inline constexpr PeerId kNoPeer = ~PeerId{0};
inline constexpr CommitteeId kNoCommittee = ~CommitteeId{0};

/// Invalid or inconsistent configuration, detected before any simulation work.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was attempted in the wrong stage of the Dynamic protocol.
class PhaseError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Honesty : std::uint8_t { Honest, Byzantine };

enum class EngineKind : std::uint8_t { Pbft, Sbft, Pow };

enum class SchedulerKind : std::uint8_t { Composite, Dynamic };

std::string_view to_string(EngineKind kind);
std::string_view to_string(SchedulerKind kind);

/// Parses "pbft" | "sbft" | "pow". Throws ConfigError otherwise.
EngineKind parse_engine_kind(std::string_view text);

/// Parses "composite" | "dynamic". Throws ConfigError otherwise.
SchedulerKind parse_scheduler_kind(std::string_view text);

}  // namespace blockguard
