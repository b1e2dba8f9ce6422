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
#include <optional>
#include <vector>

#include "blockguard/types.hpp"

namespace blockguard {

struct Peer {
  PeerId id = 0;
  Honesty honesty = Honesty::Honest;
  std::optional<GroupId> group;
  std::optional<CommitteeId> assignment;

  bool byzantine() const { return honesty == Honesty::Byzantine; }
  bool idle() const { return !assignment.has_value(); }
};

/// Transaction importance, 1 = lowest. Bounded by SizingConfig::levels.
struct SecurityLevel {
  std::uint32_t value = 1;

  friend bool operator==(SecurityLevel, SecurityLevel) = default;
  friend auto operator<=>(SecurityLevel, SecurityLevel) = default;
};

enum class SizingRule : std::uint8_t {
  Exponential,  // base * 2^(level-1)
  Linear,       // level * secMult
};

struct SizingConfig {
  std::uint32_t levels = 5;
  std::uint32_t base_size = 64;
  SizingRule rule = SizingRule::Exponential;
  std::uint32_t sec_mult = 64;
};

/// Committee size required to approve a transaction of `level`.
/// Throws ConfigError when the level is outside [1, config.levels].
std::uint32_t committee_size_for_level(SecurityLevel level, const SizingConfig& config);

enum class TxnStatus : std::uint8_t { Pending, Tentative, Recorded, Discarded };

struct Transaction {
  TxnId id = 0;
  SecurityLevel level;
  PeerId generator = 0;
  Round gen_round = 0;
  TxnStatus status = TxnStatus::Pending;
  std::optional<Round> dispatch_round;
  std::optional<Round> confirm_round;
  std::optional<Round> record_round;
  bool defeated = false;

  /// Moves status forward. Throws std::logic_error on a backward or skipping move.
  void advance(TxnStatus next);
};

struct Committee {
  CommitteeId id = 0;
  std::vector<PeerId> members;  // ascending
  PeerId leader = kNoPeer;      // PBFT/SBFT view-0 leader
  SecurityLevel level;
  EngineKind engine = EngineKind::Pbft;
  TxnId txn = 0;
  std::uint32_t byzantine_count = 0;
  bool defeated = false;
  Round dispatch_round = 0;
};

}  // namespace blockguard
