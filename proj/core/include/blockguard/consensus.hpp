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
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "blockguard/event_log.hpp"
#include "blockguard/model.hpp"
#include "blockguard/network.hpp"
#include "blockguard/rng.hpp"

namespace blockguard {

/// Largest tolerated Byzantine fraction, as num/den.
struct ResiliencyThreshold {
  std::uint32_t num = 1;
  std::uint32_t den = 3;
};

ResiliencyThreshold resiliency_threshold(EngineKind kind);

enum class Classification : std::uint8_t { Reliable, Defeated };

/// Defeated iff byzantine >= threshold * size.
Classification classify_committee(EngineKind kind, std::size_t size, std::size_t byzantine);
Classification classify_committee(const Committee& committee);

/// Tally bounds. PBFT quorum is 2f+1, SBFT commit quorum f+1.
inline std::uint32_t pbft_faults(std::size_t size) { return size == 0 ? 0 : static_cast<std::uint32_t>((size - 1) / 3); }
inline std::uint32_t sbft_faults(std::size_t size) { return size == 0 ? 0 : static_cast<std::uint32_t>((size - 1) / 2); }

enum class MiningGranularity : std::uint8_t {
  Committee,  // one duration per attempt, winner uniform over members
  PerMember,  // one duration per member, earliest wins, ties to the smallest id
};

struct MiningModel {
  std::uint32_t trials = 10;
  double success_prob = 0.5;
  std::uint32_t min_rounds = 1;
  MiningGranularity granularity = MiningGranularity::Committee;

  /// max(min_rounds, Binomial(trials, success_prob)).
  std::uint32_t draw(Rng& rng) const;
};

struct EngineParams {
  std::uint32_t max_delay = 1;
  std::uint32_t view_change_timeout = 2;  // PBFT only
  MiningModel mining;
};

/// What an engine may touch outside itself. All pointers outlive the engine.
struct EngineContext {
  Network* network = nullptr;
  Rng* mining_rng = nullptr;
  EventLog* log = nullptr;
  EngineParams params;
};

struct EngineState {
  EngineKind kind = EngineKind::Pbft;
  std::string_view phase;
  std::uint32_t view = 0;
  std::vector<PeerId> confirmed_by;
  bool done = false;
};

/// One consensus instance for one committee and one transaction. Driven by
/// the round engine: messages first, then timers, once per round.
///
/// Delivery is split in two so a round's messages can be applied in bulk:
/// receive() only updates tallies and reports members whose state changed;
/// react() then lets such a member act (and send). Calling react() in
/// ascending peer id order after all receives is equivalent to handling the
/// envelopes one by one in (receiver, sender) order.
class ConsensusEngine {
 public:
  virtual ~ConsensusEngine() = default;

  virtual void receive(const Batch& batch, std::vector<PeerId>& changed) = 0;
  virtual void react(PeerId) {}
  virtual void on_round(Round now) = 0;
  virtual EngineState state() const = 0;

  /// Handles one envelope completely: receive, then react.
  void on_message(const Envelope& env);

  const Committee& committee() const { return committee_; }
  Round start_round() const { return start_; }
  bool done() const { return done_round_.has_value(); }
  std::optional<Round> done_round() const { return done_round_; }
  std::optional<Round> first_confirm() const { return first_confirm_; }
  PeerId first_confirmer() const { return first_confirmer_; }
  /// Outcome after PoW credit: a defeated PoW committee whose block an honest
  /// peer mined counts as reliable.
  bool outcome_defeated() const { return outcome_defeated_; }
  std::uint32_t view_changes() const { return view_changes_; }
  std::uint32_t restarts() const { return restarts_; }

 protected:
  ConsensusEngine(Committee committee, std::vector<std::uint8_t> byzantine, EngineContext ctx, Round start);

  /// Index of `peer` in the member list, or size() when not a member.
  std::size_t index_of(PeerId peer) const {
    return peer < slot_.size() ? slot_[peer] : size();
  }
  std::size_t size() const { return committee_.members.size(); }
  PeerId member(std::size_t i) const { return committee_.members[i]; }
  /// Byzantine members of a reliable committee stay silent.
  bool silent(std::size_t i) const { return !committee_.defeated && byzantine_[i] != 0; }
  void broadcast(std::size_t from, MessageKind kind, std::uint32_t view);
  void confirm(std::size_t i, Round now);
  void finish(Round now) { done_round_ = now; }
  void log(const Event& e) const {
    if (ctx_.log != nullptr) ctx_.log->record(e);
  }

  Committee committee_;
  std::vector<std::uint32_t> slot_;  // peer id -> member index, size() if absent
  std::vector<std::uint8_t> byzantine_;
  EngineContext ctx_;
  Round start_;
  std::optional<Round> done_round_;
  std::optional<Round> first_confirm_;
  PeerId first_confirmer_ = kNoPeer;
  bool outcome_defeated_ = false;
  std::uint32_t view_changes_ = 0;
  std::uint32_t restarts_ = 0;
};

/// Builds the engine for `committee`. byzantine[i] flags members[i]; the
/// protocol's first action happens at start_round. Throws ConfigError for an
/// empty committee or a malformed honesty vector.
std::unique_ptr<ConsensusEngine> start_consensus(const Committee& committee, std::vector<std::uint8_t> byzantine,
                                                 const EngineContext& ctx, Round start_round);

}  // namespace blockguard
