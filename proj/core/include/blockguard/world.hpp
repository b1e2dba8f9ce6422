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
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "blockguard/adversary.hpp"
#include "blockguard/consensus.hpp"
#include "blockguard/event_log.hpp"
#include "blockguard/ledger.hpp"
#include "blockguard/metrics.hpp"
#include "blockguard/network.hpp"
#include "blockguard/workload.hpp"

namespace blockguard {

struct SimConfig {
  SchedulerKind scheduler = SchedulerKind::Composite;
  EngineKind engine = EngineKind::Pbft;
  std::optional<std::uint32_t> fixed_size;  // baseline: every committee this size

  std::uint32_t n = 1024;
  std::uint32_t rounds = 1000;
  std::uint32_t max_delay = 1;
  double byz_fraction = 0.1;

  WorkloadConfig workload;
  SizingConfig sizing;
  std::uint32_t gsize = 64;
  std::uint32_t win_size = 0;             // 0: n
  std::uint32_t view_change_timeout = 0;  // 0: 2 * max_delay
  std::uint32_t recording_rounds = 1;
  std::uint32_t shuffle_period = 10;  // fixed-size baseline only
  MiningModel mining;

  std::uint64_t seed = 1;
  std::optional<std::uint64_t> delay_seed;  // overrides the delay stream only
  EventDetail events = EventDetail::Off;

  std::uint32_t resolved_win_size() const { return win_size == 0 ? n : win_size; }
  std::uint32_t resolved_view_change_timeout() const {
    return view_change_timeout == 0 ? 2 * max_delay : view_change_timeout;
  }
};

/// Throws ConfigError describing the first problem found.
void validate(const SimConfig& config);

struct ActiveCommittee {
  std::unique_ptr<ConsensusEngine> engine;
  std::vector<GroupId> groups;  // Composite only
  bool confirm_seen = false;
};

/// All mutable state of one simulation. Pinned in memory: engines keep
/// pointers into it.
class World {
 public:
  explicit World(const SimConfig& config);
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  /// Committee size for `txn`, honoring the fixed-size override.
  std::uint32_t committee_size(const Transaction& txn) const;

  /// Adds a freshly generated transaction to the waiting queue.
  void enqueue(Transaction txn);

  /// Forms a committee for `txn` (which must head the queue) and starts its
  /// engine next round.
  CommitteeId dispatch(TxnId txn, std::vector<PeerId> members, std::vector<GroupId> groups = {});

  /// Adversary shuffle over idle peers at the current round.
  std::size_t shuffle();

  /// Frees the members of a finished committee and returns it.
  Committee release(CommitteeId id);

  SimConfig config;
  EventLog log;
  std::vector<Peer> peers;
  Network network;
  Adversary adversary;
  Workload workload;
  Rng selection;
  Rng mining;

  Round now = 0;
  std::vector<Transaction> txns;
  std::deque<TxnId> waiting;
  std::map<CommitteeId, ActiveCommittee> active;
  std::vector<CommitteeRecord> committees;
  std::vector<TxnId> dispatch_order;
  std::vector<Ledger> ledgers;

 private:
  EngineContext engine_context();
};

}  // namespace blockguard
