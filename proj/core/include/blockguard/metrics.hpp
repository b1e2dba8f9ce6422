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

#include "blockguard/model.hpp"

namespace blockguard {

struct CommitteeRecord {
  CommitteeId id = 0;
  TxnId txn = 0;
  std::uint32_t level = 1;
  std::uint32_t size = 0;
  EngineKind engine = EngineKind::Pbft;
  std::uint32_t byzantine_count = 0;
  bool defeated = false;          // classification at dispatch
  bool outcome_defeated = false;  // after PoW honest-miner credit
  Round dispatch_round = 0;
  std::optional<Round> confirm_round;
  std::optional<Round> done_round;
  std::uint32_t view_changes = 0;
  std::uint32_t restarts = 0;
};

/// Everything the metrics are computed from.
struct MetricsLog {
  std::vector<Transaction> txns;  // index = TxnId
  std::vector<CommitteeRecord> committees;  // index = CommitteeId
  Round rounds = 0;
};

/// Reliable recorded transactions per round. nullopt when rounds == 0.
std::optional<double> throughput(const MetricsLog& log);

/// Mean of confirm - gen over confirmed transactions, defeated included.
/// nullopt when nothing was confirmed.
std::optional<double> avg_waiting_time(const MetricsLog& log);

struct DefeatSummary {
  std::optional<double> ratio;      // outcome-defeated / committees
  std::optional<double> raw_ratio;  // classification-defeated / committees
  std::vector<std::optional<double>> per_level;  // outcome ratio, index = level - 1
};

DefeatSummary defeated_ratio(const MetricsLog& log, std::uint32_t levels);

struct StatusCounts {
  std::size_t generated = 0;
  std::size_t pending = 0;
  std::size_t tentative = 0;
  std::size_t recorded = 0;
  std::size_t discarded = 0;
};

StatusCounts status_counts(const MetricsLog& log);

/// Transactions still pending or tentative.
std::size_t backlog(const MetricsLog& log);

struct TimelinePoint {
  Round round = 0;
  double throughput = 0.0;
  std::optional<double> wait;
};

/// For each round r in [window, rounds), metrics over transactions confirmed
/// in (r - window, r]. Throughput counts reliable confirmations only.
std::vector<TimelinePoint> rolling_timeline(const MetricsLog& log, Round window = 200);

}  // namespace blockguard
