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

#include <deque>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "blockguard/world.hpp"

namespace blockguard {

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::string_view name() const = 0;
  virtual void on_generated(World& world) = 0;
  /// The committee's engine reported done this round.
  virtual void on_completed(World& world, CommitteeId id) = 0;
  virtual void end_of_round(World& world) = 0;
};

/// Groups of gsize consecutive peers, each with its own chain. A transaction
/// takes the first required groups from the free list, FIFO with
/// head-of-line blocking.
class CompositeScheduler final : public Scheduler {
 public:
  explicit CompositeScheduler(World& world);

  std::string_view name() const override { return "composite"; }
  void on_generated(World& world) override { evaluate(world); }
  void on_completed(World& world, CommitteeId id) override;
  void end_of_round(World& world) override;

  /// Seats waiting transactions while the head fits. Returns the number seated.
  std::size_t evaluate(World& world);

  std::size_t group_count() const { return group_count_; }
  std::uint32_t gsize() const { return gsize_; }
  std::uint32_t required_groups(const World& world, const Transaction& txn) const;
  const std::deque<GroupId>& free_groups() const { return free_; }

 private:
  std::uint32_t gsize_;
  std::size_t group_count_;
  std::deque<GroupId> free_;
  std::uint32_t shuffle_period_;
};

enum class DynamicPhase : std::uint8_t { Consensus, Recording };

/// One shared series-parallel ledger. Committees form only at stage
/// boundaries from the window of most recent publishers; all of them finish
/// before the recording stage writes their blocks.
class DynamicScheduler final : public Scheduler {
 public:
  explicit DynamicScheduler(World& world);

  std::string_view name() const override { return "dynamic"; }
  void on_generated(World&) override {}
  void on_completed(World& world, CommitteeId id) override;
  void end_of_round(World& world) override;

  /// Seats waiting transactions from the selection window. Returns the number seated.
  std::size_t form_committees(World& world);

  /// First winSize peers in recency order; all peers before any block exists.
  std::vector<PeerId> window(const World& world) const;

  DynamicPhase phase() const { return recording_at_ ? DynamicPhase::Recording : DynamicPhase::Consensus; }
  std::optional<Round> recording_at() const { return recording_at_; }
  const std::vector<Committee>& finished() const { return finished_; }

 private:
  void record_stage(World& world);

  std::vector<PeerId> order_;  // all peers, most recent publisher first
  bool published_ = false;
  std::vector<Committee> finished_;
  std::optional<Round> recording_at_;
  bool fixed_;
};

std::unique_ptr<Scheduler> make_scheduler(World& world);

}  // namespace blockguard
