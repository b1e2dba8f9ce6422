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

#include <functional>
#include <memory>

#include "blockguard/metrics.hpp"
#include "blockguard/scheduler.hpp"
#include "blockguard/world.hpp"

namespace blockguard {

/// One seeded computation. Each step runs one round:
///   1. deliver due messages to the receivers' active committees
///   2. engine timers, ascending committee id
///   3. confirmations and completions, ascending committee id
///   4. transaction generation
///   5. scheduler end-of-round work (shuffle, recording stage)
class Simulation {
 public:
  using RoundObserver = std::function<void(const Simulation&)>;

  explicit Simulation(const SimConfig& config);

  void step();
  /// Steps until config.rounds rounds have run.
  void run();

  /// Called after every round, before the clock advances.
  void set_round_observer(RoundObserver observer) { observer_ = std::move(observer); }

  Round now() const { return world_->now; }
  bool finished() const { return world_->now >= world_->config.rounds; }
  const World& world() const { return *world_; }
  World& world() { return *world_; }
  const Scheduler& scheduler() const { return *scheduler_; }

  MetricsLog metrics() const;

 private:
  std::unique_ptr<World> world_;
  std::unique_ptr<Scheduler> scheduler_;
  RoundObserver observer_;
  std::vector<CommitteeId> finished_scratch_;
  std::vector<PeerId> changed_scratch_;
};

}  // namespace blockguard
