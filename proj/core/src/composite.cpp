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

#include <algorithm>

#include "blockguard/scheduler.hpp"

namespace blockguard {

CompositeScheduler::CompositeScheduler(World& world)
    : gsize_(world.config.gsize),
      group_count_(world.config.n / world.config.gsize),
      shuffle_period_(world.config.fixed_size ? world.config.shuffle_period : 1) {
  for (GroupId g = 0; g < group_count_; ++g) free_.push_back(g);
}

std::uint32_t CompositeScheduler::required_groups(const World& world, const Transaction& txn) const {
  return world.committee_size(txn) / gsize_;
}

std::size_t CompositeScheduler::evaluate(World& world) {
  std::size_t seated = 0;
  while (!world.waiting.empty()) {
    const TxnId head = world.waiting.front();
    const std::uint32_t need = required_groups(world, world.txns[head]);
    if (need > free_.size()) break;
    std::vector<GroupId> groups(free_.begin(), free_.begin() + need);
    free_.erase(free_.begin(), free_.begin() + need);
    std::vector<PeerId> members;
    members.reserve(static_cast<std::size_t>(need) * gsize_);
    for (GroupId g : groups) {
      for (PeerId p = g * gsize_; p < (g + 1) * gsize_; ++p) members.push_back(p);
    }
    world.dispatch(head, std::move(members), std::move(groups));
    ++seated;
  }
  return seated;
}

void CompositeScheduler::on_completed(World& world, CommitteeId id) {
  std::vector<GroupId> groups = std::move(world.active.at(id).groups);
  const CommitteeRecord& rec = world.committees[id];
  Committee c = world.release(id);
  Transaction& t = world.txns[c.txn];
  for (GroupId g : groups) {
    world.ledgers[g].append({c.txn, c.level.value, rec.defeated, c.members});
    world.log.record({world.now, EventKind::Record, kNoPeer, kNoPeer, c.id, c.txn, g});
  }
  t.advance(TxnStatus::Recorded);
  t.record_round = world.now;
  for (GroupId g : groups) free_.push_back(g);
  evaluate(world);
}

void CompositeScheduler::end_of_round(World& world) {
  if (world.now % shuffle_period_ != 0) return;
  world.shuffle();
}

std::unique_ptr<Scheduler> make_scheduler(World& world) {
  if (world.config.scheduler == SchedulerKind::Composite) return std::make_unique<CompositeScheduler>(world);
  return std::make_unique<DynamicScheduler>(world);
}

}  // namespace blockguard
