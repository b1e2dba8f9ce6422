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
#include <numeric>
#include <span>

#include "blockguard/scheduler.hpp"

namespace blockguard {

DynamicScheduler::DynamicScheduler(World& world) : order_(world.config.n), fixed_(world.config.fixed_size.has_value()) {
  std::iota(order_.begin(), order_.end(), PeerId{0});
}

std::vector<PeerId> DynamicScheduler::window(const World& world) const {
  if (!published_) return order_;
  const std::size_t win = std::min<std::size_t>(world.config.resolved_win_size(), order_.size());
  return {order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(win)};
}

std::size_t DynamicScheduler::form_committees(World& world) {
  std::vector<PeerId> available;
  for (PeerId p : window(world)) {
    if (world.peers[p].idle()) available.push_back(p);
  }
  std::size_t seated = 0;
  while (!world.waiting.empty()) {
    const TxnId head = world.waiting.front();
    const std::uint32_t need = world.committee_size(world.txns[head]);
    if (need > available.size()) break;
    world.selection.partial_shuffle(std::span<PeerId>(available), need);
    std::vector<PeerId> members(available.begin(), available.begin() + need);
    available.erase(available.begin(), available.begin() + need);
    world.dispatch(head, std::move(members));
    ++seated;
  }
  return seated;
}

void DynamicScheduler::on_completed(World& world, CommitteeId id) {
  finished_.push_back(world.release(id));
  if (world.active.empty()) recording_at_ = world.now + world.config.recording_rounds;
}

void DynamicScheduler::end_of_round(World& world) {
  if (fixed_ && world.now % world.config.shuffle_period == 0) world.shuffle();
  if (recording_at_) {
    if (world.now != *recording_at_) return;
    record_stage(world);
    form_committees(world);
  } else if (world.active.empty() && finished_.empty()) {
    form_committees(world);
  }
}

void DynamicScheduler::record_stage(World& world) {
  Ledger& bc = world.ledgers.front();
  const std::uint32_t stage = bc.begin_recording_stage();
  world.log.record({world.now, EventKind::StageBegin, kNoPeer, kNoPeer, kNoCommittee, std::nullopt, stage});
  std::sort(finished_.begin(), finished_.end(), [](const Committee& a, const Committee& b) { return a.id < b.id; });

  std::vector<PeerId> front;
  for (const Committee& c : finished_) {
    bc.append_in_stage({c.txn, c.level.value, c.defeated, c.members});
    world.log.record({world.now, EventKind::Record, kNoPeer, kNoPeer, c.id, c.txn, stage});
    Transaction& t = world.txns[c.txn];
    t.advance(TxnStatus::Recorded);
    t.record_round = world.now;
    front.insert(front.end(), c.members.begin(), c.members.end());
  }
  bc.end_recording_stage();

  // Most recent publishers first; the rest keep their relative order.
  std::vector<std::uint8_t> moved(order_.size(), 0);
  for (PeerId p : front) moved[p] = 1;
  std::vector<PeerId> next;
  next.reserve(order_.size());
  for (PeerId p : front) {
    if (moved[p] == 1) {
      next.push_back(p);
      moved[p] = 2;
    }
  }
  for (PeerId p : order_) {
    if (moved[p] == 0) next.push_back(p);
  }
  order_ = std::move(next);
  if (!front.empty()) published_ = true;

  finished_.clear();
  recording_at_.reset();
  if (!fixed_) world.shuffle();
}

}  // namespace blockguard
