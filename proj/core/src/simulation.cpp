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

#include "blockguard/simulation.hpp"

#include <algorithm>

namespace blockguard {

Simulation::Simulation(const SimConfig& config)
    : world_(std::make_unique<World>(config)), scheduler_(make_scheduler(*world_)) {}

void Simulation::step() {
  World& w = *world_;
  const Round t = w.now;
  const bool messages = w.log.messages_enabled();

  if (messages) {
    // Envelope at a time, logging each one.
    w.network.deliver([&](const Envelope& env) {
      const CommitteeId c = env.payload.committee;
      auto it = w.active.find(c);
      const bool live = it != w.active.end() && w.peers[env.receiver].assignment == c;
      w.log.record({t, live ? EventKind::Deliver : EventKind::Stale, env.sender, env.receiver, c, std::nullopt,
                    static_cast<std::int64_t>(env.payload.kind)});
      if (live) it->second.engine->on_message(env);
    });
  } else {
    // A committee is released as a whole, so liveness is per record.
    changed_scratch_.clear();
    w.network.deliver_batches([&](const Batch& b) {
      auto it = w.active.find(b.payload.committee);
      if (it != w.active.end()) it->second.engine->receive(b, changed_scratch_);
    });
    std::sort(changed_scratch_.begin(), changed_scratch_.end());
    for (PeerId p : changed_scratch_) w.active.at(*w.peers[p].assignment).engine->react(p);
  }

  for (auto& [id, ac] : w.active) ac.engine->on_round(t);

  finished_scratch_.clear();
  for (auto& [id, ac] : w.active) {
    const ConsensusEngine& e = *ac.engine;
    if (!ac.confirm_seen && e.first_confirm()) {
      ac.confirm_seen = true;
      Transaction& txn = w.txns[e.committee().txn];
      txn.confirm_round = *e.first_confirm();
      w.committees[id].confirm_round = *e.first_confirm();
      w.log.record({t, EventKind::Confirm, e.first_confirmer(), kNoPeer, id, txn.id, std::nullopt});
    }
    if (e.done()) finished_scratch_.push_back(id);
  }
  for (CommitteeId id : finished_scratch_) {
    const ConsensusEngine& e = *w.active.at(id).engine;
    CommitteeRecord& rec = w.committees[id];
    rec.done_round = *e.done_round();
    rec.outcome_defeated = e.outcome_defeated();
    rec.view_changes = e.view_changes();
    rec.restarts = e.restarts();
    w.txns[rec.txn].defeated = e.outcome_defeated();
    w.log.record({t, EventKind::Complete, kNoPeer, kNoPeer, id, rec.txn, e.outcome_defeated() ? 1 : 0});
    scheduler_->on_completed(w, id);
  }

  if (auto txn = w.workload.generate(t)) {
    w.enqueue(std::move(*txn));
    scheduler_->on_generated(w);
  }

  scheduler_->end_of_round(w);

  if (observer_) observer_(*this);
  w.network.advance();
  ++w.now;
}

void Simulation::run() {
  while (!finished()) step();
}

MetricsLog Simulation::metrics() const {
  MetricsLog log;
  log.txns = world_->txns;
  log.committees = world_->committees;
  // Committees still running at the cutoff report their counters so far.
  for (const auto& [id, ac] : world_->active) {
    log.committees[id].view_changes = ac.engine->view_changes();
    log.committees[id].restarts = ac.engine->restarts();
  }
  log.rounds = world_->now;
  return log;
}

}  // namespace blockguard
