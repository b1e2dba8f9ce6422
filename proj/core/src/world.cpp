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

#include "blockguard/world.hpp"

#include <algorithm>
#include <string>

namespace blockguard {

namespace {

constexpr std::uint32_t kMaxPeers = 16384;

std::vector<Peer> make_peers(const SimConfig& config) {
  std::vector<Peer> peers(config.n);
  for (PeerId i = 0; i < config.n; ++i) {
    peers[i].id = i;
    if (config.scheduler == SchedulerKind::Composite && config.gsize > 0) peers[i].group = i / config.gsize;
  }
  return peers;
}

std::size_t ledger_count(const SimConfig& config) {
  if (config.scheduler == SchedulerKind::Dynamic) return 1;
  return config.n / config.gsize;
}

}  // namespace

void validate(const SimConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (c.n < 1) fail("n must be at least 1");
  if (c.n > kMaxPeers) fail("n must be at most " + std::to_string(kMaxPeers));
  if (c.max_delay < 1) fail("maxDelay must be at least 1");
  if (!(c.byz_fraction >= 0.0 && c.byz_fraction < 1.0)) fail("byzFraction must be in [0, 1)");
  if (c.workload.gen_period < 1) fail("genPeriod must be at least 1");
  if (c.workload.levels < 1) fail("levels must be at least 1");
  if (!(c.workload.level_prob > 0.0 && c.workload.level_prob <= 1.0)) fail("levelProb must be in (0, 1]");
  if (c.sizing.levels != c.workload.levels) fail("sizing levels must match workload levels");
  if (c.sizing.base_size < 1) fail("baseCommitteeSize must be at least 1");
  if (c.shuffle_period < 1) fail("shufflePeriod must be at least 1");
  if (c.mining.trials < 1) fail("mining trials must be at least 1");
  if (!(c.mining.success_prob > 0.0 && c.mining.success_prob <= 1.0)) fail("mining probability must be in (0, 1]");
  if (c.mining.min_rounds < 1) fail("mining minRounds must be at least 1");

  std::vector<std::uint32_t> sizes;
  if (c.fixed_size) {
    if (*c.fixed_size < 1 || *c.fixed_size > c.n) {
      fail("committeeSize " + std::to_string(*c.fixed_size) + " must be in [1, n]");
    }
    sizes.push_back(*c.fixed_size);
  } else {
    for (std::uint32_t level = 1; level <= c.sizing.levels; ++level) {
      const std::uint64_t s = committee_size_for_level(SecurityLevel{level}, c.sizing);
      if (s > c.n) {
        fail("level " + std::to_string(level) + " needs " + std::to_string(s) + " peers but n = " + std::to_string(c.n));
      }
      sizes.push_back(static_cast<std::uint32_t>(s));
    }
  }
  const std::uint32_t largest = *std::max_element(sizes.begin(), sizes.end());

  if (c.scheduler == SchedulerKind::Composite) {
    if (c.gsize < 1) fail("gsize must be at least 1");
    if (c.n % c.gsize != 0) fail("n must be a multiple of gsize");
    for (std::uint32_t s : sizes) {
      if (s % c.gsize != 0) fail("committee size " + std::to_string(s) + " is not a multiple of gsize");
    }
  } else {
    const std::uint32_t win = c.resolved_win_size();
    if (win > c.n) fail("winSize must not exceed n");
    if (win < largest) fail("winSize " + std::to_string(win) + " is smaller than committee size " + std::to_string(largest));
  }
}

World::World(const SimConfig& cfg)
    : config((validate(cfg), cfg)),
      log(cfg.events),
      peers(make_peers(cfg)),
      network(cfg.n, cfg.max_delay,
              cfg.delay_seed ? Rng::for_stream(*cfg.delay_seed, Stream::Delay) : Rng::for_stream(cfg.seed, Stream::Delay),
              &log),
      adversary(peers, cfg.byz_fraction, Rng::for_stream(cfg.seed, Stream::Adversary)),
      workload(cfg.workload, cfg.n, Rng::for_stream(cfg.seed, Stream::Workload)),
      selection(Rng::for_stream(cfg.seed, Stream::Selection)),
      mining(Rng::for_stream(cfg.seed, Stream::Mining)) {
  const LedgerKind kind = cfg.scheduler == SchedulerKind::Dynamic ? LedgerKind::SeriesParallel : LedgerKind::Chain;
  ledgers.assign(ledger_count(cfg), Ledger(kind));
}

std::uint32_t World::committee_size(const Transaction& txn) const {
  if (config.fixed_size) return *config.fixed_size;
  return committee_size_for_level(txn.level, config.sizing);
}

void World::enqueue(Transaction txn) {
  if (txn.id != txns.size()) throw std::logic_error("transaction ids must be sequential");
  log.record({now, EventKind::Generate, txn.generator, kNoPeer, kNoCommittee, txn.id, txn.level.value});
  waiting.push_back(txn.id);
  txns.push_back(std::move(txn));
}

EngineContext World::engine_context() {
  EngineContext ctx;
  ctx.network = &network;
  ctx.mining_rng = &mining;
  ctx.log = &log;
  ctx.params.max_delay = config.max_delay;
  ctx.params.view_change_timeout = config.resolved_view_change_timeout();
  ctx.params.mining = config.mining;
  return ctx;
}

CommitteeId World::dispatch(TxnId id, std::vector<PeerId> members, std::vector<GroupId> groups) {
  if (waiting.empty() || waiting.front() != id) throw std::logic_error("dispatch must take the head of the queue");
  std::sort(members.begin(), members.end());
  Committee c;
  c.id = static_cast<CommitteeId>(committees.size());
  c.members = std::move(members);
  c.leader = c.members.empty() ? kNoPeer : c.members.front();
  c.engine = config.engine;
  c.txn = id;
  c.level = txns[id].level;
  c.dispatch_round = now;
  std::vector<std::uint8_t> byz(c.members.size(), 0);
  for (std::size_t i = 0; i < c.members.size(); ++i) {
    Peer& p = peers[c.members[i]];
    if (!p.idle()) throw std::logic_error("peer " + std::to_string(p.id) + " is already assigned");
    p.assignment = c.id;
    byz[i] = p.byzantine() ? 1 : 0;
    c.byzantine_count += byz[i];
  }
  c.defeated = classify_committee(c) == Classification::Defeated;

  Transaction& t = txns[id];
  t.advance(TxnStatus::Tentative);
  t.dispatch_round = now;
  waiting.pop_front();

  CommitteeRecord rec;
  rec.id = c.id;
  rec.txn = id;
  rec.level = c.level.value;
  rec.size = static_cast<std::uint32_t>(c.members.size());
  rec.engine = c.engine;
  rec.byzantine_count = c.byzantine_count;
  rec.defeated = c.defeated;
  rec.outcome_defeated = c.defeated;
  rec.dispatch_round = now;
  committees.push_back(rec);
  dispatch_order.push_back(id);

  log.record({now, EventKind::Dispatch, c.leader, kNoPeer, c.id, id, static_cast<std::int64_t>(c.members.size())});
  ActiveCommittee ac;
  ac.engine = start_consensus(c, std::move(byz), engine_context(), now + 1);
  ac.groups = std::move(groups);
  active.emplace(c.id, std::move(ac));
  return c.id;
}

std::size_t World::shuffle() {
  const std::size_t k = adversary.shuffle(peers, now);
  if (k > 0) log.record({now, EventKind::Shuffle, kNoPeer, kNoPeer, kNoCommittee, std::nullopt, static_cast<std::int64_t>(k)});
  return k;
}

Committee World::release(CommitteeId id) {
  auto it = active.find(id);
  if (it == active.end()) throw std::logic_error("committee is not active");
  Committee c = it->second.engine->committee();
  for (PeerId p : c.members) peers[p].assignment.reset();
  active.erase(it);
  return c;
}

}  // namespace blockguard
