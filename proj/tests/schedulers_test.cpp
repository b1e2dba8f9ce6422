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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "blockguard/scheduler.hpp"
#include "blockguard/simulation.hpp"

namespace blockguard {
namespace {

SimConfig config(SchedulerKind kind, std::uint32_t n = 1024) {
  SimConfig c;
  c.scheduler = kind;
  c.n = n;
  c.byz_fraction = 0.0;
  return c;
}

void push(World& w, std::uint32_t level) {
  Transaction t;
  t.id = static_cast<TxnId>(w.txns.size());
  t.level = SecurityLevel{level};
  t.gen_round = w.now;
  w.enqueue(t);
}

std::set<PeerId> active_members(const World& w) {
  std::set<PeerId> out;
  for (const auto& [id, ac] : w.active) {
    for (PeerId p : ac.engine->committee().members) EXPECT_TRUE(out.insert(p).second) << "peer " << p;
  }
  return out;
}

TEST(Composite, LevelFiveTakesWholeNetwork) {
  World w(config(SchedulerKind::Composite));
  CompositeScheduler s(w);
  push(w, 5);
  EXPECT_EQ(s.evaluate(w), 1u);
  ASSERT_EQ(w.active.size(), 1u);
  EXPECT_EQ(w.active.begin()->second.engine->committee().members.size(), 1024u);
  EXPECT_EQ(w.active.begin()->second.groups.size(), 16u);
  EXPECT_TRUE(s.free_groups().empty());
}

TEST(Composite, HeadOfLineBlocking) {
  World w(config(SchedulerKind::Composite));
  CompositeScheduler s(w);
  push(w, 4);
  push(w, 3);
  push(w, 1);
  EXPECT_EQ(s.evaluate(w), 3u);
  ASSERT_EQ(s.free_groups().size(), 3u);
  push(w, 3);
  push(w, 1);
  EXPECT_EQ(s.evaluate(w), 0u);
  EXPECT_EQ(w.waiting.size(), 2u);
}

TEST(Composite, SixteenLevelOneCommittees) {
  World w(config(SchedulerKind::Composite));
  CompositeScheduler s(w);
  for (int i = 0; i < 17; ++i) push(w, 1);
  EXPECT_EQ(s.evaluate(w), 16u);
  EXPECT_EQ(active_members(w).size(), 1024u);
  EXPECT_EQ(w.waiting.size(), 1u);
}

TEST(Composite, GreedySeatingMatchesBruteForce) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    World w(config(SchedulerKind::Composite));
    CompositeScheduler s(w);
    std::vector<std::uint32_t> levels;
    for (int i = 0; i < 12; ++i) {
      levels.push_back(1 + static_cast<std::uint32_t>(rng.below(5)));
      push(w, levels.back());
    }
    std::size_t free = 16;
    std::size_t expected = 0;
    for (std::uint32_t l : levels) {
      const std::size_t need = std::size_t{1} << (l - 1);
      if (need > free) break;
      free -= need;
      ++expected;
    }
    ASSERT_EQ(s.evaluate(w), expected);
    ASSERT_EQ(s.free_groups().size(), free);
  }
}

TEST(Composite, CompletionReseatsWaiting) {
  World w(config(SchedulerKind::Composite));
  CompositeScheduler s(w);
  push(w, 3);  // 4 groups
  push(w, 4);  // 8 groups
  push(w, 3);  // 4 groups: network full
  push(w, 2);
  ASSERT_EQ(s.evaluate(w), 3u);
  ASSERT_EQ(w.waiting.size(), 1u);
  const std::vector<GroupId> served = w.active.at(0).groups;
  s.on_completed(w, 0);
  EXPECT_TRUE(w.waiting.empty());
  EXPECT_EQ(w.txns[0].status, TxnStatus::Recorded);
  EXPECT_EQ(w.active.at(3).groups, (std::vector<GroupId>{served[0], served[1]}));
  for (GroupId g : served) {
    ASSERT_EQ(w.ledgers[g].size(), 2u);
    EXPECT_EQ(w.ledgers[g].block(1).txn, 0u);
  }
  EXPECT_EQ(s.free_groups().size(), 2u);
}

TEST(Composite, LastCompletionFreesEverything) {
  World w(config(SchedulerKind::Composite));
  CompositeScheduler s(w);
  push(w, 2);
  push(w, 1);
  s.evaluate(w);
  s.on_completed(w, 1);
  s.on_completed(w, 0);
  EXPECT_TRUE(w.active.empty());
  EXPECT_EQ(s.free_groups().size(), 16u);
  std::set<GroupId> all(s.free_groups().begin(), s.free_groups().end());
  EXPECT_EQ(all.size(), 16u);
}

TEST(Composite, CompletionOrderIndependence) {
  std::vector<int> order{0, 1, 2, 3, 4};
  std::optional<std::vector<std::vector<std::optional<TxnId>>>> reference;
  do {
    World w(config(SchedulerKind::Composite));
    CompositeScheduler s(w);
    for (std::uint32_t l : {1u, 2u, 1u, 3u, 2u}) push(w, l);
    ASSERT_EQ(s.evaluate(w), 5u);
    for (int id : order) s.on_completed(w, static_cast<CommitteeId>(id));
    std::vector<std::vector<std::optional<TxnId>>> contents;
    for (const Ledger& l : w.ledgers) {
      std::vector<std::optional<TxnId>> txns;
      for (const Block& b : l.blocks()) txns.push_back(b.txn);
      contents.push_back(txns);
      EXPECT_TRUE(validate_ledger(l));
    }
    if (!reference) reference = contents;
    EXPECT_EQ(contents, *reference);
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST(Composite, ConfigErrors) {
  SimConfig c = config(SchedulerKind::Composite, 1008);
  c.gsize = 48;
  EXPECT_THROW(validate(c), ConfigError);
  SimConfig f = config(SchedulerKind::Composite);
  f.fixed_size = 2048;
  EXPECT_THROW(validate(f), ConfigError);
  SimConfig d = config(SchedulerKind::Dynamic);
  d.win_size = 512;
  EXPECT_THROW(validate(d), ConfigError);
  d.sizing.levels = d.workload.levels = 4;
  EXPECT_NO_THROW(validate(d));
}

TEST(Fixed, CapacityArithmetic) {
  SimConfig c = config(SchedulerKind::Composite);
  c.fixed_size = 64;
  World w(c);
  CompositeScheduler s(w);
  for (int i = 0; i < 20; ++i) push(w, 5);
  EXPECT_EQ(s.evaluate(w), 16u);

  c.fixed_size = 1024;
  World big(c);
  CompositeScheduler sb(big);
  for (int i = 0; i < 3; ++i) push(big, 1);
  EXPECT_EQ(sb.evaluate(big), 1u);
}

TEST(Fixed, DynamicCapacity) {
  SimConfig c = config(SchedulerKind::Dynamic);
  c.fixed_size = 64;
  World w(c);
  DynamicScheduler s(w);
  for (int i = 0; i < 20; ++i) push(w, 5);
  EXPECT_EQ(s.form_committees(w), 16u);
  EXPECT_EQ(active_members(w).size(), 1024u);
}

TEST(Fixed, SmallCommitteesOutperformWholeNetwork) {
  for (EngineKind e : {EngineKind::Pbft, EngineKind::Sbft, EngineKind::Pow}) {
    for (SchedulerKind k : {SchedulerKind::Composite, SchedulerKind::Dynamic}) {
      SimConfig c = config(k);
      c.byz_fraction = 0.1;
      c.engine = e;
      c.rounds = 400;
      c.fixed_size = 64;
      Simulation small(c);
      small.run();
      c.fixed_size = 1024;
      Simulation whole(c);
      whole.run();
      EXPECT_GT(*throughput(small.metrics()), *throughput(whole.metrics()));
    }
  }
}

TEST(Dynamic, BootstrapWindowIsAllPeers) {
  SimConfig c = config(SchedulerKind::Dynamic);
  c.win_size = 512;
  c.sizing.levels = c.workload.levels = 4;
  World w(c);
  DynamicScheduler s(w);
  const auto win = s.window(w);
  ASSERT_EQ(win.size(), 1024u);
  push(w, 1);
  EXPECT_EQ(s.form_committees(w), 1u);
  EXPECT_EQ(w.active.at(0).engine->committee().members.size(), 64u);
}

TEST(Dynamic, WindowExhaustion) {
  SimConfig c = config(SchedulerKind::Dynamic, 128);
  c.sizing.levels = c.workload.levels = 2;
  World w(c);
  DynamicScheduler s(w);
  push(w, 1);
  push(w, 1);
  push(w, 1);
  EXPECT_EQ(s.form_committees(w), 2u);
  EXPECT_EQ(active_members(w).size(), 128u);
}

TEST(Dynamic, RecordingWaitsForSlowestCommittee) {
  World w(config(SchedulerKind::Dynamic));
  DynamicScheduler s(w);
  push(w, 1);
  push(w, 1);
  ASSERT_EQ(s.form_committees(w), 2u);
  w.now = 10;
  s.on_completed(w, 0);
  EXPECT_EQ(s.phase(), DynamicPhase::Consensus);
  s.end_of_round(w);
  EXPECT_EQ(w.ledgers[0].size(), 1u);
  w.now = 30;
  s.on_completed(w, 1);
  EXPECT_EQ(s.recording_at(), 31u);
  EXPECT_EQ(s.phase(), DynamicPhase::Recording);
  s.end_of_round(w);
  EXPECT_EQ(w.ledgers[0].size(), 1u);
  w.now = 31;
  s.end_of_round(w);
  EXPECT_EQ(w.ledgers[0].size(), 3u);
  EXPECT_EQ(w.txns[0].status, TxnStatus::Recorded);
  EXPECT_EQ(w.txns[1].record_round, 31u);
  EXPECT_EQ(s.phase(), DynamicPhase::Consensus);
  EXPECT_TRUE(validate_ledger(w.ledgers[0]));
}

TEST(Dynamic, WindowPutsPublishersFirst) {
  SimConfig c = config(SchedulerKind::Dynamic);
  c.win_size = 1024;
  World w(c);
  DynamicScheduler s(w);
  push(w, 1);
  push(w, 1);
  s.form_committees(w);
  std::vector<PeerId> a = w.active.at(0).engine->committee().members;
  std::vector<PeerId> b = w.active.at(1).engine->committee().members;
  s.on_completed(w, 1);
  s.on_completed(w, 0);
  w.now = *s.recording_at();
  s.end_of_round(w);
  const auto win = s.window(w);
  std::vector<PeerId> expected = a;
  expected.insert(expected.end(), b.begin(), b.end());
  EXPECT_TRUE(std::equal(expected.begin(), expected.end(), win.begin()));
}

TEST(Dynamic, SingleCommitteeStagesFormChain) {
  SimConfig c = config(SchedulerKind::Dynamic, 64);
  c.sizing.levels = c.workload.levels = 1;
  c.rounds = 200;
  Simulation sim(c);
  sim.run();
  const Ledger& l = sim.world().ledgers.front();
  ASSERT_GT(l.size(), 10u);
  for (const Block& b : l.blocks()) {
    if (b.id == 0) continue;
    EXPECT_EQ(b.parents, std::vector<BlockId>{b.id - 1});
  }
}

TEST(Dynamic, StageRecordedOneRoundAfterLastCompletion) {
  SimConfig c = config(SchedulerKind::Dynamic);
  c.byz_fraction = 0.1;
  c.events = EventDetail::Protocol;
  c.rounds = 600;
  Simulation sim(c);
  sim.run();
  std::optional<Round> last_complete;
  std::size_t stages = 0;
  for (const Event& e : sim.world().log.events()) {
    if (e.kind == EventKind::Complete) last_complete = e.round;
    if (e.kind == EventKind::StageBegin) {
      ASSERT_TRUE(last_complete);
      EXPECT_EQ(e.round, *last_complete + c.recording_rounds);
      last_complete.reset();
      ++stages;
    }
  }
  EXPECT_GT(stages, 20u);
}

}  // namespace
}  // namespace blockguard
