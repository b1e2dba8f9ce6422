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

#include "blockguard/metrics.hpp"
#include "blockguard/workload.hpp"
#include "test_support.hpp"

namespace blockguard {
namespace {

TEST(LevelProbabilities, FiveLevels) {
  const auto p = level_probabilities(5, 0.5);
  const std::vector<double> expected{0.5, 0.25, 0.125, 0.0625, 0.0625};
  ASSERT_EQ(p.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(p[i], expected[i]);
  EXPECT_EQ(level_probabilities(1, 0.5), std::vector<double>{1.0});
}

TEST(Workload, OnlyOnGenerationRounds) {
  Workload w(WorkloadConfig{3, 5, 0.5}, 16, Rng(1));
  EXPECT_TRUE(w.generate(0));
  EXPECT_FALSE(w.generate(1));
  EXPECT_FALSE(w.generate(2));
  const auto t = w.generate(3);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->id, 1u);
  EXPECT_EQ(t->gen_round, 3u);
  EXPECT_EQ(t->status, TxnStatus::Pending);
}

TEST(Workload, SingleLevel) {
  Workload w(WorkloadConfig{1, 1, 0.5}, 16, Rng(2));
  for (Round r = 0; r < 1000; ++r) EXPECT_EQ(w.generate(r)->level.value, 1u);
}

TEST(Workload, RejectsBadConfig) {
  EXPECT_THROW(Workload(WorkloadConfig{0, 5, 0.5}, 16, Rng(1)), ConfigError);
  EXPECT_THROW(Workload(WorkloadConfig{2, 0, 0.5}, 16, Rng(1)), ConfigError);
}

TEST(WorkloadInvariant, LevelFrequenciesMillionDraws) {
  Workload w(WorkloadConfig{}, 1024, Rng(3));
  std::vector<double> freq(5, 0.0);
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) freq[w.draw_level().value - 1] += 1;
  const auto p = level_probabilities(5, 0.5);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(freq[k] / kDraws, p[k], 0.005) << "level " << k + 1;
}

TEST(Workload, GeneratorUniform) {
  Workload w(WorkloadConfig{1, 5, 0.5}, 8, Rng(4));
  std::vector<double> hits(8, 0);
  constexpr int kDraws = 80000;
  for (Round r = 0; r < kDraws; ++r) hits[w.generate(r)->generator] += 1;
  for (double h : hits) EXPECT_NEAR(h / kDraws, 0.125, 0.01);
}

Transaction txn(TxnId id, Round gen, std::optional<Round> confirm, TxnStatus status, bool defeated = false) {
  Transaction t;
  t.id = id;
  t.gen_round = gen;
  t.confirm_round = confirm;
  t.status = status;
  t.defeated = defeated;
  return t;
}

TEST(Throughput, ReliablePerRound) {
  MetricsLog log;
  log.rounds = 1000;
  for (TxnId i = 0; i < 500; ++i) log.txns.push_back(txn(i, 2 * i, 2 * i + 1, TxnStatus::Recorded));
  EXPECT_DOUBLE_EQ(*throughput(log), 0.5);
  for (auto& t : log.txns) t.defeated = true;
  EXPECT_DOUBLE_EQ(*throughput(log), 0.0);
  log.rounds = 0;
  EXPECT_FALSE(throughput(log));
}

TEST(AvgWait, SingleAndDefeated) {
  MetricsLog log;
  log.rounds = 20;
  log.txns.push_back(txn(0, 0, 10, TxnStatus::Recorded));
  EXPECT_DOUBLE_EQ(*avg_waiting_time(log), 10.0);
  log.txns.push_back(txn(1, 2, 6, TxnStatus::Recorded, true));
  EXPECT_DOUBLE_EQ(*avg_waiting_time(log), 7.0);
  log.txns.push_back(txn(2, 4, std::nullopt, TxnStatus::Pending));
  EXPECT_DOUBLE_EQ(*avg_waiting_time(log), 7.0);
  EXPECT_EQ(backlog(log), 1u);
  MetricsLog empty;
  EXPECT_FALSE(avg_waiting_time(empty));
}

TEST(DefeatedRatio, PerLevelAndRaw) {
  MetricsLog log;
  EXPECT_FALSE(defeated_ratio(log, 5).ratio);
  auto add = [&](std::uint32_t level, bool raw, bool outcome) {
    CommitteeRecord c;
    c.level = level;
    c.defeated = raw;
    c.outcome_defeated = outcome;
    log.committees.push_back(c);
  };
  add(1, false, false);
  add(1, true, true);
  add(2, true, false);  // PoW honest-miner credit
  add(2, false, false);
  const DefeatSummary s = defeated_ratio(log, 3);
  EXPECT_DOUBLE_EQ(*s.ratio, 0.25);
  EXPECT_DOUBLE_EQ(*s.raw_ratio, 0.5);
  EXPECT_DOUBLE_EQ(*s.per_level[0], 0.5);
  EXPECT_DOUBLE_EQ(*s.per_level[1], 0.0);
  EXPECT_FALSE(s.per_level[2]);
}

MetricsLog random_log(std::uint64_t seed, Round rounds) {
  Rng rng(seed);
  MetricsLog log;
  log.rounds = rounds;
  for (TxnId i = 0; i < rounds / 2; ++i) {
    const Round gen = 2 * i;
    const double u = rng.unit();
    if (u < 0.7) {
      const Round confirm = gen + 1 + static_cast<Round>(rng.below(60));
      if (confirm < rounds) {
        log.txns.push_back(txn(i, gen, confirm, TxnStatus::Recorded, rng.bernoulli(0.2)));
        continue;
      }
    }
    log.txns.push_back(txn(i, gen, std::nullopt, u < 0.85 ? TxnStatus::Tentative : TxnStatus::Pending));
  }
  return log;
}

TEST(MetricsOracle, LogFoldEquality) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const MetricsLog log = random_log(seed, 1000);
    EXPECT_DOUBLE_EQ(*throughput(log), *testing::fold_throughput(log));
    EXPECT_DOUBLE_EQ(*avg_waiting_time(log), *testing::fold_wait(log));
    const StatusCounts c = status_counts(log);
    EXPECT_EQ(c.generated, c.recorded + c.discarded + c.pending + c.tentative);
  }
}

TEST(Timeline, FlatHalf) {
  MetricsLog log;
  log.rounds = 1000;
  for (TxnId i = 0; i < 500; ++i) log.txns.push_back(txn(i, 2 * i, 2 * i + 1, TxnStatus::Recorded));
  const auto series = rolling_timeline(log, 200);
  ASSERT_EQ(series.size(), 800u);
  EXPECT_EQ(series.front().round, 200u);
  for (const auto& p : series) {
    EXPECT_DOUBLE_EQ(p.throughput, 0.5);
    EXPECT_DOUBLE_EQ(*p.wait, 1.0);
  }
}

TEST(Timeline, ShortRunEmpty) {
  MetricsLog log;
  log.rounds = 150;
  EXPECT_TRUE(rolling_timeline(log, 200).empty());
}

TEST(Timeline, MatchesNaiveRecount) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const MetricsLog log = random_log(seed, 700);
    for (Round window : {1u, 50u, 200u}) {
      const auto fast = rolling_timeline(log, window);
      const auto slow = testing::naive_timeline(log, window);
      ASSERT_EQ(fast.size(), slow.size());
      for (std::size_t i = 0; i < fast.size(); ++i) {
        ASSERT_EQ(fast[i].round, slow[i].round);
        ASSERT_NEAR(fast[i].throughput, slow[i].throughput, 1e-12);
        ASSERT_EQ(fast[i].wait.has_value(), slow[i].wait.has_value());
        if (fast[i].wait) {
          ASSERT_NEAR(*fast[i].wait, *slow[i].wait, 1e-9);
        }
      }
    }
  }
}

}  // namespace
}  // namespace blockguard
