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

#include <map>
#include <utility>

#include "blockguard/network.hpp"
#include "test_support.hpp"

namespace blockguard {
namespace {

const Message kMsg{0, MessageKind::Opaque, 0};

TEST(Schedule, UnitDelayOnIdleChannel) {
  ChannelState ch(4);
  Rng rng(1);
  const Envelope e = schedule(ch, Envelope{0, 1, kMsg, 7, 0}, 1, rng);
  EXPECT_EQ(e.deliver_round, 8u);
  EXPECT_EQ(ch.next_free(0, 1), 8u);
}

TEST(Schedule, BackToBackSendsStayOrdered) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    ChannelState ch(2);
    const Envelope a = schedule(ch, Envelope{0, 1, kMsg, 5, 0}, 4, rng);
    const Envelope b = schedule(ch, Envelope{0, 1, kMsg, 5, 0}, 4, rng);
    ASSERT_GT(b.deliver_round, a.deliver_round);
    ASSERT_GE(a.deliver_round, 6u);
    ASSERT_LE(a.deliver_round, 9u);
  }
}

TEST(Schedule, RejectsZeroDelay) {
  ChannelState ch(2);
  Rng rng(1);
  EXPECT_THROW(schedule(ch, Envelope{0, 1, kMsg, 0, 0}, 0, rng), ConfigError);
  EXPECT_THROW(Network(2, 0, Rng(1)), ConfigError);
}

TEST(Schedule, DelayFrequenciesUniform) {
  Rng rng(11);
  std::map<Round, int> freq;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    ChannelState ch(2);
    const Envelope e = schedule(ch, Envelope{0, 1, kMsg, 0, 0}, 4, rng);
    ++freq[e.deliver_round];
  }
  ASSERT_EQ(freq.size(), 4u);
  for (const auto& [delay, count] : freq) {
    EXPECT_GE(delay, 1u);
    EXPECT_LE(delay, 4u);
    EXPECT_NEAR(static_cast<double>(count) / kDraws, 0.25, 0.01) << "delay " << delay;
  }
}

TEST(Network, EmptyStepAdvances) {
  Network net(4, 1, Rng(1));
  EXPECT_EQ(net.step([](const Envelope&) { FAIL(); }), 0u);
  EXPECT_EQ(net.now(), 1u);
}

TEST(Network, BroadcastCardinality) {
  Network net(64, 1, Rng(1));
  const auto members = testing::iota_members(4);
  EXPECT_EQ(net.broadcast(0, members, kMsg), 3u);
  std::vector<Envelope> got;
  net.advance();
  net.deliver([&](const Envelope& e) { got.push_back(e); });
  ASSERT_EQ(got.size(), 3u);
  for (const Envelope& e : got) {
    EXPECT_EQ(e.deliver_round, 1u);
    EXPECT_NE(e.receiver, 0u);
  }

  const auto all = testing::iota_members(64);
  EXPECT_EQ(net.broadcast(5, all, kMsg), 63u);
  EXPECT_EQ(net.in_flight(), 63u);
}

TEST(Network, ManySendersOneReceiverSameRound) {
  Network net(4, 1, Rng(1));
  net.send(3, 0, kMsg);
  net.send(1, 0, kMsg);
  net.send(2, 0, kMsg);
  net.advance();
  std::vector<PeerId> senders;
  net.deliver([&](const Envelope& e) { senders.push_back(e.sender); });
  EXPECT_EQ(senders, (std::vector<PeerId>{1, 2, 3}));
}

TEST(Network, DeliveryOrderReceiverThenSender) {
  Network net(6, 1, Rng(1));
  net.broadcast(4, testing::iota_members(6), kMsg);
  net.broadcast(1, testing::iota_members(6), kMsg);
  net.advance();
  std::vector<std::pair<PeerId, PeerId>> order;
  net.deliver([&](const Envelope& e) { order.emplace_back(e.receiver, e.sender); });
  EXPECT_TRUE(std::is_sorted(order.begin(), order.end()));
  EXPECT_EQ(order.size(), 10u);
}

// Random traffic with repeated broadcasts; replays the full log.
struct TrafficResult {
  std::vector<Envelope> sent;
  std::vector<Envelope> delivered;
  std::vector<Envelope> pending;
};

TrafficResult random_traffic(std::uint32_t max_delay, Round rounds, std::uint64_t seed) {
  constexpr std::size_t kPeers = 12;
  EventLog log(EventDetail::Messages);
  Network net(kPeers, max_delay, Rng(seed), &log);
  Rng traffic(seed + 100);
  TrafficResult out;
  const auto all = testing::iota_members(kPeers);
  std::uint32_t tag = 0;
  for (Round r = 0; r < rounds; ++r) {
    net.deliver([&](const Envelope& e) { out.delivered.push_back(e); });
    const int sends = static_cast<int>(traffic.below(4));
    for (int i = 0; i < sends; ++i) {
      const PeerId s = static_cast<PeerId>(traffic.below(kPeers));
      Message m{0, MessageKind::Opaque, tag++};
      if (traffic.bernoulli(0.5)) {
        net.broadcast(s, all, m);
      } else {
        net.send(s, static_cast<PeerId>(traffic.below(kPeers)), m);
      }
    }
    net.advance();
  }
  for (const Event& e : log.events()) {
    if (e.kind == EventKind::Send) out.sent.push_back({e.sender, e.receiver, {}, e.round, static_cast<Round>(*e.value)});
  }
  out.pending = net.pending();
  return out;
}

TEST(NetworkProperty, PerPairFifoAndDelayBounds) {
  for (std::uint32_t d : {1u, 2u, 4u, 8u}) {
    const TrafficResult t = random_traffic(d, 300, d);
    std::map<std::pair<PeerId, PeerId>, std::vector<std::uint32_t>> sent_tags;
    std::map<std::pair<PeerId, PeerId>, Round> last;
    for (const Envelope& e : t.delivered) {
      ASSERT_GE(e.deliver_round, e.send_round + 1);
      auto key = std::make_pair(e.sender, e.receiver);
      sent_tags[key].push_back(e.payload.view);
      auto it = last.find(key);
      if (it != last.end()) {
        ASSERT_GT(e.deliver_round, it->second);  // one per pair per round
      }
      last[key] = e.deliver_round;
    }
    // Tags are issued in send order, so per-pair delivery must see them ascending.
    for (const auto& [key, tags] : sent_tags) ASSERT_TRUE(std::is_sorted(tags.begin(), tags.end()));
  }
}

TEST(NetworkProperty, IndividualDelayWithinBound) {
  // On an idle pair every delay is exactly the draw, so it lies in [1, d].
  Network net(1024, 8, Rng(4));
  net.broadcast(0, testing::iota_members(1024), kMsg);
  for (const Envelope& e : net.pending()) {
    EXPECT_GE(e.deliver_round, 1u);
    EXPECT_LE(e.deliver_round, 8u);
  }
}

TEST(NetworkProperty, NoLossOnlyPostCutoffRemains) {
  const Round rounds = 200;
  const TrafficResult t = random_traffic(4, rounds, 9);
  EXPECT_EQ(t.sent.size(), t.delivered.size() + t.pending.size());
  for (const Envelope& e : t.pending) EXPECT_GE(e.deliver_round, rounds);
  for (const Envelope& e : t.delivered) EXPECT_LT(e.deliver_round, rounds);
}

TEST(NetworkProperty, DrainDeliversEverything) {
  constexpr std::size_t kPeers = 16;
  Network net(kPeers, 8, Rng(5));
  const auto all = testing::iota_members(kPeers);
  for (int i = 0; i < 20; ++i) net.broadcast(static_cast<PeerId>(i % kPeers), all, kMsg);
  const std::uint64_t sent = net.sent_total();
  for (int r = 0; r < 1000 && net.in_flight() > 0; ++r) net.step([](const Envelope&) {});
  EXPECT_EQ(net.in_flight(), 0u);
  EXPECT_EQ(net.delivered_total(), sent);
}

TEST(NetworkProperty, BatchesMatchEnvelopes) {
  constexpr std::size_t kPeers = 20;
  auto drive = [&](bool batches) {
    Network net(kPeers, 4, Rng(77));
    Rng traffic(5);
    std::vector<std::tuple<Round, PeerId, PeerId>> seen;
    const auto all = testing::iota_members(kPeers);
    for (Round r = 0; r < 100; ++r) {
      if (batches) {
        net.deliver_batches([&](const Batch& b) {
          for (PeerId p : b.receivers) seen.emplace_back(b.deliver_round, p, b.sender);
        });
      } else {
        net.deliver([&](const Envelope& e) { seen.emplace_back(e.deliver_round, e.receiver, e.sender); });
      }
      if (traffic.bernoulli(0.7)) net.broadcast(static_cast<PeerId>(traffic.below(kPeers)), all, kMsg);
      net.advance();
    }
    std::sort(seen.begin(), seen.end());
    return seen;
  };
  EXPECT_EQ(drive(true), drive(false));
}

TEST(NetworkProperty, RingGrowsForLongDelays) {
  Network net(2, 1000, Rng(1));
  for (int i = 0; i < 50; ++i) net.send(0, 1, kMsg);
  const std::vector<Envelope> pending = net.pending();
  ASSERT_EQ(pending.size(), 50u);
  std::size_t delivered = 0;
  Round last = 0;
  while (net.in_flight() > 0) {
    net.step([&](const Envelope& e) {
      EXPECT_GT(e.deliver_round, last);
      last = e.deliver_round;
      ++delivered;
    });
  }
  EXPECT_EQ(delivered, 50u);
}

TEST(Network, Deterministic) {
  auto a = random_traffic(8, 150, 42);
  auto b = random_traffic(8, 150, 42);
  ASSERT_EQ(a.delivered.size(), b.delivered.size());
  for (std::size_t i = 0; i < a.delivered.size(); ++i) {
    EXPECT_EQ(a.delivered[i].deliver_round, b.delivered[i].deliver_round);
    EXPECT_EQ(a.delivered[i].sender, b.delivered[i].sender);
  }
}

}  // namespace
}  // namespace blockguard
