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

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "blockguard/network.hpp"

namespace {

using blockguard::Message;
using blockguard::Network;
using blockguard::PeerId;
using blockguard::Rng;

// All-to-all exchange in one committee, then drain.
void BM_BroadcastRound(benchmark::State& state) {
  const auto members = static_cast<std::size_t>(state.range(0));
  const auto max_delay = static_cast<std::uint32_t>(state.range(1));
  std::vector<PeerId> ids(members);
  std::iota(ids.begin(), ids.end(), PeerId{0});
  Network net(members, max_delay, Rng(7));
  std::size_t delivered = 0;
  for (auto _ : state) {
    for (PeerId p : ids) net.broadcast(p, ids, Message{0});
    while (net.in_flight() > 0) {
      delivered += net.deliver_batches([](const auto&) {});
      net.advance();
    }
  }
  benchmark::DoNotOptimize(delivered);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * members * (members - 1)));
}
BENCHMARK(BM_BroadcastRound)->Args({64, 1})->Args({256, 1})->Args({256, 8})->Args({1024, 4});

void BM_PerEnvelopeDelivery(benchmark::State& state) {
  const auto members = static_cast<std::size_t>(state.range(0));
  std::vector<PeerId> ids(members);
  std::iota(ids.begin(), ids.end(), PeerId{0});
  Network net(members, 4, Rng(7));
  std::uint64_t sum = 0;
  for (auto _ : state) {
    for (PeerId p : ids) net.broadcast(p, ids, Message{0});
    while (net.in_flight() > 0) {
      net.deliver([&](const auto& env) { sum += env.receiver; });
      net.advance();
    }
  }
  benchmark::DoNotOptimize(sum);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * members * (members - 1)));
}
BENCHMARK(BM_PerEnvelopeDelivery)->Arg(64)->Arg(256);

}  // namespace
