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

#include "blockguard/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

namespace blockguard {

std::vector<PeerId> Adversary::assign_initial(std::size_t n, double fraction, Rng& rng) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw ConfigError("byzFraction must be in [0, 1)");
  // Epsilon keeps 0.1 * 1024 at 102 despite binary rounding of 0.1.
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  std::vector<PeerId> ids(n);
  std::iota(ids.begin(), ids.end(), PeerId{0});
  rng.partial_shuffle(std::span<PeerId>(ids), count);
  ids.resize(count);
  std::sort(ids.begin(), ids.end());
  return ids;
}

Adversary::Adversary(std::vector<Peer>& peers, double fraction, Rng rng) : fraction_(fraction), rng_(std::move(rng)) {
  for (PeerId id : assign_initial(peers.size(), fraction, rng_)) peers[id].honesty = Honesty::Byzantine;
  byzantine_count_ = static_cast<std::size_t>(
      std::count_if(peers.begin(), peers.end(), [](const Peer& p) { return p.byzantine(); }));
}

std::size_t Adversary::shuffle(std::vector<Peer>& peers, Round round) {
  ++shuffles_;
  idle_byz_.clear();
  idle_honest_.clear();
  for (const Peer& p : peers) {
    if (!p.idle()) continue;
    (p.byzantine() ? idle_byz_ : idle_honest_).push_back(p.id);
  }
  const std::size_t cap = std::min(idle_byz_.size(), idle_honest_.size());
  const auto k = static_cast<std::size_t>(rng_.below(cap + 1));
  if (k == 0) return 0;
  rng_.partial_shuffle(std::span<PeerId>(idle_byz_), k);
  rng_.partial_shuffle(std::span<PeerId>(idle_honest_), k);
  SwapRecord rec;
  rec.round = round;
  rec.became_honest.assign(idle_byz_.begin(), idle_byz_.begin() + static_cast<std::ptrdiff_t>(k));
  rec.became_byzantine.assign(idle_honest_.begin(), idle_honest_.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(rec.became_honest.begin(), rec.became_honest.end());
  std::sort(rec.became_byzantine.begin(), rec.became_byzantine.end());
  for (PeerId id : rec.became_honest) peers[id].honesty = Honesty::Honest;
  for (PeerId id : rec.became_byzantine) peers[id].honesty = Honesty::Byzantine;
  swaps_.push_back(std::move(rec));
  return k;
}

}  // namespace blockguard
