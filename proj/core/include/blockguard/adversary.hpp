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

#include <cstdint>
#include <vector>

#include "blockguard/model.hpp"
#include "blockguard/rng.hpp"

namespace blockguard {

struct SwapRecord {
  Round round = 0;
  std::vector<PeerId> became_byzantine;  // ascending
  std::vector<PeerId> became_honest;     // ascending
};

/// Byzantine identities with a fixed global count. Only idle peers change
/// sides.
class Adversary {
 public:
  /// floor(fraction * n) peers chosen uniformly at random, ascending.
  /// Throws ConfigError unless 0 <= fraction < 1.
  static std::vector<PeerId> assign_initial(std::size_t n, double fraction, Rng& rng);

  /// Marks the initial Byzantine set on `peers`.
  Adversary(std::vector<Peer>& peers, double fraction, Rng rng);

  std::size_t byzantine_count() const { return byzantine_count_; }
  double fraction() const { return fraction_; }

  /// k ~ Uniform{0..min(idle Byzantine, idle honest)} idle Byzantine peers
  /// turn honest and k idle honest peers turn Byzantine. Returns k.
  std::size_t shuffle(std::vector<Peer>& peers, Round round);

  /// One record per shuffle that swapped at least one pair.
  const std::vector<SwapRecord>& swap_log() const { return swaps_; }
  std::uint64_t shuffles() const { return shuffles_; }

 private:
  double fraction_;
  Rng rng_;
  std::size_t byzantine_count_ = 0;
  std::vector<SwapRecord> swaps_;
  std::uint64_t shuffles_ = 0;
  std::vector<PeerId> idle_byz_;
  std::vector<PeerId> idle_honest_;
};

}  // namespace blockguard
