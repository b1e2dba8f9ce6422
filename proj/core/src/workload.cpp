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

#include "blockguard/workload.hpp"

namespace blockguard {

std::vector<double> level_probabilities(std::uint32_t levels, double p) {
  if (levels < 1) throw ConfigError("levels must be at least 1");
  std::vector<double> probs(levels);
  double rest = 1.0;
  for (std::uint32_t k = 0; k + 1 < levels; ++k) {
    probs[k] = rest * p;
    rest -= probs[k];
  }
  probs[levels - 1] = rest;
  return probs;
}

Workload::Workload(const WorkloadConfig& config, std::size_t peers, Rng rng)
    : config_(config), peers_(peers), rng_(std::move(rng)) {
  if (config.gen_period < 1) throw ConfigError("genPeriod must be at least 1");
  if (config.levels < 1) throw ConfigError("levels must be at least 1");
  if (!(config.level_prob > 0.0 && config.level_prob <= 1.0)) throw ConfigError("levelProb must be in (0, 1]");
  if (peers == 0) throw ConfigError("network has no peers");
}

SecurityLevel Workload::draw_level() {
  std::uint32_t k = 1;
  while (k < config_.levels && !rng_.bernoulli(config_.level_prob)) ++k;
  return SecurityLevel{k};
}

std::optional<Transaction> Workload::generate(Round round) {
  if (round % config_.gen_period != 0) return std::nullopt;
  Transaction t;
  t.id = next_id_++;
  t.level = draw_level();
  t.generator = static_cast<PeerId>(rng_.below(peers_));
  t.gen_round = round;
  return t;
}

}  // namespace blockguard
