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
#include <optional>
#include <vector>

#include "blockguard/model.hpp"
#include "blockguard/rng.hpp"

namespace blockguard {

struct WorkloadConfig {
  std::uint32_t gen_period = 2;
  std::uint32_t levels = 5;
  double level_prob = 0.5;
};

/// P(level = k) = p(1-p)^(k-1) for k < L; level L takes the remainder.
std::vector<double> level_probabilities(std::uint32_t levels, double p);

/// Transaction source: one transaction every gen_period rounds from a
/// uniformly chosen peer.
class Workload {
 public:
  Workload(const WorkloadConfig& config, std::size_t peers, Rng rng);

  const WorkloadConfig& config() const { return config_; }

  /// A new transaction when round is a multiple of gen_period.
  std::optional<Transaction> generate(Round round);

  SecurityLevel draw_level();

 private:
  WorkloadConfig config_;
  std::size_t peers_;
  Rng rng_;
  TxnId next_id_ = 0;
};

}  // namespace blockguard
