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

#include "blockguard/model.hpp"

#include <algorithm>
#include <string>

namespace blockguard {

std::string_view to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::Pbft: return "pbft";
    case EngineKind::Sbft: return "sbft";
    case EngineKind::Pow: return "pow";
  }
  return "?";
}

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::Composite: return "composite";
    case SchedulerKind::Dynamic: return "dynamic";
  }
  return "?";
}

EngineKind parse_engine_kind(std::string_view text) {
  if (text == "pbft") return EngineKind::Pbft;
  if (text == "sbft") return EngineKind::Sbft;
  if (text == "pow") return EngineKind::Pow;
  throw ConfigError("unknown engine '" + std::string(text) + "' (expected pbft, sbft or pow)");
}

SchedulerKind parse_scheduler_kind(std::string_view text) {
  if (text == "composite") return SchedulerKind::Composite;
  if (text == "dynamic") return SchedulerKind::Dynamic;
  throw ConfigError("unknown scheduler '" + std::string(text) + "' (expected composite or dynamic)");
}

std::uint32_t committee_size_for_level(SecurityLevel level, const SizingConfig& config) {
  if (level.value < 1 || level.value > config.levels) {
    throw ConfigError("security level " + std::to_string(level.value) + " outside [1, " +
                      std::to_string(config.levels) + "]");
  }
  const std::uint64_t size = config.rule == SizingRule::Exponential
                                 ? std::uint64_t{config.base_size} << std::min(level.value - 1, 40U)
                                 : std::uint64_t{level.value} * config.sec_mult;
  if (size > 0xffffffffULL) throw ConfigError("committee size overflows");
  return static_cast<std::uint32_t>(size);
}

void Transaction::advance(TxnStatus next) {
  const bool ok = (status == TxnStatus::Pending && next == TxnStatus::Tentative) ||
                  (status == TxnStatus::Tentative &&
                   (next == TxnStatus::Recorded || next == TxnStatus::Discarded));
  if (!ok) {
    throw std::logic_error("illegal transaction status transition for txn " + std::to_string(id));
  }
  status = next;
}

}  // namespace blockguard
