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

#include "blockguard/ledger.hpp"

#include <algorithm>

#include <json.hpp>

namespace blockguard {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
}

}  // namespace

std::uint64_t block_digest(std::optional<TxnId> txn, const std::vector<BlockId>& parents) {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, txn ? (std::uint64_t{1} << 32) | *txn : 0);
  for (BlockId p : parents) fnv_mix(h, p);
  return h;
}

Ledger::Ledger(LedgerKind kind) : kind_(kind) {
  Block genesis;
  genesis.digest = block_digest(std::nullopt, {});
  blocks_.push_back(std::move(genesis));
  heads_ = {0};
  prev_stage_ = {0};
}

Ledger Ledger::from_blocks(LedgerKind kind, std::vector<Block> blocks) {
  Ledger ledger(kind);
  ledger.blocks_ = std::move(blocks);
  ledger.heads_.clear();
  std::uint32_t top = 0;
  for (const auto& b : ledger.blocks_) top = std::max(top, b.stage);
  for (const auto& b : ledger.blocks_) {
    if (b.stage == top) ledger.heads_.push_back(b.id);
  }
  ledger.prev_stage_ = ledger.heads_;
  ledger.latest_stage_ = top;
  return ledger;
}

BlockId Ledger::push(const BlockContent& content, std::vector<BlockId> parents, std::uint32_t stage) {
  Block b;
  b.id = static_cast<BlockId>(blocks_.size());
  b.txn = content.txn;
  b.level = content.level;
  b.digest = block_digest(b.txn, parents);
  b.parents = std::move(parents);
  b.stage = stage;
  b.defeated = content.defeated;
  b.publishers = content.publishers;
  blocks_.push_back(std::move(b));
  return blocks_.back().id;
}

BlockId Ledger::append(const BlockContent& content) {
  if (kind_ != LedgerKind::Chain) {
    throw PhaseError("append on a series-parallel ledger requires a recording stage");
  }
  const BlockId tip = heads_.front();
  const BlockId id = push(content, {tip}, blocks_[tip].stage + 1);
  heads_ = {id};
  latest_stage_ = blocks_[id].stage;
  return id;
}

std::uint32_t Ledger::begin_recording_stage() {
  if (kind_ != LedgerKind::SeriesParallel) throw PhaseError("chain ledgers have no recording stages");
  if (recording_) throw PhaseError("recording stage already open");
  recording_ = true;
  prev_stage_ = heads_;
  heads_.clear();
  return latest_stage_ + 1;
}

BlockId Ledger::append_in_stage(const BlockContent& content) {
  if (!recording_) throw PhaseError("block append outside a recording stage");
  const BlockId id = push(content, prev_stage_, latest_stage_ + 1);
  heads_.push_back(id);
  return id;
}

void Ledger::end_recording_stage() {
  if (!recording_) throw PhaseError("no recording stage open");
  recording_ = false;
  if (heads_.empty()) {
    // An empty stage leaves the frontier untouched.
    heads_ = prev_stage_;
    return;
  }
  ++latest_stage_;
}

bool validate_ledger(const Ledger& ledger) {
  const auto& blocks = ledger.blocks();
  if (blocks.empty()) return false;

  std::size_t genesis_count = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    if (b.id != i) return false;
    if (b.parents.empty()) {
      ++genesis_count;
      if (b.stage != 0 || b.txn.has_value()) return false;
    }
    // Parents must precede the child, which rules out cycles.
    for (BlockId p : b.parents) {
      if (p >= b.id) return false;
    }
  }
  if (genesis_count != 1 || !blocks.front().parents.empty()) return false;

  if (ledger.kind() == LedgerKind::Chain) {
    for (std::size_t i = 1; i < blocks.size(); ++i) {
      const Block& b = blocks[i];
      if (b.parents.size() != 1 || b.parents.front() != i - 1) return false;
      if (b.stage != blocks[i - 1].stage + 1) return false;
    }
    return true;
  }

  // Series-parallel: stages are contiguous and non-decreasing in block order.
  std::vector<std::vector<BlockId>> by_stage;
  for (const Block& b : blocks) {
    if (b.stage >= by_stage.size()) {
      if (b.stage != by_stage.size()) return false;
      by_stage.emplace_back();
    }
    if (b.stage + 1 < by_stage.size()) return false;
    by_stage[b.stage].push_back(b.id);
  }
  if (by_stage[0].size() != 1) return false;
  for (const Block& b : blocks) {
    if (b.stage == 0) continue;
    std::vector<BlockId> parents = b.parents;
    std::sort(parents.begin(), parents.end());
    if (parents != by_stage[b.stage - 1]) return false;
  }
  return true;
}

std::string export_ledger_json(const Ledger& ledger) {
  nlohmann::json out = nlohmann::json::array();
  for (const Block& b : ledger.blocks()) {
    nlohmann::json j;
    j["blockId"] = b.id;
    j["txnId"] = b.txn ? nlohmann::json(*b.txn) : nlohmann::json(nullptr);
    j["level"] = b.level;
    j["parents"] = b.parents;
    j["stage"] = b.stage;
    j["defeated"] = b.defeated;
    out.push_back(std::move(j));
  }
  return out.dump();
}

}  // namespace blockguard
