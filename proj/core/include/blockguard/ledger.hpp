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
#include <string>
#include <vector>

#include "blockguard/model.hpp"

namespace blockguard {

/// Chain: one linear ledger per recording group.
/// SeriesParallel: the shared ledger, where every block of recording stage k
/// links to all blocks of stage k-1.
enum class LedgerKind : std::uint8_t { Chain, SeriesParallel };

/// One block holds exactly one transaction. The genesis block holds none.
struct Block {
  BlockId id = 0;
  std::optional<TxnId> txn;
  std::uint32_t level = 0;
  std::vector<BlockId> parents;
  std::uint32_t stage = 0;  // chain height for Chain ledgers
  bool defeated = false;
  std::vector<PeerId> publishers;  // members of the approving committee
  std::uint64_t digest = 0;
};

/// Content digest over (txn id, parent ids): FNV-1a, 64 bit.
std::uint64_t block_digest(std::optional<TxnId> txn, const std::vector<BlockId>& parents);

struct BlockContent {
  TxnId txn = 0;
  std::uint32_t level = 0;
  bool defeated = false;
  std::vector<PeerId> publishers;
};

class Ledger {
 public:
  explicit Ledger(LedgerKind kind);

  /// Rebuilds a ledger from raw blocks without checking them (validation is
  /// validate_ledger's job).
  static Ledger from_blocks(LedgerKind kind, std::vector<Block> blocks);

  LedgerKind kind() const { return kind_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(BlockId id) const { return blocks_.at(id); }
  std::size_t size() const { return blocks_.size(); }

  /// Current frontier: the chain tip, or every block of the latest stage.
  const std::vector<BlockId>& heads() const { return heads_; }

  /// Chain ledgers only: links the new block to the current tip.
  BlockId append(const BlockContent& content);

  /// SeriesParallel only. Blocks may be appended only between begin and end.
  std::uint32_t begin_recording_stage();
  BlockId append_in_stage(const BlockContent& content);
  void end_recording_stage();
  bool recording() const { return recording_; }
  std::uint32_t latest_stage() const { return latest_stage_; }

 private:
  BlockId push(const BlockContent& content, std::vector<BlockId> parents, std::uint32_t stage);

  LedgerKind kind_;
  std::vector<Block> blocks_;
  std::vector<BlockId> heads_;
  std::vector<BlockId> prev_stage_;
  std::uint32_t latest_stage_ = 0;
  bool recording_ = false;
};

/// True iff acyclic, single genesis, and the kind-specific parent rule holds
/// for every block.
bool validate_ledger(const Ledger& ledger);

/// JSON array of {blockId, txnId, level, parents[], stage, defeated}.
std::string export_ledger_json(const Ledger& ledger);

}  // namespace blockguard
