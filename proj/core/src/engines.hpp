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

#include <memory>
#include <vector>

#include "blockguard/consensus.hpp"

namespace blockguard::detail {

std::unique_ptr<ConsensusEngine> make_pbft(const Committee& c, std::vector<std::uint8_t> byz, const EngineContext& ctx,
                                           Round start);
std::unique_ptr<ConsensusEngine> make_sbft(const Committee& c, std::vector<std::uint8_t> byz, const EngineContext& ctx,
                                           Round start);
std::unique_ptr<ConsensusEngine> make_pow(const Committee& c, std::vector<std::uint8_t> byz, const EngineContext& ctx,
                                          Round start);

/// Fixed-size bitset rows, one row per member.
class BitRows {
 public:
  BitRows() = default;
  BitRows(std::size_t rows, std::size_t bits) : words_((bits + 63) / 64), data_(rows * words_, 0) {}

  /// Sets bit `col` of `row`; returns true if it was clear.
  bool set(std::size_t row, std::size_t col) {
    std::uint64_t& w = data_[row * words_ + col / 64];
    const std::uint64_t bit = std::uint64_t{1} << (col % 64);
    if ((w & bit) != 0) return false;
    w |= bit;
    return true;
  }
  void clear() { std::fill(data_.begin(), data_.end(), 0); }

 private:
  std::size_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

}  // namespace blockguard::detail
