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

// Proof of work with sampled mining durations. Counters run from the round
// after dispatch; a Byzantine first miner in a reliable committee forces a
// redraw.

#include <algorithm>

#include "engines.hpp"

namespace blockguard::detail {
namespace {

class PowEngine final : public ConsensusEngine {
 public:
  PowEngine(const Committee& c, std::vector<std::uint8_t> byz, const EngineContext& ctx, Round start)
      : ConsensusEngine(c, std::move(byz), ctx, start) {
    draw(start - 1);
  }

  void on_round(Round now) override {
    if (done() || now != mined_at_) return;
    const bool byzantine_winner = byzantine_[winner_] != 0;
    log({now, EventKind::Mined, member(winner_), kNoPeer, committee_.id, committee_.txn, byzantine_winner ? 0 : 1});
    if (byzantine_winner && !committee_.defeated) {
      ++restarts_;
      log({now, EventKind::Restart, member(winner_), kNoPeer, committee_.id, committee_.txn, restarts_});
      draw(now);
      return;
    }
    outcome_defeated_ = byzantine_winner;
    confirm(winner_, now);
    finish(now);
  }

  void receive(const Batch&, std::vector<PeerId>&) override {}

  EngineState state() const override {
    EngineState st{EngineKind::Pow, done() ? "mined" : "mining", 0, {}, done()};
    if (done()) st.confirmed_by.push_back(member(winner_));
    return st;
  }

  Round mined_at() const { return mined_at_; }

 private:
  // Counters start decrementing the round after `base`.
  void draw(Round base) {
    const MiningModel& model = ctx_.params.mining;
    Rng& rng = *ctx_.mining_rng;
    if (model.granularity == MiningGranularity::Committee) {
      mined_at_ = base + model.draw(rng);
      winner_ = static_cast<std::size_t>(rng.below(size()));
      return;
    }
    std::uint32_t best = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      const std::uint32_t d = model.draw(rng);
      if (i == 0 || d < best) {
        best = d;
        winner_ = i;
      }
    }
    mined_at_ = base + best;
  }

  Round mined_at_ = 0;
  std::size_t winner_ = 0;
};

}  // namespace

std::unique_ptr<ConsensusEngine> make_pow(const Committee& c, std::vector<std::uint8_t> byz, const EngineContext& ctx,
                                          Round start) {
  return std::make_unique<PowEngine>(c, std::move(byz), ctx, start);
}

}  // namespace blockguard::detail
