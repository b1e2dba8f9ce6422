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

// Synchronous BFT. Every phase lasts exactly maxDelay rounds because members
// wait out the delay bound before concluding a message is absent:
//   a       leader broadcasts the proposal
//   a+d     holders of the proposal broadcast commit
//   a+2d    members with f+1 commits confirm and broadcast notify
//   a+3d    done if every participant confirmed, else view change
// Latency therefore depends only on maxDelay and leader honesty.

#include "engines.hpp"

namespace blockguard::detail {
namespace {

class SbftEngine final : public ConsensusEngine {
 public:
  SbftEngine(const Committee& c, std::vector<std::uint8_t> byz, const EngineContext& ctx, Round start)
      : ConsensusEngine(c, std::move(byz), ctx, start),
        quorum_(sbft_faults(size()) + 1),
        d_(ctx.params.max_delay),
        attempt_(start),
        has_proposal_(size(), 0),
        committed_(size(), 0),
        confirmed_(size(), 0),
        commits_(size(), 0),
        commit_bits_(size(), size()) {}

  void on_round(Round now) override {
    if (done()) return;
    if (now == attempt_ + 3 * d_) {
      if (all_confirmed()) {
        finish(now);
        return;
      }
      ++view_;
      ++view_changes_;
      leader_ = view_ % size();
      attempt_ = now;
      std::fill(has_proposal_.begin(), has_proposal_.end(), 0);
      std::fill(committed_.begin(), committed_.end(), 0);
      std::fill(confirmed_.begin(), confirmed_.end(), 0);
      std::fill(commits_.begin(), commits_.end(), 0);
      commit_bits_.clear();
      log({now, EventKind::ViewChange, member(leader_), kNoPeer, committee_.id, committee_.txn, view_});
    }
    if (now == attempt_) {
      if (!silent(leader_)) {
        has_proposal_[leader_] = 1;
        broadcast(leader_, MessageKind::Proposal, view_);
      }
    } else if (now == attempt_ + d_) {
      for (std::size_t i = 0; i < size(); ++i) {
        if (silent(i) || has_proposal_[i] == 0) continue;
        committed_[i] = 1;
        if (commit_bits_.set(i, i)) ++commits_[i];
        broadcast(i, MessageKind::SbftCommit, view_);
      }
    } else if (now == attempt_ + 2 * d_) {
      for (std::size_t i = 0; i < size(); ++i) {
        if (silent(i) || commits_[i] < quorum_) continue;
        confirmed_[i] = 1;
        confirm(i, now);
        broadcast(i, MessageKind::Notify, view_);
      }
    }
  }

  // Members act on timers only, so receiving never asks for a reaction.
  void receive(const Batch& batch, std::vector<PeerId>&) override {
    if (done() || batch.payload.view != view_) return;
    const std::size_t s = index_of(batch.sender);
    if (s == size()) return;
    for (PeerId peer : batch.receivers) {
      const std::size_t r = index_of(peer);
      if (r == size() || silent(r)) continue;
      if (batch.payload.kind == MessageKind::Proposal) {
        if (s == leader_) has_proposal_[r] = 1;
      } else if (batch.payload.kind == MessageKind::SbftCommit) {
        if (commit_bits_.set(r, s)) ++commits_[r];
      }
    }
  }

  EngineState state() const override {
    EngineState st{EngineKind::Sbft, phase(), view_, {}, done()};
    for (std::size_t i = 0; i < size(); ++i) {
      if (confirmed_[i] != 0) st.confirmed_by.push_back(member(i));
    }
    return st;
  }

 private:
  bool all_confirmed() const {
    for (std::size_t i = 0; i < size(); ++i) {
      if (!silent(i) && confirmed_[i] == 0) return false;
    }
    return true;
  }

  std::string_view phase() const {
    if (done()) return "confirmed";
    const Round now = ctx_.network->now();
    if (now < attempt_ + d_) return "propose";
    if (now < attempt_ + 2 * d_) return "commit";
    if (now < attempt_ + 3 * d_) return "notify";
    return "view-change";
  }

  std::uint32_t quorum_;
  std::uint32_t d_;
  std::uint32_t view_ = 0;
  std::size_t leader_ = 0;
  Round attempt_;
  std::vector<std::uint8_t> has_proposal_;
  std::vector<std::uint8_t> committed_;
  std::vector<std::uint8_t> confirmed_;
  std::vector<std::uint32_t> commits_;
  BitRows commit_bits_;
};

}  // namespace

std::unique_ptr<ConsensusEngine> make_sbft(const Committee& c, std::vector<std::uint8_t> byz, const EngineContext& ctx,
                                           Round start) {
  return std::make_unique<SbftEngine>(c, std::move(byz), ctx, start);
}

}  // namespace blockguard::detail
