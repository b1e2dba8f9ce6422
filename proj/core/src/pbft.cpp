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

// PBFT at round granularity: pre-prepare, prepare, commit. A silent
// Byzantine leader of a reliable committee is replaced after a fixed timeout.

#include "engines.hpp"

namespace blockguard::detail {
namespace {

class PbftEngine final : public ConsensusEngine {
 public:
  PbftEngine(const Committee& c, std::vector<std::uint8_t> byz, const EngineContext& ctx, Round start)
      : ConsensusEngine(c, std::move(byz), ctx, start),
        quorum_(2 * pbft_faults(size()) + 1),
        attempt_(start),
        has_preprepare_(size(), 0),
        sent_prepare_(size(), 0),
        sent_commit_(size(), 0),
        changed_(size(), 0),
        prepares_(size(), 0),
        commits_(size(), 0),
        prepare_bits_(size(), size()),
        commit_bits_(size(), size()) {}

  void on_round(Round now) override {
    if (done()) return;
    if (view_change_at_ && now == *view_change_at_) {
      ++view_;
      ++view_changes_;
      leader_ = view_ % size();
      attempt_ = now;
      view_change_at_.reset();
      log({now, EventKind::ViewChange, member(leader_), kNoPeer, committee_.id, committee_.txn, view_});
    }
    if (now != attempt_) return;
    if (silent(leader_)) {
      view_change_at_ = now + ctx_.params.view_change_timeout;
      return;
    }
    has_preprepare_[leader_] = 1;
    sent_prepare_[leader_] = 1;
    count_prepare(leader_, leader_);
    broadcast(leader_, MessageKind::PrePrepare, view_);
    progress(leader_, now);
  }

  void receive(const Batch& batch, std::vector<PeerId>& changed) override {
    if (done() || batch.payload.view != view_) return;
    const std::size_t s = index_of(batch.sender);
    if (s == size()) return;
    switch (batch.payload.kind) {
      case MessageKind::PrePrepare:
        if (s != leader_) return;
        for_members(batch, changed, [&](std::size_t r) {
          if (has_preprepare_[r] != 0) return false;
          has_preprepare_[r] = 1;
          count_prepare(r, leader_);  // the pre-prepare stands in for the leader's prepare
          return true;
        });
        break;
      case MessageKind::Prepare:
        for_members(batch, changed, [&](std::size_t r) { return count_prepare(r, s); });
        break;
      case MessageKind::Commit:
        for_members(batch, changed, [&](std::size_t r) {
          if (!commit_bits_.set(r, s)) return false;
          ++commits_[r];
          return true;
        });
        break;
      default:
        break;
    }
  }

  void react(PeerId peer) override {
    const std::size_t r = index_of(peer);
    if (r == size()) return;
    changed_[r] = 0;
    if (done()) return;
    if (has_preprepare_[r] != 0 && sent_prepare_[r] == 0) {
      sent_prepare_[r] = 1;
      count_prepare(r, r);
      broadcast(r, MessageKind::Prepare, view_);
    }
    progress(r, ctx_.network->now());
  }

  EngineState state() const override {
    EngineState st{EngineKind::Pbft, phase(), view_, {}, done()};
    for (std::size_t i = 0; i < size(); ++i) {
      if (confirmed_.size() > i && confirmed_[i] != 0) st.confirmed_by.push_back(member(i));
    }
    return st;
  }

 private:
  // Applies `touch` to each live member receiver; touched members are queued once.
  template <typename Touch>
  void for_members(const Batch& batch, std::vector<PeerId>& changed, Touch&& touch) {
    for (PeerId peer : batch.receivers) {
      const std::size_t r = index_of(peer);
      if (r == size() || silent(r) || !touch(r)) continue;
      if (changed_[r] == 0) {
        changed_[r] = 1;
        changed.push_back(peer);
      }
    }
  }

  bool count_prepare(std::size_t r, std::size_t s) {
    if (!prepare_bits_.set(r, s)) return false;
    ++prepares_[r];
    return true;
  }

  void progress(std::size_t i, Round now) {
    if (has_preprepare_[i] != 0 && sent_commit_[i] == 0 && prepares_[i] >= quorum_) {
      sent_commit_[i] = 1;
      if (commit_bits_.set(i, i)) ++commits_[i];
      broadcast(i, MessageKind::Commit, view_);
    }
    if (sent_commit_[i] != 0 && commits_[i] >= quorum_ && !done()) {
      confirmed_.assign(size(), 0);
      confirmed_[i] = 1;
      confirm(i, now);
      finish(now);
    }
  }

  std::string_view phase() const {
    if (done()) return "confirmed";
    if (view_change_at_) return "view-change";
    for (std::size_t i = 0; i < size(); ++i) {
      if (sent_commit_[i] != 0) return "commit";
    }
    return has_preprepare_[leader_] != 0 ? "prepare" : "pre-prepare";
  }

  std::uint32_t quorum_;
  std::uint32_t view_ = 0;
  std::size_t leader_ = 0;
  Round attempt_;
  std::optional<Round> view_change_at_;
  std::vector<std::uint8_t> has_preprepare_;
  std::vector<std::uint8_t> sent_prepare_;
  std::vector<std::uint8_t> sent_commit_;
  std::vector<std::uint8_t> changed_;
  std::vector<std::uint8_t> confirmed_;
  std::vector<std::uint32_t> prepares_;
  std::vector<std::uint32_t> commits_;
  BitRows prepare_bits_;
  BitRows commit_bits_;
};

}  // namespace

std::unique_ptr<ConsensusEngine> make_pbft(const Committee& c, std::vector<std::uint8_t> byz, const EngineContext& ctx,
                                           Round start) {
  return std::make_unique<PbftEngine>(c, std::move(byz), ctx, start);
}

}  // namespace blockguard::detail
