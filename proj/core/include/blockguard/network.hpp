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
#include <span>
#include <utility>
#include <vector>

#include "blockguard/event_log.hpp"
#include "blockguard/rng.hpp"
#include "blockguard/types.hpp"

namespace blockguard {

enum class MessageKind : std::uint8_t {
  PrePrepare,
  Prepare,
  Commit,
  Proposal,
  SbftCommit,
  Notify,
  Opaque,
};

/// Consensus payload. Content is abstract; authenticity is assumed.
struct Message {
  CommitteeId committee = kNoCommittee;
  MessageKind kind = MessageKind::Opaque;
  std::uint32_t view = 0;
};

struct Envelope {
  PeerId sender = 0;
  PeerId receiver = 0;
  Message payload;
  Round send_round = 0;
  Round deliver_round = 0;
};

/// Per ordered (sender, receiver) pair: the round of the latest scheduled
/// delivery. Delays on one pair are chained, so at most one envelope per pair
/// lands in any round and FIFO order holds.
class ChannelState {
 public:
  explicit ChannelState(std::size_t peers) : peers_(peers), next_free_(peers * peers, 0) {}

  std::size_t peers() const { return peers_; }
  Round next_free(PeerId sender, PeerId receiver) const { return next_free_[index(sender, receiver)]; }
  Round& next_free(PeerId sender, PeerId receiver) { return next_free_[index(sender, receiver)]; }

 private:
  std::size_t index(PeerId sender, PeerId receiver) const {
    return static_cast<std::size_t>(sender) * peers_ + receiver;
  }

  std::size_t peers_;
  std::vector<Round> next_free_;
};

/// Uniform delay in [1, max_delay]. No randomness is consumed when max_delay == 1.
inline Round draw_delay(std::uint32_t max_delay, Rng& rng) {
  return max_delay == 1 ? 1 : static_cast<Round>(1 + rng.below(max_delay));
}

/// Fills env.deliver_round = max(send_round, next_free) + U, U ~ Uniform{1..max_delay},
/// and advances the channel. Throws ConfigError if max_delay < 1.
Envelope schedule(ChannelState& channels, Envelope env, std::uint32_t max_delay, Rng& rng);

/// Envelopes of one broadcast that share a delivery round. Receivers are
/// ascending.
struct Batch {
  PeerId sender = 0;
  Message payload;
  Round send_round = 0;
  Round deliver_round = 0;
  std::span<const PeerId> receivers;
};

/// Round-based message transport with the chained uniform delay model.
///
/// A broadcast is stored as one record per distinct delivery round rather
/// than one envelope per recipient; delivery can be consumed per envelope
/// (deliver) or per record (deliver_batches).
class Network {
 public:
  Network(std::size_t peers, std::uint32_t max_delay, Rng delay_rng, EventLog* log = nullptr);

  Round now() const { return now_; }
  std::uint32_t max_delay() const { return max_delay_; }
  std::size_t peers() const { return channels_.peers(); }
  const ChannelState& channels() const { return channels_; }

  /// Schedules one envelope sent in the current round.
  Envelope send(PeerId sender, PeerId receiver, const Message& payload);

  /// One independently delayed envelope per recipient other than the sender.
  /// Recipients must be ascending. Returns the number of envelopes scheduled.
  std::size_t broadcast(PeerId sender, std::span<const PeerId> recipients, const Message& payload);

  /// Hands every envelope due this round to `handler`, ordered by receiver id
  /// then sender id. Handlers may send; new envelopes land in later rounds.
  template <typename Handler>
  std::size_t deliver(Handler&& handler) {
    take_due();
    expand_due();
    for (const Envelope& env : envelopes_) handler(env);
    delivered_ += envelopes_.size();
    return envelopes_.size();
  }

  /// Hands every record due this round to `handler` in send order. Handlers
  /// must not send. Returns the number of envelopes delivered.
  template <typename Handler>
  std::size_t deliver_batches(Handler&& handler) {
    take_due();
    std::size_t n = 0;
    for (const Header& h : due_.headers) {
      handler(Batch{h.sender, h.payload, h.send_round, due_.round,
                    std::span<const PeerId>(due_.receivers.data() + h.offset, h.count)});
      n += h.count;
    }
    delivered_ += n;
    return n;
  }

  /// Moves to the next round.
  void advance() { ++now_; }

  /// deliver + advance: one engine step.
  template <typename Handler>
  std::size_t step(Handler&& handler) {
    const std::size_t n = deliver(std::forward<Handler>(handler));
    advance();
    return n;
  }

  std::size_t in_flight() const { return in_flight_; }
  std::uint64_t sent_total() const { return sent_; }
  std::uint64_t delivered_total() const { return delivered_; }

  /// Every envelope not yet delivered, in (deliver_round, receiver, sender) order.
  std::vector<Envelope> pending() const;

 private:
  struct Header {
    PeerId sender;
    Message payload;
    Round send_round;
    std::uint32_t offset;
    std::uint32_t count;
  };
  struct Bucket {
    Round round = 0;
    std::vector<Header> headers;
    std::vector<PeerId> receivers;
    void clear() {
      headers.clear();
      receivers.clear();
    }
    bool empty() const { return headers.empty(); }
  };
  Round next_delivery(PeerId sender, PeerId receiver);
  Bucket& bucket_for(Round round);
  void grow(std::size_t min_span);
  void take_due();
  void expand_due();
  void log_send(PeerId sender, PeerId receiver, const Message& payload, Round deliver_round);

  ChannelState channels_;
  std::uint32_t max_delay_;
  Rng rng_;
  EventLog* log_;
  Round now_ = 0;

  // Calendar ring: slot (round & mask) holds records due in that round.
  std::vector<Bucket> ring_;
  std::size_t mask_ = 0;
  std::size_t in_flight_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t delivered_ = 0;

  Bucket due_;
  std::vector<Envelope> envelopes_;
  // Broadcast scratch: drawn delivery rounds, and header index per round offset.
  std::vector<Round> draws_;
  std::vector<std::uint32_t> header_at_;
};

}  // namespace blockguard
