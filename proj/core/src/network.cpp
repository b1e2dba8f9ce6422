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

#include "blockguard/network.hpp"

#include <algorithm>
#include <cassert>

namespace blockguard {

namespace {

constexpr std::uint32_t kNoHeader = ~std::uint32_t{0};

bool by_receiver_sender(const Envelope& a, const Envelope& b) {
  return a.receiver != b.receiver ? a.receiver < b.receiver : a.sender < b.sender;
}

}  // namespace

Envelope schedule(ChannelState& channels, Envelope env, std::uint32_t max_delay, Rng& rng) {
  if (max_delay < 1) throw ConfigError("maxDelay must be at least 1");
  Round& next_free = channels.next_free(env.sender, env.receiver);
  env.deliver_round = std::max(env.send_round, next_free) + draw_delay(max_delay, rng);
  next_free = env.deliver_round;
  return env;
}

Network::Network(std::size_t peers, std::uint32_t max_delay, Rng delay_rng, EventLog* log)
    : channels_(peers), max_delay_(max_delay), rng_(std::move(delay_rng)), log_(log) {
  if (max_delay < 1) throw ConfigError("maxDelay must be at least 1");
  std::size_t size = 16;
  while (size <= 4 * static_cast<std::size_t>(max_delay)) size <<= 1;
  ring_.resize(size);
  mask_ = size - 1;
}

Round Network::next_delivery(PeerId sender, PeerId receiver) {
  Round& next_free = channels_.next_free(sender, receiver);
  next_free = std::max(now_, next_free) + draw_delay(max_delay_, rng_);
  return next_free;
}

void Network::grow(std::size_t min_span) {
  std::size_t size = ring_.size();
  while (size <= min_span) size <<= 1;
  std::vector<Bucket> next(size);
  for (Bucket& b : ring_) {
    if (b.empty()) continue;
    next[b.round & (size - 1)] = std::move(b);
  }
  ring_ = std::move(next);
  mask_ = size - 1;
}

Network::Bucket& Network::bucket_for(Round round) {
  const std::size_t span = round - now_;
  if (span >= ring_.size()) grow(span);
  Bucket& b = ring_[round & mask_];
  assert(b.empty() || b.round == round);
  b.round = round;
  return b;
}

void Network::log_send(PeerId sender, PeerId receiver, const Message& payload, Round deliver_round) {
  if (log_ != nullptr && log_->messages_enabled()) {
    log_->record({now_, EventKind::Send, sender, receiver, payload.committee, std::nullopt,
                  static_cast<std::int64_t>(deliver_round)});
  }
}

Envelope Network::send(PeerId sender, PeerId receiver, const Message& payload) {
  Envelope env{sender, receiver, payload, now_, next_delivery(sender, receiver)};
  Bucket& b = bucket_for(env.deliver_round);
  b.headers.push_back({sender, payload, now_, static_cast<std::uint32_t>(b.receivers.size()), 1});
  b.receivers.push_back(receiver);
  ++in_flight_;
  ++sent_;
  log_send(sender, receiver, payload, env.deliver_round);
  return env;
}

std::size_t Network::broadcast(PeerId sender, std::span<const PeerId> recipients, const Message& payload) {
  assert(std::is_sorted(recipients.begin(), recipients.end()));
  Round* row = &channels_.next_free(sender, 0);
  draws_.resize(recipients.size());
  Round lo = ~Round{0};
  Round hi = 0;
  for (std::size_t i = 0; i < recipients.size(); ++i) {
    const PeerId receiver = recipients[i];
    if (receiver == sender) continue;
    Round& next_free = row[receiver];
    next_free = std::max(now_, next_free) + draw_delay(max_delay_, rng_);
    draws_[i] = next_free;
    lo = std::min(lo, next_free);
    hi = std::max(hi, next_free);
  }
  if (hi == 0) return 0;

  // Headers are opened in order of first appearance; each one's receivers stay
  // contiguous because only this call appends to the buckets it touches.
  bucket_for(hi);
  header_at_.assign(hi - lo + 1, kNoHeader);
  std::size_t count = 0;
  for (std::size_t i = 0; i < recipients.size(); ++i) {
    const PeerId receiver = recipients[i];
    if (receiver == sender) continue;
    const Round round = draws_[i];
    std::uint32_t& h = header_at_[round - lo];
    Bucket& b = h == kNoHeader ? bucket_for(round) : ring_[round & mask_];
    if (h == kNoHeader) {
      h = static_cast<std::uint32_t>(b.headers.size());
      b.headers.push_back({sender, payload, now_, static_cast<std::uint32_t>(b.receivers.size()), 0});
    }
    if (lo == hi) {
      // Single delivery round: copy the runs on either side of the sender.
      const auto rest = recipients.subspan(i);
      const auto self = std::lower_bound(rest.begin(), rest.end(), sender);
      b.receivers.insert(b.receivers.end(), rest.begin(), self);
      b.receivers.insert(b.receivers.end(), self != rest.end() && *self == sender ? self + 1 : self, rest.end());
      count = b.receivers.size() - b.headers[h].offset;
      b.headers[h].count = static_cast<std::uint32_t>(count);
      break;
    }
    b.receivers.push_back(receiver);
    ++b.headers[h].count;
    ++count;
  }
  if (log_ != nullptr && log_->messages_enabled()) {
    for (std::size_t i = 0; i < recipients.size(); ++i) {
      if (recipients[i] != sender) log_send(sender, recipients[i], payload, draws_[i]);
    }
  }
  in_flight_ += count;
  sent_ += count;
  return count;
}

void Network::take_due() {
  due_.clear();
  Bucket& b = ring_[now_ & mask_];
  if (b.empty()) return;
  assert(b.round == now_);
  std::swap(due_, b);
  in_flight_ -= due_.receivers.size();
}

void Network::expand_due() {
  envelopes_.clear();
  envelopes_.reserve(due_.receivers.size());
  for (const Header& h : due_.headers) {
    for (std::uint32_t i = 0; i < h.count; ++i) {
      envelopes_.push_back({h.sender, due_.receivers[h.offset + i], h.payload, h.send_round, due_.round});
    }
  }
  std::sort(envelopes_.begin(), envelopes_.end(), by_receiver_sender);
#ifndef NDEBUG
  for (std::size_t i = 1; i < envelopes_.size(); ++i) {
    // Chained delays never put two envelopes of one pair in the same round.
    assert(envelopes_[i - 1].receiver != envelopes_[i].receiver || envelopes_[i - 1].sender != envelopes_[i].sender);
  }
#endif
}

std::vector<Envelope> Network::pending() const {
  std::vector<Envelope> out;
  out.reserve(in_flight_);
  for (const Bucket& b : ring_) {
    for (const Header& h : b.headers) {
      for (std::uint32_t i = 0; i < h.count; ++i) {
        out.push_back({h.sender, b.receivers[h.offset + i], h.payload, h.send_round, b.round});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Envelope& a, const Envelope& b) {
    if (a.deliver_round != b.deliver_round) return a.deliver_round < b.deliver_round;
    return by_receiver_sender(a, b);
  });
  return out;
}

}  // namespace blockguard
