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
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "blockguard/types.hpp"

namespace blockguard {

enum class EventKind : std::uint8_t {
  Generate,    // sender = generating peer
  Dispatch,    // committee formed for txn
  Send,        // message scheduled (message detail only)
  Deliver,     // message handled by its active committee (message detail only)
  Stale,       // message arrived after its committee finished (message detail only)
  ViewChange,  // value = new view
  Mined,       // sender = winning miner, value = 1 honest / 0 Byzantine
  Restart,     // PoW re-mining after a Byzantine win
  Confirm,     // sender = first confirming peer
  Complete,    // committee released
  Record,      // block appended, value = ledger index (Composite) or stage (Dynamic)
  StageBegin,  // Dynamic recording stage opened, value = stage
  Shuffle,     // value = number of swapped pairs
};

std::string_view to_string(EventKind kind);

struct Event {
  Round round = 0;
  EventKind kind = EventKind::Generate;
  PeerId sender = kNoPeer;
  PeerId receiver = kNoPeer;
  CommitteeId committee = kNoCommittee;
  std::optional<TxnId> txn;
  std::optional<std::int64_t> value;
};

enum class EventDetail : std::uint8_t {
  Off,       // nothing recorded
  Protocol,  // everything except per-message events
  Messages,  // everything
};

/// Append-only, in-memory record of a computation. Serializes to
/// newline-delimited JSON.
class EventLog {
 public:
  explicit EventLog(EventDetail detail = EventDetail::Protocol) : detail_(detail) {}

  EventDetail detail() const { return detail_; }
  bool protocol_enabled() const { return detail_ != EventDetail::Off; }
  bool messages_enabled() const { return detail_ == EventDetail::Messages; }

  void record(const Event& e) {
    if (protocol_enabled()) events_.push_back(e);
  }

  const std::vector<Event>& events() const { return events_; }

  void write_ndjson(std::ostream& out) const;

 private:
  EventDetail detail_;
  std::vector<Event> events_;
};

}  // namespace blockguard
