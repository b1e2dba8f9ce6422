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

#include "blockguard/event_log.hpp"

#include <ostream>

namespace blockguard {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Generate: return "generate";
    case EventKind::Dispatch: return "dispatch";
    case EventKind::Send: return "send";
    case EventKind::Deliver: return "deliver";
    case EventKind::Stale: return "stale";
    case EventKind::ViewChange: return "view_change";
    case EventKind::Mined: return "mined";
    case EventKind::Restart: return "restart";
    case EventKind::Confirm: return "confirm";
    case EventKind::Complete: return "complete";
    case EventKind::Record: return "record";
    case EventKind::StageBegin: return "stage_begin";
    case EventKind::Shuffle: return "shuffle";
  }
  return "?";
}

void EventLog::write_ndjson(std::ostream& out) const {
  // Hand-rolled: a few million records of fixed shape; a DOM per line is wasteful.
  auto id_or_null = [&out](std::uint32_t v, std::uint32_t none) {
    if (v == none) {
      out << "null";
    } else {
      out << v;
    }
  };
  for (const Event& e : events_) {
    out << "{\"round\":" << e.round << ",\"kind\":\"" << to_string(e.kind) << "\",\"sender\":";
    id_or_null(e.sender, kNoPeer);
    out << ",\"receiver\":";
    id_or_null(e.receiver, kNoPeer);
    out << ",\"committee\":";
    id_or_null(e.committee, kNoCommittee);
    out << ",\"txn\":";
    if (e.txn) {
      out << *e.txn;
    } else {
      out << "null";
    }
    if (e.value) out << ",\"value\":" << *e.value;
    out << "}\n";
  }
}

}  // namespace blockguard
