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

#include "blockguard/metrics.hpp"

namespace blockguard {

std::optional<double> throughput(const MetricsLog& log) {
  if (log.rounds == 0) return std::nullopt;
  std::size_t reliable = 0;
  for (const Transaction& t : log.txns) {
    if (t.status == TxnStatus::Recorded && !t.defeated) ++reliable;
  }
  return static_cast<double>(reliable) / static_cast<double>(log.rounds);
}

std::optional<double> avg_waiting_time(const MetricsLog& log) {
  std::size_t n = 0;
  double sum = 0.0;
  for (const Transaction& t : log.txns) {
    if (!t.confirm_round) continue;
    sum += static_cast<double>(*t.confirm_round - t.gen_round);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

DefeatSummary defeated_ratio(const MetricsLog& log, std::uint32_t levels) {
  DefeatSummary out;
  std::vector<std::size_t> total(levels, 0);
  std::vector<std::size_t> defeated(levels, 0);
  std::size_t outcome = 0;
  std::size_t raw = 0;
  for (const CommitteeRecord& c : log.committees) {
    if (c.outcome_defeated) ++outcome;
    if (c.defeated) ++raw;
    if (c.level >= 1 && c.level <= levels) {
      ++total[c.level - 1];
      if (c.outcome_defeated) ++defeated[c.level - 1];
    }
  }
  const std::size_t n = log.committees.size();
  if (n > 0) {
    out.ratio = static_cast<double>(outcome) / static_cast<double>(n);
    out.raw_ratio = static_cast<double>(raw) / static_cast<double>(n);
  }
  out.per_level.resize(levels);
  for (std::uint32_t i = 0; i < levels; ++i) {
    if (total[i] > 0) out.per_level[i] = static_cast<double>(defeated[i]) / static_cast<double>(total[i]);
  }
  return out;
}

StatusCounts status_counts(const MetricsLog& log) {
  StatusCounts c;
  c.generated = log.txns.size();
  for (const Transaction& t : log.txns) {
    switch (t.status) {
      case TxnStatus::Pending: ++c.pending; break;
      case TxnStatus::Tentative: ++c.tentative; break;
      case TxnStatus::Recorded: ++c.recorded; break;
      case TxnStatus::Discarded: ++c.discarded; break;
    }
  }
  return c;
}

std::size_t backlog(const MetricsLog& log) {
  const StatusCounts c = status_counts(log);
  return c.pending + c.tentative;
}

std::vector<TimelinePoint> rolling_timeline(const MetricsLog& log, Round window) {
  std::vector<TimelinePoint> out;
  if (window == 0 || log.rounds <= window) return out;
  std::vector<std::uint32_t> reliable(log.rounds, 0);
  std::vector<std::uint32_t> confirmed(log.rounds, 0);
  std::vector<double> wait(log.rounds, 0.0);
  for (const Transaction& t : log.txns) {
    if (!t.confirm_round || *t.confirm_round >= log.rounds) continue;
    const Round r = *t.confirm_round;
    ++confirmed[r];
    wait[r] += static_cast<double>(r - t.gen_round);
    if (!t.defeated) ++reliable[r];
  }
  std::uint64_t rel = 0;
  std::uint64_t conf = 0;
  double wsum = 0.0;
  for (Round r = 0; r < log.rounds; ++r) {
    rel += reliable[r];
    conf += confirmed[r];
    wsum += wait[r];
    if (r >= window) {
      rel -= reliable[r - window];
      conf -= confirmed[r - window];
      wsum -= wait[r - window];
      TimelinePoint p;
      p.round = r;
      p.throughput = static_cast<double>(rel) / static_cast<double>(window);
      if (conf > 0) p.wait = wsum / static_cast<double>(conf);
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace blockguard
