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

#include "blockguard/consensus.hpp"

#include <algorithm>

#include "engines.hpp"

namespace blockguard {

ResiliencyThreshold resiliency_threshold(EngineKind kind) {
  return kind == EngineKind::Pbft ? ResiliencyThreshold{1, 3} : ResiliencyThreshold{1, 2};
}

Classification classify_committee(EngineKind kind, std::size_t size, std::size_t byzantine) {
  const ResiliencyThreshold t = resiliency_threshold(kind);
  return byzantine * t.den >= size * t.num ? Classification::Defeated : Classification::Reliable;
}

Classification classify_committee(const Committee& committee) {
  return classify_committee(committee.engine, committee.members.size(), committee.byzantine_count);
}

std::uint32_t MiningModel::draw(Rng& rng) const {
  std::uint32_t x = 0;
  if (success_prob == 0.5 && trials <= 64) {
    x = rng.binomial_half(trials);
  } else {
    for (std::uint32_t i = 0; i < trials; ++i) x += rng.bernoulli(success_prob) ? 1 : 0;
  }
  return std::max(min_rounds, x);
}

ConsensusEngine::ConsensusEngine(Committee committee, std::vector<std::uint8_t> byzantine, EngineContext ctx,
                                 Round start)
    : committee_(std::move(committee)), byzantine_(std::move(byzantine)), ctx_(ctx), start_(start) {
  outcome_defeated_ = committee_.defeated;
  const auto& m = committee_.members;
  slot_.assign(std::max<std::size_t>(ctx_.network->peers(), m.back() + 1), static_cast<std::uint32_t>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) slot_[m[i]] = static_cast<std::uint32_t>(i);
}

void ConsensusEngine::on_message(const Envelope& env) {
  std::vector<PeerId> changed;
  receive(Batch{env.sender, env.payload, env.send_round, env.deliver_round, std::span<const PeerId>(&env.receiver, 1)},
          changed);
  for (PeerId p : changed) react(p);
}

void ConsensusEngine::broadcast(std::size_t from, MessageKind kind, std::uint32_t view) {
  ctx_.network->broadcast(member(from), committee_.members, Message{committee_.id, kind, view});
}

void ConsensusEngine::confirm(std::size_t i, Round now) {
  if (first_confirm_) return;
  first_confirm_ = now;
  first_confirmer_ = member(i);
}

std::unique_ptr<ConsensusEngine> start_consensus(const Committee& committee, std::vector<std::uint8_t> byzantine,
                                                 const EngineContext& ctx, Round start_round) {
  if (committee.members.empty()) throw ConfigError("committee has no members");
  if (byzantine.size() != committee.members.size()) throw ConfigError("honesty vector does not match committee");
  if (!std::is_sorted(committee.members.begin(), committee.members.end()) ||
      std::adjacent_find(committee.members.begin(), committee.members.end()) != committee.members.end()) {
    throw ConfigError("committee members must be unique and ascending");
  }
  if (ctx.network == nullptr || ctx.mining_rng == nullptr) throw ConfigError("engine context is incomplete");
  switch (committee.engine) {
    case EngineKind::Pbft: return detail::make_pbft(committee, std::move(byzantine), ctx, start_round);
    case EngineKind::Sbft: return detail::make_sbft(committee, std::move(byzantine), ctx, start_round);
    case EngineKind::Pow: return detail::make_pow(committee, std::move(byzantine), ctx, start_round);
  }
  throw ConfigError("unknown engine");
}

}  // namespace blockguard
