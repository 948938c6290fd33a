#include <algorithm>

#include "pidpoker/pipeline.hpp"

namespace pidpoker::pipeline {

const char* to_string(PipelineErrc code) {
  switch (code) {
    case PipelineErrc::NegativeAmount: return "NegativeAmount";
    case PipelineErrc::MissingCutoff: return "MissingCutoff";
    case PipelineErrc::InsufficientData: return "InsufficientData";
    case PipelineErrc::NonHeadsUpHand: return "NonHeadsUpHand";
    case PipelineErrc::EmptyInput: return "EmptyInput";
    case PipelineErrc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

const char* to_string(SkillClass c) {
  switch (c) {
    case SkillClass::Shark: return "shark";
    case SkillClass::Fish: return "fish";
    case SkillClass::Other: return "other";
  }
  return "unknown";
}

const char* to_string(WagerState w) {
  switch (w) {
    case WagerState::NoWager: return "no_wager";
    case WagerState::Small: return "small";
    case WagerState::Large: return "large";
  }
  return "unknown";
}

const char* to_string(StrengthState p) {
  switch (p) {
    case StrengthState::NotObserved: return "not_observed";
    case StrengthState::Weak: return "weak";
    case StrengthState::Strong: return "strong";
  }
  return "unknown";
}

const char* to_string(Variant v) {
  switch (v) {
    case Variant::Main: return "main";
    case Variant::PreflopOnly: return "preflop";
    case Variant::ShowdownOnly: return "showdown";
    case Variant::BothPositions: return "both-positions";
  }
  return "unknown";
}

const char* to_string(ResampleUnit u) {
  return u == ResampleUnit::Hands ? "hands" : "rounds";
}

std::optional<SkillClass> skill_class_from_string(std::string_view s) {
  for (const auto c : {SkillClass::Shark, SkillClass::Fish, SkillClass::Other})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

std::optional<Variant> variant_from_string(std::string_view s) {
  for (const auto v : {Variant::Main, Variant::PreflopOnly, Variant::ShowdownOnly,
                       Variant::BothPositions})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

std::optional<ResampleUnit> resample_unit_from_string(std::string_view s) {
  for (const auto u : {ResampleUnit::Hands, ResampleUnit::Rounds})
    if (s == to_string(u)) return u;
  return std::nullopt;
}

std::strong_ordering compare_means(const LedgerEntry& a, const LedgerEntry& b) {
  // net_a / hands_a vs net_b / hands_b with positive denominators.
  const __int128 lhs = static_cast<__int128>(a.net) * b.hands;
  const __int128 rhs = static_cast<__int128>(b.net) * a.hands;
  return lhs <=> rhs;
}

PlayerLedger ledger_build(std::span<const HandRecord> hands) {
  PlayerLedger ledger;
  for (const auto& h : hands) {
    auto& level = ledger[h.blind];
    for (const auto& seat : h.seats) {
      auto& e = level[seat.player];
      e.hands += 1;
      e.net += seat.won - h.contributed(seat.player);
    }
  }
  return ledger;
}

ClassMap classify(const PlayerLedger& ledger, Cents level) {
  ClassMap out;
  const auto it = ledger.find(level);
  if (it == ledger.end()) return out;

  const LedgerEntry zero{1, 0};
  std::vector<std::pair<std::string, LedgerEntry>> losers;
  for (const auto& [player, entry] : it->second) {
    if (compare_means(entry, zero) > 0) {
      out[player] = SkillClass::Shark;
    } else {
      losers.emplace_back(player, entry);
    }
  }
  std::stable_sort(losers.begin(), losers.end(), [](const auto& a, const auto& b) {
    return compare_means(a.second, b.second) < 0;
  });
  const std::size_t k = std::max<std::size_t>(1, losers.size() / 2);
  for (std::size_t i = 0; i < losers.size(); ++i) {
    bool fish = i < k;
    if (fish && k < losers.size() && compare_means(losers[i].second, losers[k].second) == 0) {
      fish = false;
    }
    out[losers[i].first] = fish ? SkillClass::Fish : SkillClass::Other;
  }
  return out;
}

}  // namespace pidpoker::pipeline
