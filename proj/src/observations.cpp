#include <algorithm>

#include "pidpoker/pipeline.hpp"

namespace pidpoker::pipeline {

Cents street_wager(const hh::StreetRecord& street, std::string_view player) {
  Cents total = 0;
  for (const auto& a : street.actions) {
    if (a.player != player) continue;
    if (a.kind == hh::ActionKind::Call || a.kind == hh::ActionKind::Bet ||
        a.kind == hh::ActionKind::Raise) {
      total += a.amount;
    }
  }
  return total;
}

namespace {

// Players in acting order: the first to appear in the action log is first.
std::array<std::string, 2> acting_order(const HandRecord& h) {
  std::array<std::string, 2> order{h.seats[0].player, h.seats[1].player};
  for (const auto& st : h.streets) {
    if (st.actions.empty()) continue;
    if (st.actions.front().player == order[1]) std::swap(order[0], order[1]);
    break;
  }
  return order;
}

void rounds_for_hand(const HandRecord& h, std::size_t index, Variant variant,
                     std::vector<RoundFacts>& out) {
  if (h.seats.size() != 2) {
    throw PipelineError(PipelineErrc::NonHeadsUpHand,
                        "hand " + h.hand_id + " has " + std::to_string(h.seats.size()) + " seats");
  }
  const auto order = acting_order(h);
  const std::size_t hero_count = variant == Variant::BothPositions ? 2 : 1;
  for (std::size_t k = 0; k < hero_count; ++k) {
    // k == 0 is the second, responding player.
    const std::string& hero = order[1 - k];
    const std::string& villain = order[k];
    const hh::Reveal* reveal = h.reveal_of(hero);
    for (const auto& st : h.streets) {
      if (variant == Variant::PreflopOnly && st.name != hh::Street::Preflop) break;
      RoundFacts f;
      f.hand_index = index;
      f.hand_id = h.hand_id;
      f.hero = hero;
      f.hero_position = k == 0 ? Position::Second : Position::First;
      f.level = h.blind;
      f.street = st.name;
      f.hero_wager = street_wager(st, hero);
      f.villain_wager = street_wager(st, villain);
      if (reveal) f.hero_score = cards::score_hand(reveal->cards, st.board);
      out.push_back(std::move(f));
    }
  }
}

}  // namespace

std::vector<RoundFacts> extract_rounds(std::span<const HandRecord> hands, Variant variant) {
  std::vector<RoundFacts> out;
  for (std::size_t i = 0; i < hands.size(); ++i) rounds_for_hand(hands[i], i, variant, out);
  return out;
}

std::map<Cents, BinSamples> collect_bin_samples(std::span<const RoundFacts> rounds) {
  std::map<Cents, BinSamples> samples;
  for (const auto& r : rounds) {
    if (r.hero_wager > 0) samples[r.level].wagers.push_back(r.hero_wager);
    if (r.villain_wager > 0) samples[r.level].wagers.push_back(r.villain_wager);
    if (r.hero_score) {
      auto& s = samples[r.level];
      (r.hero_score->scale == cards::Scale::Preflop ? s.preflop_scores : s.showdown_scores)
          .push_back(r.hero_score->ordinal);
    }
  }
  return samples;
}

std::vector<RoundObservation> bin_rounds(std::span<const RoundFacts> rounds,
                                         const BinningSpec& spec,
                                         const std::map<Cents, ClassMap>& classes,
                                         Variant variant) {
  std::vector<RoundObservation> out;
  out.reserve(rounds.size());
  for (const auto& r : rounds) {
    RoundObservation o;
    o.w1 = bin_wager(r.hero_wager, r.level);
    o.w2 = bin_wager(r.villain_wager, r.level);
    o.p1 = bin_strength(r.hero_score, spec, r.level);
    if (variant == Variant::ShowdownOnly && o.p1 == StrengthState::NotObserved) continue;
    o.level = r.level;
    o.street = r.street;
    o.hero_position = r.hero_position;
    if (const auto lv = classes.find(r.level); lv != classes.end()) {
      if (const auto c = lv->second.find(r.hero); c != lv->second.end()) o.hero_skill = c->second;
    }
    o.hand_id = r.hand_id;
    o.hand_index = r.hand_index;
    out.push_back(std::move(o));
  }
  return out;
}

Extraction extract_observations(std::span<const HandRecord> hands, const AnalysisConfig& config) {
  std::map<Cents, ClassMap> classes;
  if (config.class_overrides.empty()) {
    const PlayerLedger ledger = ledger_build(hands);
    for (const auto level : config.levels) classes[level] = classify(ledger, level);
  } else {
    for (const auto level : config.levels) classes[level] = config.class_overrides;
  }

  Extraction ex;
  std::vector<RoundFacts> rounds;
  for (std::size_t i = 0; i < hands.size(); ++i) {
    const auto& h = hands[i];
    const bool wanted = std::find(config.levels.begin(), config.levels.end(), h.blind) !=
                        config.levels.end();
    if (!wanted || h.seats.size() != 2) {
      ++ex.hands_skipped;
      continue;
    }
    ++ex.hands_used;
    rounds_for_hand(h, i, config.variant, rounds);
  }
  ex.bins = config.fixed_bins ? *config.fixed_bins : fit_bins(collect_bin_samples(rounds));
  ex.observations = bin_rounds(rounds, ex.bins, classes, config.variant);
  return ex;
}

info::JointDistribution3 build_joint(std::span<const RoundObservation> observations) {
  if (observations.empty()) {
    throw PipelineError(PipelineErrc::EmptyInput, "no observations");
  }
  std::array<std::uint64_t, 27> counts{};
  for (const auto& o : observations) ++counts[o.cell()];
  return info::JointDistribution3::from_counts(kStates, kStates, kStates, counts);
}

}  // namespace pidpoker::pipeline
