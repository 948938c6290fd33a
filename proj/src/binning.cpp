#include "pidpoker/pipeline.hpp"

namespace pidpoker::pipeline {

WagerState bin_wager(Cents amount, Cents max_small) {
  if (amount < 0) {
    throw PipelineError(PipelineErrc::NegativeAmount,
                        "negative wager " + std::to_string(amount));
  }
  if (amount == 0) return WagerState::NoWager;
  return amount <= max_small ? WagerState::Small : WagerState::Large;
}

const LevelCutoffs& BinningSpec::at(Cents level) const {
  const auto it = levels.find(level);
  if (it == levels.end()) {
    throw PipelineError(PipelineErrc::MissingCutoff,
                        "no cutoffs for level " + std::to_string(level));
  }
  return it->second;
}

StrengthState bin_strength(const std::optional<cards::HandScore>& score,
                           const BinningSpec& spec, Cents level) {
  if (!score) return StrengthState::NotObserved;
  const LevelCutoffs& cut = spec.at(level);
  const auto& cutoff = score->scale == cards::Scale::Preflop ? cut.max_weak_preflop
                                                              : cut.max_weak_showdown;
  if (!cutoff) {
    throw PipelineError(PipelineErrc::MissingCutoff,
                        "no strength cutoff on this scale for level " + std::to_string(level));
  }
  return score->ordinal <= *cutoff ? StrengthState::Weak : StrengthState::Strong;
}

BinningSpec fit_bins(const std::map<Cents, BinSamples>& samples) {
  BinningSpec spec;
  for (const auto& [level, s] : samples) {
    LevelCutoffs cut;
    if (!s.wagers.empty()) cut.max_small_wager = equal_frequency_cutoff(s.wagers);
    if (!s.preflop_scores.empty()) cut.max_weak_preflop = equal_frequency_cutoff(s.preflop_scores);
    if (!s.showdown_scores.empty()) {
      cut.max_weak_showdown = equal_frequency_cutoff(s.showdown_scores);
    }
    if (!cut.max_small_wager && !cut.max_weak_preflop && !cut.max_weak_showdown) {
      throw PipelineError(PipelineErrc::InsufficientData,
                          "no wagers or scores at level " + std::to_string(level));
    }
    spec.levels.emplace(level, cut);
  }
  return spec;
}

}  // namespace pidpoker::pipeline
