#pragma once

// From parsed hands to per-level, per-skill-class decompositions of the
// hero's wager W1 given her hand strength P1 and the villain's wager W2.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pidpoker/handeval.hpp"
#include "pidpoker/handparse.hpp"
#include "pidpoker/infodecomp.hpp"

namespace pidpoker::pipeline {

using hh::Cents;
using hh::HandRecord;

enum class PipelineErrc {
  NegativeAmount,
  MissingCutoff,
  InsufficientData,
  NonHeadsUpHand,
  EmptyInput,
  InvalidConfig,
};
const char* to_string(PipelineErrc code);

class PipelineError : public std::runtime_error {
 public:
  PipelineError(PipelineErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  PipelineErrc code() const noexcept { return code_; }

 private:
  PipelineErrc code_;
};

enum class SkillClass : std::uint8_t { Shark, Fish, Other };
enum class WagerState : std::uint8_t { NoWager = 0, Small = 1, Large = 2 };
enum class StrengthState : std::uint8_t { NotObserved = 0, Weak = 1, Strong = 2 };
enum class Position : std::uint8_t { First, Second };
enum class Variant : std::uint8_t { Main, PreflopOnly, ShowdownOnly, BothPositions };
enum class ResampleUnit : std::uint8_t { Hands, Rounds };

const char* to_string(SkillClass c);
const char* to_string(WagerState w);
const char* to_string(StrengthState p);
const char* to_string(Variant v);
const char* to_string(ResampleUnit u);
std::optional<SkillClass> skill_class_from_string(std::string_view s);
std::optional<Variant> variant_from_string(std::string_view s);
std::optional<ResampleUnit> resample_unit_from_string(std::string_view s);

inline constexpr int kStates = 3;

// The seven cash-game big blinds analyzed by default.
inline const std::vector<Cents> kDefaultLevels = {25, 50, 100, 200, 400, 600, 1000};

// --- ledger and skill classes ---------------------------------------------

struct LedgerEntry {
  std::int64_t hands = 0;
  Cents net = 0;

  double mean() const { return hands ? static_cast<double>(net) / hands : 0.0; }
  bool operator==(const LedgerEntry&) const = default;
};

// Exact comparison of two means as rationals.
std::strong_ordering compare_means(const LedgerEntry& a, const LedgerEntry& b);

// level -> player -> entry
using PlayerLedger = std::map<Cents, std::map<std::string, LedgerEntry>>;

PlayerLedger ledger_build(std::span<const HandRecord> hands);

using ClassMap = std::map<std::string, SkillClass>;

// Shark iff mean > 0. Unprofitable players sorted ascending: the worst half
// (at least one) are Fish, except players tied with the first one outside
// that half, who are Other along with the rest.
ClassMap classify(const PlayerLedger& ledger, Cents level);

// --- binning ---------------------------------------------------------------

// amount == 0 is a fold or check.
WagerState bin_wager(Cents amount, Cents max_small);

struct LevelCutoffs {
  // Fitted equal-frequency cutoff on nonzero wagers; reported for comparison
  // with the level, binning itself always uses the level.
  std::optional<Cents> max_small_wager;
  std::optional<std::uint32_t> max_weak_preflop;
  std::optional<std::uint32_t> max_weak_showdown;

  bool operator==(const LevelCutoffs&) const = default;
};

struct BinningSpec {
  std::map<Cents, LevelCutoffs> levels;

  const LevelCutoffs& at(Cents level) const;
  bool operator==(const BinningSpec&) const = default;
};

StrengthState bin_strength(const std::optional<cards::HandScore>& score,
                           const BinningSpec& spec, Cents level);

// Cutoff c among {median value, next lower distinct value} that
// minimizes |#(v <= c) - #(v > c)|; ties go to the median value.
// Throws InsufficientData on empty input.
template <typename T>
T equal_frequency_cutoff(std::vector<T> values) {
  if (values.empty()) {
    throw PipelineError(PipelineErrc::InsufficientData, "no values to bin");
  }
  std::sort(values.begin(), values.end());
  const auto n = static_cast<std::int64_t>(values.size());
  const T median = values[(values.size() - 1) / 2];
  auto imbalance = [&](T c) {
    const auto at_or_below =
        std::upper_bound(values.begin(), values.end(), c) - values.begin();
    const std::int64_t d = 2 * at_or_below - n;
    return d < 0 ? -d : d;
  };
  const auto lower = std::lower_bound(values.begin(), values.end(), median);
  if (lower == values.begin()) return median;
  const T below = *(lower - 1);
  return imbalance(below) < imbalance(median) ? below : median;
}

struct BinSamples {
  std::vector<Cents> wagers;  // nonzero only
  std::vector<std::uint32_t> preflop_scores;
  std::vector<std::uint32_t> showdown_scores;
};

BinningSpec fit_bins(const std::map<Cents, BinSamples>& samples);

// --- observations ----------------------------------------------------------

// Unbinned facts for one hero on one street.
struct RoundFacts {
  std::size_t hand_index = 0;
  std::string hand_id;
  std::string hero;
  Position hero_position = Position::Second;
  Cents level = 0;
  hh::Street street = hh::Street::Preflop;
  Cents hero_wager = 0;
  Cents villain_wager = 0;
  std::optional<cards::HandScore> hero_score;
};

struct RoundObservation {
  WagerState w1 = WagerState::NoWager;
  StrengthState p1 = StrengthState::NotObserved;
  WagerState w2 = WagerState::NoWager;
  Cents level = 0;
  hh::Street street = hh::Street::Preflop;
  Position hero_position = Position::Second;
  SkillClass hero_skill = SkillClass::Other;
  std::string hand_id;
  std::size_t hand_index = 0;

  int cell() const {
    return static_cast<int>(w1) * 9 + static_cast<int>(p1) * 3 + static_cast<int>(w2);
  }
};

// Chips the player put in voluntarily on the street (blinds excluded).
Cents street_wager(const hh::StreetRecord& street, std::string_view player);

// One entry per street present, per hero allowed by the variant. The
// ShowdownOnly filter is applied after binning. Throws NonHeadsUpHand.
std::vector<RoundFacts> extract_rounds(std::span<const HandRecord> hands, Variant variant);

std::map<Cents, BinSamples> collect_bin_samples(std::span<const RoundFacts> rounds);

// classes: level -> player -> class. Players without a class are Other.
std::vector<RoundObservation> bin_rounds(std::span<const RoundFacts> rounds,
                                         const BinningSpec& spec,
                                         const std::map<Cents, ClassMap>& classes,
                                         Variant variant);

struct AnalysisConfig {
  Variant variant = Variant::Main;
  std::size_t resamples = 500;
  std::uint64_t seed = 20240611;
  std::vector<Cents> levels = kDefaultLevels;
  ResampleUnit unit = ResampleUnit::Hands;
  std::optional<BinningSpec> fixed_bins;
  // When non-empty, replaces ledger-based classification at every level.
  ClassMap class_overrides;
  bool parallel = true;
};

struct Extraction {
  BinningSpec bins;
  std::vector<RoundObservation> observations;
  std::size_t hands_used = 0;
  std::size_t hands_skipped = 0;  // not heads-up or not at a configured level
};

// Ledger, classification, binning and observation extraction in one step.
Extraction extract_observations(std::span<const HandRecord> hands, const AnalysisConfig& config);

info::JointDistribution3 build_joint(std::span<const RoundObservation> observations);

// --- bootstrap -------------------------------------------------------------

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

using Statistic = std::function<double(const info::JointDistribution3&)>;
using MultiStatistic = std::function<std::vector<double>(const info::JointDistribution3&)>;

// Percentile 95% interval. Resample statistics that throw or are not finite
// are dropped; an interval is NaN when fewer than two remain.
Interval bootstrap_ci(std::span<const RoundObservation> observations, const Statistic& statistic,
                      std::size_t resamples, std::uint64_t seed,
                      ResampleUnit unit = ResampleUnit::Hands);

// One resample pass shared by several statistics. OpenMP over resamples,
// each with its own derived seed.
std::vector<Interval> bootstrap_many(std::span<const RoundObservation> observations,
                                     const MultiStatistic& statistic, std::size_t width,
                                     std::size_t resamples, std::uint64_t seed,
                                     ResampleUnit unit = ResampleUnit::Hands);
std::vector<Interval> bootstrap_many_serial(std::span<const RoundObservation> observations,
                                            const MultiStatistic& statistic, std::size_t width,
                                            std::size_t resamples, std::uint64_t seed,
                                            ResampleUnit unit = ResampleUnit::Hands);


// --- report ----------------------------------------------------------------

struct Estimate {
  double value = 0.0;
  double low = 0.0;   // percentile interval widened to include value
  double high = 0.0;
};

struct SpecificReport {
  WagerState state = WagerState::NoWager;
  Estimate weight, total, redundancy, unique_p1, unique_w2, synergy;
};

struct CellReport {
  Cents level = 0;
  SkillClass skill = SkillClass::Shark;
  std::size_t observations = 0;
  std::size_t hands = 0;
  std::array<double, kStates> p_w1{};
  Estimate entropy_w1, total, normalized_total;
  Estimate redundancy, unique_p1, unique_w2, synergy;
  std::vector<SpecificReport> specific;  // observed W1 states only
};

struct AnalysisReport {
  AnalysisConfig config;
  BinningSpec bins;
  std::size_t hands_used = 0;
  std::size_t hands_skipped = 0;
  std::size_t observations = 0;
  std::vector<CellReport> cells;  // ordered by level, then Shark before Fish

  const CellReport* find(Cents level, SkillClass skill) const;
};

AnalysisReport run_analysis(std::span<const HandRecord> hands, const AnalysisConfig& config);

}  // namespace pidpoker::pipeline
