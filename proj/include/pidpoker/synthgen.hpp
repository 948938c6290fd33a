#pragma once

// Synthetic heads-up sessions between two scripted agents whose wager states
// are known functions of their inputs.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pidpoker/handparse.hpp"
#include "pidpoker/pipeline.hpp"
#include "pidpoker/rng.hpp"

namespace pidpoker::synth {

using hh::Cents;
using pipeline::SkillClass;
using pipeline::StrengthState;
using pipeline::WagerState;

enum class PolicyKind : std::uint8_t { Uniform, PublicFollower, PrivateFollower, Encryptor };
const char* to_string(PolicyKind k);
std::optional<PolicyKind> policy_kind_from_string(std::string_view s);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary output policy over {low, high}. The w2 input is binarized as
// (w2 == Large) and p1 as (p1 == Strong):
//   Uniform          high with probability 1/2
//   PublicFollower   high iff w2 != Large
//   PrivateFollower  high iff p1 == Strong
//   Encryptor        high iff (p1 == Strong) xor (w2 == Large)
// With probability `noise` the output is redrawn uniformly from {low, high}.
struct AgentPolicy {
  PolicyKind kind = PolicyKind::Uniform;
  double noise = 0.0;
  WagerState low = WagerState::NoWager;
  WagerState high = WagerState::Small;
  // Chance of showing the hole cards when the hand ends without a showdown.
  double show_rate = 0.0;
  // Small wagers are drawn from [small_min * blind, blind], large ones from
  // (blind, large_max * blind].
  double small_min = 0.25;
  double large_max = 3.0;
};

WagerState policy_wager(const AgentPolicy& policy, StrengthState p1, WagerState w2, Rng& rng);

struct AgentConfig {
  std::string id;
  SkillClass label = SkillClass::Other;
  AgentPolicy policy;
};

struct SimConfig {
  std::size_t hands = 1000;
  Cents blind = 100;
  std::uint64_t seed = 1;
  // Hero sits in the big blind, acting second before the flop.
  AgentConfig hero{"hero", SkillClass::Shark,
                   AgentPolicy{PolicyKind::Encryptor, 0.0, WagerState::NoWager, WagerState::Small,
                               1.0}};
  AgentConfig villain{"villain", SkillClass::Fish,
                      AgentPolicy{PolicyKind::Uniform, 0.0, WagerState::Small, WagerState::Large,
                                  0.0}};
  std::size_t calibration_rounds = 8;
};

// Throws ConfigError on out-of-range values.
void validate(const SimConfig& config);
nlohmann::ordered_json to_json(const SimConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
SimConfig sim_config_from_json(const nlohmann::ordered_json& doc);

struct Deal {
  std::array<cards::Card, 2> hero;
  std::array<cards::Card, 2> villain;
  std::array<cards::Card, 5> board;
};

// Nine distinct cards, uniform without replacement.
Deal deal(Rng& rng);

// Strength cutoffs the agents use to turn scores into Weak/Strong; fitted so
// that they agree with the analysis binning of the generated corpus.
struct StrengthCutoffs {
  std::uint32_t preflop = 0;
  std::uint32_t showdown = 0;
  bool operator==(const StrengthCutoffs&) const = default;
};

struct Calibration {
  StrengthCutoffs cutoffs;
  std::size_t iterations = 0;
  bool converged = false;
};

struct SimResult {
  std::vector<hh::HandRecord> hands;
  pipeline::ClassMap labels;
  Calibration calibration;
};

// One hand from its own seed with fixed cutoffs.
hh::HandRecord simulate_hand(const SimConfig& config, std::size_t index,
                             const StrengthCutoffs& cutoffs);

// Hands in parallel, each from derive_seed(seed, index).
std::vector<hh::HandRecord> generate(const SimConfig& config, const StrengthCutoffs& cutoffs);
std::vector<hh::HandRecord> generate_serial(const SimConfig& config,
                                            const StrengthCutoffs& cutoffs);

// Regenerates with the same seeds until the equal-frequency strength cutoffs
// of the corpus match the ones the agents used.
SimResult simulate_session(const SimConfig& config);

nlohmann::ordered_json labels_json(const SimResult& result, const SimConfig& config);

}  // namespace pidpoker::synth
