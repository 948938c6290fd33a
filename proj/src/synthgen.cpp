#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "pidpoker/synthgen.hpp"

namespace pidpoker::synth {

using ojson = nlohmann::ordered_json;
using hh::ActionKind;
using hh::HandRecord;
using hh::Street;

const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::Uniform: return "uniform";
    case PolicyKind::PublicFollower: return "public-follower";
    case PolicyKind::PrivateFollower: return "private-follower";
    case PolicyKind::Encryptor: return "encryptor";
  }
  return "unknown";
}

std::optional<PolicyKind> policy_kind_from_string(std::string_view s) {
  for (const auto k : {PolicyKind::Uniform, PolicyKind::PublicFollower,
                       PolicyKind::PrivateFollower, PolicyKind::Encryptor})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

WagerState policy_wager(const AgentPolicy& policy, StrengthState p1, WagerState w2, Rng& rng) {
  const bool strong = p1 == StrengthState::Strong;
  const bool large = w2 == WagerState::Large;
  // Draw every variate regardless of the branch so streams stay aligned.
  const double coin = uniform01(rng);
  const double noise = uniform01(rng);
  const double redraw = uniform01(rng);
  bool high = false;
  switch (policy.kind) {
    case PolicyKind::Uniform: high = coin < 0.5; break;
    case PolicyKind::PublicFollower: high = !large; break;
    case PolicyKind::PrivateFollower: high = strong; break;
    case PolicyKind::Encryptor: high = strong != large; break;
  }
  if (noise < policy.noise) high = redraw < 0.5;
  return high ? policy.high : policy.low;
}

Deal deal(Rng& rng) {
  std::array<int, cards::kDeckSize> deck{};
  for (int i = 0; i < cards::kDeckSize; ++i) deck[i] = i;
  for (int i = 0; i < 9; ++i) {
    const auto j = i + static_cast<int>(uniform_below(rng, cards::kDeckSize - i));
    std::swap(deck[i], deck[j]);
  }
  Deal d;
  d.hero = {cards::Card::from_index(deck[0]), cards::Card::from_index(deck[1])};
  d.villain = {cards::Card::from_index(deck[2]), cards::Card::from_index(deck[3])};
  for (int i = 0; i < 5; ++i) d.board[i] = cards::Card::from_index(deck[4 + i]);
  return d;
}

namespace {

Cents small_blind(Cents blind) { return blind == 25 ? 10 : blind / 2; }

std::string timestamp(std::size_t index) {
  using namespace std::chrono;
  const auto minutes_total = static_cast<long long>(index);
  const auto day = sys_days{year{2009} / July / 1} + days{minutes_total / 1440};
  const year_month_day ymd{day};
  const long long minute = minutes_total % 1440;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d/%02u/%02u %02lld:%02lld:00 ET", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), minute / 60,
                minute % 60);
  return buf;
}

StrengthState strength(std::span<const cards::Card> hole, std::span<const cards::Card> board,
                       const StrengthCutoffs& cut) {
  const auto score = cards::score_hand(hole, board);
  const auto limit = score.scale == cards::Scale::Preflop ? cut.preflop : cut.showdown;
  return score.ordinal <= limit ? StrengthState::Weak : StrengthState::Strong;
}

// Betting state for one hand; amounts are chips added by each action.
class Table {
 public:
  Table(HandRecord& rec, std::string hero, std::string villain)
      : rec_(rec), hero_(std::move(hero)), villain_(std::move(villain)) {}

  void open(Street s, std::vector<cards::Card> board) {
    rec_.streets.push_back(hh::StreetRecord{s, std::move(board), {}});
    committed_.clear();
  }

  void put(const std::string& player, ActionKind kind, Cents chips = 0) {
    committed_[player] += chips;
    rec_.streets.back().actions.push_back(hh::ActionRecord{player, kind, chips});
  }
  void raise_to(const std::string& player, Cents target) {
    put(player, ActionKind::Raise, target - committed_[player]);
  }
  void call(const std::string& player) {
    Cents top = 0;
    for (const auto& [p, c] : committed_) top = std::max(top, c);
    put(player, ActionKind::Call, top - committed_[player]);
  }

 private:
  HandRecord& rec_;
  std::string hero_, villain_;
  std::map<std::string, Cents> committed_;
};

struct Sizes {
  Cents lo_small, hi_small, lo_large, hi_large;
};

Sizes sizes_for(const AgentPolicy& p, Cents blind) {
  const auto lo = std::max<Cents>(1, static_cast<Cents>(std::ceil(p.small_min * blind)));
  const auto hi = std::max<Cents>(blind + 1, static_cast<Cents>(std::floor(p.large_max * blind)));
  return {lo, blind, blind + 1, hi};
}

void settle(HandRecord& rec, const std::string& folder, const Deal& d, const SimConfig& cfg) {
  const std::string& hero = cfg.hero.id;
  const std::string& villain = cfg.villain.id;
  Cents pot = 0;
  std::map<std::string, Cents> in;
  for (const auto& st : rec.streets)
    for (const auto& a : st.actions) {
      pot += a.amount;
      in[a.player] += a.amount;
    }
  const std::string& top = in[hero] >= in[villain] ? hero : villain;
  const Cents uncalled = std::abs(in[hero] - in[villain]);
  const Cents contested = pot - uncalled;
  const Cents rake =
      rec.streets.size() > 1 ? std::min<Cents>(contested * 5 / 100, 3 * rec.blind) : 0;
  const Cents prize = contested - rake;

  std::map<std::string, Cents> won;
  won[top] += uncalled;
  if (!folder.empty()) {
    won[folder == hero ? villain : hero] += prize;
  } else {
    std::array<cards::Card, 7> h{}, v{};
    std::copy(d.hero.begin(), d.hero.end(), h.begin());
    std::copy(d.villain.begin(), d.villain.end(), v.begin());
    std::copy(d.board.begin(), d.board.end(), h.begin() + 2);
    std::copy(d.board.begin(), d.board.end(), v.begin() + 2);
    const auto hs = cards::evaluate_ordinal(h);
    const auto vs = cards::evaluate_ordinal(v);
    if (hs > vs) {
      won[hero] += prize;
    } else if (vs > hs) {
      won[villain] += prize;
    } else {
      // Odd chip to the first seat.
      won[villain] += prize - prize / 2;
      won[hero] += prize / 2;
    }
  }
  rec.pot = pot;
  rec.rake = rake;
  for (auto& s : rec.seats) s.won = won[s.player];
}

}  // namespace

HandRecord simulate_hand(const SimConfig& cfg, std::size_t index, const StrengthCutoffs& cut) {
  Rng rng(derive_seed(cfg.seed, index));
  const Deal d = deal(rng);
  const Cents L = cfg.blind;
  const Cents sb = small_blind(L);
  const std::string& hero = cfg.hero.id;
  const std::string& villain = cfg.villain.id;
  const Sizes hs = sizes_for(cfg.hero.policy, L);
  const Sizes vs = sizes_for(cfg.villain.policy, L);

  HandRecord rec;
  char id[64];
  std::snprintf(id, sizeof id, "%llu-%07zu", static_cast<unsigned long long>(cfg.seed), index + 1);
  rec.hand_id = id;
  rec.timestamp = timestamp(index);
  rec.blind = L;
  rec.seats = {hh::SeatRecord{villain, 1, 100 * L, 0}, hh::SeatRecord{hero, 2, 100 * L, 0}};

  Table t(rec, hero, villain);
  std::string folder;
  auto fold = [&](const std::string& p) {
    t.put(p, ActionKind::Fold);
    folder = p;
  };

  // Preflop: villain (small blind) acts first.
  t.open(Street::Preflop, {});
  t.put(villain, ActionKind::PostBlind, sb);
  t.put(hero, ActionKind::PostBlind, L);
  {
    const auto vp = strength(d.villain, {}, cut);
    const auto hp = strength(d.hero, {}, cut);
    const WagerState v = policy_wager(cfg.villain.policy, vp, WagerState::NoWager, rng);
    WagerState h = policy_wager(cfg.hero.policy, hp, v, rng);
    if (v == WagerState::NoWager) h = WagerState::NoWager;  // the hand is over
    using W = WagerState;
    if (v == W::NoWager) {
      fold(villain);
    } else if (v == W::Small) {
      if (h == W::Small) {
        t.raise_to(villain, uniform_int(rng, L + 1, L + sb));
        t.call(hero);
      } else {
        t.call(villain);
        if (h == W::NoWager) {
          t.put(hero, ActionKind::Check);
        } else {
          t.raise_to(hero, L + uniform_int(rng, hs.lo_large, hs.hi_large));
          fold(villain);
        }
      }
    } else {
      if (h == W::NoWager) {
        t.raise_to(villain, sb + uniform_int(rng, vs.lo_large, vs.hi_large));
        fold(hero);
      } else if (h == W::Small) {
        t.raise_to(villain, uniform_int(rng, L + sb + 1, 2 * L));
        t.call(hero);
      } else {
        t.raise_to(villain, L + uniform_int(rng, std::max(L + 1, hs.lo_large),
                                            std::max(L + 1, hs.hi_large)));
        t.call(hero);
      }
    }
  }

  // Postflop: hero (big blind) acts first.
  for (int s = 1; s < hh::kStreetCount && folder.empty(); ++s) {
    const auto n = static_cast<std::size_t>(s + 2);
    std::vector<cards::Card> board(d.board.begin(), d.board.begin() + n);
    const auto vp = strength(d.villain, board, cut);
    const auto hp = strength(d.hero, board, cut);
    t.open(static_cast<Street>(s), std::move(board));
    const WagerState v = policy_wager(cfg.villain.policy, vp, WagerState::NoWager, rng);
    const WagerState h = policy_wager(cfg.hero.policy, hp, v, rng);
    auto small = [&](const Sizes& z) { return uniform_int(rng, z.lo_small, z.hi_small); };
    auto large = [&](const Sizes& z) { return uniform_int(rng, z.lo_large, z.hi_large); };
    using W = WagerState;
    if (h == W::NoWager) {
      t.put(hero, ActionKind::Check);
      if (v == W::NoWager) {
        t.put(villain, ActionKind::Check);
      } else {
        t.put(villain, ActionKind::Bet, v == W::Small ? small(vs) : large(vs));
        fold(hero);
      }
    } else if (h == W::Small) {
      t.put(hero, ActionKind::Bet, small(hs));
      if (v == W::NoWager) {
        fold(villain);
      } else if (v == W::Small) {
        t.call(villain);
      } else {
        t.raise_to(villain, large(vs));
        fold(hero);
      }
    } else {
      if (v == W::Small) {
        // Check-raise: the only line where the villain stays small.
        t.put(hero, ActionKind::Check);
        t.put(villain, ActionKind::Bet, small(vs));
        t.raise_to(hero, large(hs));
        fold(villain);
      } else {
        t.put(hero, ActionKind::Bet, large(hs));
        if (v == W::NoWager) {
          fold(villain);
        } else {
          t.call(villain);
        }
      }
    }
  }

  const bool hero_shows = uniform01(rng) < cfg.hero.policy.show_rate;
  const bool villain_shows = uniform01(rng) < cfg.villain.policy.show_rate;
  if (folder.empty() || hero_shows) rec.showdown.push_back(hh::Reveal{hero, d.hero});
  if (folder.empty() || villain_shows) rec.showdown.push_back(hh::Reveal{villain, d.villain});
  settle(rec, folder, d, cfg);
  return rec;
}

std::vector<HandRecord> generate(const SimConfig& config, const StrengthCutoffs& cutoffs) {
  std::vector<HandRecord> out(config.hands);
  const auto n = static_cast<std::int64_t>(config.hands);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = simulate_hand(config, i, cutoffs);
  return out;
}

std::vector<HandRecord> generate_serial(const SimConfig& config, const StrengthCutoffs& cutoffs) {
  std::vector<HandRecord> out;
  out.reserve(config.hands);
  for (std::size_t i = 0; i < config.hands; ++i) out.push_back(simulate_hand(config, i, cutoffs));
  return out;
}

namespace {

// Median strengths over every street a hero could see, ignoring who folds.
StrengthCutoffs initial_cutoffs(const SimConfig& cfg) {
  std::vector<std::uint32_t> pre, post;
  for (std::size_t i = 0; i < cfg.hands; ++i) {
    Rng rng(derive_seed(cfg.seed, i));
    const Deal d = deal(rng);
    pre.push_back(cards::score_hand(d.hero, {}).ordinal);
    for (std::size_t n = 3; n <= 5; ++n) {
      post.push_back(cards::score_hand(d.hero, std::span(d.board).first(n)).ordinal);
    }
  }
  return {pipeline::equal_frequency_cutoff(pre), pipeline::equal_frequency_cutoff(post)};
}

struct Fit {
  StrengthCutoffs cutoffs;
  std::size_t mismatches = 0;  // observed rounds the agents binned differently
  std::vector<std::uint32_t> preflop, showdown;
};

Fit fit_corpus(const std::vector<HandRecord>& hands, const StrengthCutoffs& used) {
  const auto rounds = pipeline::extract_rounds(hands, pipeline::Variant::Main);
  Fit fit;
  fit.cutoffs = used;
  for (auto& [level, s] : pipeline::collect_bin_samples(rounds)) {
    fit.preflop = std::move(s.preflop_scores);
    fit.showdown = std::move(s.showdown_scores);
  }
  if (!fit.preflop.empty()) fit.cutoffs.preflop = pipeline::equal_frequency_cutoff(fit.preflop);
  if (!fit.showdown.empty()) fit.cutoffs.showdown = pipeline::equal_frequency_cutoff(fit.showdown);
  for (const auto v : fit.preflop)
    fit.mismatches += (v <= used.preflop) != (v <= fit.cutoffs.preflop);
  for (const auto v : fit.showdown)
    fit.mismatches += (v <= used.showdown) != (v <= fit.cutoffs.showdown);
  return fit;
}

// Observed values in [lo, hi], at most `cap` of them.
std::vector<std::uint32_t> candidates(std::vector<std::uint32_t> values, std::uint32_t lo,
                                      std::uint32_t hi, std::size_t cap) {
  std::vector<std::uint32_t> out{lo, hi};
  for (const auto v : values)
    if (v > lo && v < hi) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.size() > cap) out.resize(cap);
  return out;
}

}  // namespace

SimResult simulate_session(const SimConfig& config) {
  validate(config);
  SimResult result;
  result.labels[config.hero.id] = config.hero.label;
  result.labels[config.villain.id] = config.villain.label;
  if (config.hands == 0) {
    result.calibration.converged = true;
    return result;
  }
  StrengthCutoffs cut = initial_cutoffs(config);
  std::vector<HandRecord> hands = generate(config, cut);
  Fit fit = fit_corpus(hands, cut);
  std::vector<StrengthCutoffs> seen{cut};
  std::size_t it = 0;
  while (fit.mismatches > 0 && it < config.calibration_rounds) {
    ++it;
    const StrengthCutoffs next = fit.cutoffs;
    if (std::find(seen.begin(), seen.end(), next) != seen.end()) break;  // cycling
    cut = next;
    seen.push_back(cut);
    hands = generate(config, cut);
    fit = fit_corpus(hands, cut);
  }

  if (fit.mismatches > 0) {
    // Fitting keeps jumping between neighbours; try every observed value
    // between them and keep the most consistent choice.
    const StrengthCutoffs other = fit.cutoffs;
    const auto pre = candidates(fit.preflop, std::min(cut.preflop, other.preflop),
                                std::max(cut.preflop, other.preflop), 16);
    const auto post = candidates(fit.showdown, std::min(cut.showdown, other.showdown),
                                 std::max(cut.showdown, other.showdown), 16);
    for (const auto p : pre) {
      for (const auto q : post) {
        const StrengthCutoffs trial{p, q};
        if (trial == cut) continue;
        ++it;
        auto trial_hands = generate(config, trial);
        auto trial_fit = fit_corpus(trial_hands, trial);
        if (trial_fit.mismatches < fit.mismatches) {
          cut = trial;
          hands = std::move(trial_hands);
          fit = std::move(trial_fit);
        }
        if (fit.mismatches == 0) break;
      }
      if (fit.mismatches == 0) break;
    }
  }
  result.calibration.cutoffs = cut;
  result.calibration.iterations = it;
  result.calibration.converged = fit.mismatches == 0;
  result.hands = std::move(hands);
  return result;
}

// --- configuration ---------------------------------------------------------

namespace {

std::optional<WagerState> wager_state_from_string(std::string_view s) {
  for (int x = 0; x < pipeline::kStates; ++x) {
    const auto w = static_cast<WagerState>(x);
    if (s == pipeline::to_string(w)) return w;
  }
  return std::nullopt;
}

void check_id(const std::string& id) {
  if (id.empty() || id.front() == ' ' || id.back() == ' ' ||
      id.find_first_of(":()[]\n\r\t$") != std::string::npos) {
    throw ConfigError("player id \"" + id + "\" is empty or contains reserved characters");
  }
}

void check_agent(const AgentConfig& a) {
  check_id(a.id);
  const auto& p = a.policy;
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in01(p.noise)) throw ConfigError(a.id + ": noise must lie in [0, 1]");
  if (!in01(p.show_rate)) throw ConfigError(a.id + ": show_rate must lie in [0, 1]");
  if (p.low == p.high) throw ConfigError(a.id + ": low and high wager states must differ");
  if (!(p.small_min > 0.0 && p.small_min <= 1.0)) {
    throw ConfigError(a.id + ": small_min must lie in (0, 1]");
  }
  if (!(p.large_max > 1.0 && p.large_max <= 20.0)) {
    throw ConfigError(a.id + ": large_max must lie in (1, 20]");
  }
}

ojson agent_json(const AgentConfig& a) {
  ojson j;
  j["id"] = a.id;
  j["class"] = pipeline::to_string(a.label);
  j["policy"] = to_string(a.policy.kind);
  j["noise"] = a.policy.noise;
  j["low"] = pipeline::to_string(a.policy.low);
  j["high"] = pipeline::to_string(a.policy.high);
  j["show_rate"] = a.policy.show_rate;
  j["small_min"] = a.policy.small_min;
  j["large_max"] = a.policy.large_max;
  return j;
}

void agent_from_json(const ojson& j, AgentConfig& a) {
  if (!j.is_object()) throw ConfigError("agent entry must be an object");
  static const std::set<std::string> kKeys = {"id",   "class",     "policy",    "noise",    "low",
                                              "high", "show_rate", "small_min", "large_max"};
  for (const auto& [key, v] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown agent key \"" + key + "\"");
  }
  try {
    if (j.contains("id")) a.id = j["id"].get<std::string>();
    if (j.contains("class")) {
      const auto c = pipeline::skill_class_from_string(j["class"].get<std::string>());
      if (!c) throw ConfigError("unknown class " + j["class"].dump());
      a.label = *c;
    }
    if (j.contains("policy")) {
      const auto k = policy_kind_from_string(j["policy"].get<std::string>());
      if (!k) throw ConfigError("unknown policy " + j["policy"].dump());
      a.policy.kind = *k;
    }
    for (const char* key : {"low", "high"}) {
      if (!j.contains(key)) continue;
      const auto w = wager_state_from_string(j[key].get<std::string>());
      if (!w) throw ConfigError(std::string("unknown wager state for ") + key);
      (std::string_view(key) == "low" ? a.policy.low : a.policy.high) = *w;
    }
    if (j.contains("noise")) a.policy.noise = j["noise"].get<double>();
    if (j.contains("show_rate")) a.policy.show_rate = j["show_rate"].get<double>();
    if (j.contains("small_min")) a.policy.small_min = j["small_min"].get<double>();
    if (j.contains("large_max")) a.policy.large_max = j["large_max"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad agent entry: ") + e.what());
  }
}

}  // namespace

void validate(const SimConfig& c) {
  if (c.blind < 4) throw ConfigError("blind_cents must be at least 4");
  if (c.hands > 100'000'000) throw ConfigError("hands is unreasonably large");
  check_agent(c.hero);
  check_agent(c.villain);
  if (c.hero.id == c.villain.id) throw ConfigError("hero and villain ids must differ");
}

ojson to_json(const SimConfig& c) {
  ojson j;
  j["hands"] = c.hands;
  j["blind_cents"] = c.blind;
  j["seed"] = c.seed;
  j["calibration_rounds"] = c.calibration_rounds;
  j["hero"] = agent_json(c.hero);
  j["villain"] = agent_json(c.villain);
  return j;
}

SimConfig sim_config_from_json(const ojson& doc) {
  if (!doc.is_object()) throw ConfigError("simulation config must be a JSON object");
  static const std::set<std::string> kKeys = {"hands", "blind_cents", "seed",
                                              "calibration_rounds", "hero", "villain"};
  for (const auto& [key, v] : doc.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown config key \"" + key + "\"");
  }
  SimConfig c;
  try {
    if (doc.contains("hands")) c.hands = doc["hands"].get<std::size_t>();
    if (doc.contains("blind_cents")) c.blind = doc["blind_cents"].get<Cents>();
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("calibration_rounds")) {
      c.calibration_rounds = doc["calibration_rounds"].get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  if (doc.contains("hero")) agent_from_json(doc["hero"], c.hero);
  if (doc.contains("villain")) agent_from_json(doc["villain"], c.villain);
  validate(c);
  return c;
}

ojson labels_json(const SimResult& result, const SimConfig& config) {
  ojson j;
  j["tool"] = "pidpoker";
  j["version"] = PIDPOKER_VERSION;
  j["config"] = to_json(config);
  ojson labels = ojson::object();
  for (const auto& [player, c] : result.labels) labels[player] = pipeline::to_string(c);
  j["labels"] = std::move(labels);
  ojson cal;
  cal["max_weak_preflop"] = result.calibration.cutoffs.preflop;
  cal["max_weak_showdown"] = result.calibration.cutoffs.showdown;
  cal["iterations"] = result.calibration.iterations;
  cal["converged"] = result.calibration.converged;
  j["calibration"] = std::move(cal);
  return j;
}

}  // namespace pidpoker::synth
