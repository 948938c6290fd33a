#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles/naive_eval.hpp"
#include "pidpoker/pipeline.hpp"
#include "pidpoker/report_io.hpp"
#include "pidpoker/synthgen.hpp"
#include "support.hpp"

using namespace pidpoker;
using namespace pidpoker::pipeline;
using hh::ActionKind;
using hh::Street;

namespace {

// Heads-up hand settled preflop: both post, first player completes, second
// checks, and `winner` takes the pot minus rake.
HandRecord limped_hand(const std::string& id, Cents level, const std::string& first,
                       const std::string& second, int winner, Cents rake = 0) {
  const Cents sb = level / 2;
  HandRecord r;
  r.hand_id = id;
  r.timestamp = "2009/07/01 00:00:00 ET";
  r.blind = level;
  r.seats = {{first, 1, 100 * level, 0}, {second, 2, 100 * level, 0}};
  r.streets = {{Street::Preflop,
                {},
                {{first, ActionKind::PostBlind, sb},
                 {second, ActionKind::PostBlind, level},
                 {first, ActionKind::Call, level - sb},
                 {second, ActionKind::Check, 0}}}};
  r.pot = 2 * level;
  r.rake = rake;
  r.seats[winner].won = r.pot - rake;
  return r;
}

HandRecord parse_fixture(const char* name) {
  auto res = hh::parse_hand(testsupport::slurp(testsupport::fixture(name)));
  REQUIRE(std::holds_alternative<HandRecord>(res));
  return std::get<HandRecord>(res);
}

synth::SimConfig sim(synth::PolicyKind kind, std::size_t hands, std::uint64_t seed, Cents blind = 100) {
  synth::SimConfig cfg;
  cfg.hands = hands;
  cfg.seed = seed;
  cfg.blind = blind;
  cfg.hero.policy.kind = kind;
  return cfg;
}

AnalysisConfig labelled(const synth::SimResult& res, std::size_t resamples, Cents level) {
  AnalysisConfig c;
  c.resamples = resamples;
  c.levels = {level};
  c.class_overrides = res.labels;
  return c;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("ledger arithmetic") {
  // Winner put in 50 of a 100 pot with 5 raked.
  const std::vector<HandRecord> one = {limped_hand("1", 50, "a", "b", 1, 5)};
  const auto l = ledger_build(one);
  CHECK(l.at(50).at("b").net == 45);
  CHECK(l.at(50).at("b").mean() == 45.0);
  CHECK(l.at(50).at("a").net == -50);

  const std::vector<HandRecord> two = {limped_hand("1", 100, "a", "b", 0),
                                       limped_hand("2", 100, "a", "b", 1)};
  const auto l2 = ledger_build(two);
  CHECK(l2.at(100).at("a").hands == 2);
  CHECK(l2.at(100).at("a").mean() == 0.0);

  const std::vector<HandRecord> levels = {limped_hand("1", 100, "a", "b", 0),
                                          limped_hand("2", 200, "a", "b", 1)};
  const auto l3 = ledger_build(levels);
  CHECK(l3.size() == 2);
  CHECK(l3.at(100).at("a").net == 100);
  CHECK(l3.at(200).at("a").net == -200);

  CHECK(ledger_build(std::vector<HandRecord>{}).empty());
}

TEST_CASE("exact mean comparison") {
  CHECK(compare_means({3, 1}, {6, 2}) == std::strong_ordering::equal);
  CHECK(compare_means({3, -1}, {7, -2}) == std::strong_ordering::less);
  CHECK(compare_means({1, INT64_MIN / 2}, {1, INT64_MAX / 2}) == std::strong_ordering::less);
}

TEST_CASE("classification examples") {
  PlayerLedger l;
  l[50]["plus"] = {10, 10};
  l[50]["worst"] = {10, -900};
  l[50]["fish"] = {10, -700};
  l[50]["other"] = {10, -300};
  l[50]["mild"] = {10, -100};
  const auto c = classify(l, 50);
  CHECK(c.at("plus") == SkillClass::Shark);
  CHECK(c.at("worst") == SkillClass::Fish);
  CHECK(c.at("fish") == SkillClass::Fish);
  CHECK(c.at("other") == SkillClass::Other);
  CHECK(c.at("mild") == SkillClass::Other);

  PlayerLedger single;
  single[100]["lone"] = {4, -1};
  single[100]["up"] = {4, 1};
  CHECK(classify(single, 100).at("lone") == SkillClass::Fish);

  PlayerLedger zero;
  zero[100]["even"] = {4, 0};
  CHECK(classify(zero, 100).at("even") == SkillClass::Fish);

  // Ties with the first player outside the worst half go to Other.
  PlayerLedger tie;
  tie[100]["a"] = {1, -90};
  tie[100]["b"] = {1, -50};
  tie[100]["c"] = {2, -100};
  tie[100]["d"] = {1, -10};
  const auto t = classify(tie, 100);
  CHECK(t.at("a") == SkillClass::Fish);
  CHECK(t.at("b") == SkillClass::Other);
  CHECK(t.at("c") == SkillClass::Other);
  CHECK(t.at("d") == SkillClass::Other);
}

TEST_CASE("classification partitions random ledgers") {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> net(-40, 20), hands(1, 5), size(1, 30);
  for (int trial = 0; trial < 300; ++trial) {
    PlayerLedger l;
    const int n = size(gen);
    for (int i = 0; i < n; ++i) l[25]["p" + std::to_string(i)] = {hands(gen), net(gen)};
    const auto c = classify(l, 25);
    REQUIRE(c.size() == static_cast<std::size_t>(n));
    std::vector<LedgerEntry> fish, other_losers;
    std::size_t losers = 0;
    for (const auto& [p, e] : l.at(25)) {
      CHECK((c.at(p) == SkillClass::Shark) == (e.net > 0));
      if (e.net <= 0) ++losers;
      if (c.at(p) == SkillClass::Fish) fish.push_back(e);
      if (c.at(p) == SkillClass::Other) other_losers.push_back(e);
    }
    CHECK(fish.size() <= std::max<std::size_t>(1, losers / 2));
    for (const auto& f : fish)
      for (const auto& o : other_losers) CHECK(compare_means(f, o) == std::strong_ordering::less);
  }
}

TEST_CASE("wager binning at every default level") {
  for (const Cents level : kDefaultLevels) {
    CHECK(bin_wager(0, level) == WagerState::NoWager);
    CHECK(bin_wager(1, level) == WagerState::Small);
    CHECK(bin_wager(level, level) == WagerState::Small);
    CHECK(bin_wager(level + 1, level) == WagerState::Large);
    CHECK(bin_wager(10 * level, level) == WagerState::Large);
  }
  CHECK(bin_wager(200, 200) == WagerState::Small);
  CHECK(bin_wager(201, 200) == WagerState::Large);
  try {
    bin_wager(-1, 100);
    FAIL("expected NegativeAmount");
  } catch (const PipelineError& e) {
    CHECK(e.code() == PipelineErrc::NegativeAmount);
  }
}

TEST_CASE("strength binning") {
  BinningSpec spec;
  spec.levels[100].max_weak_showdown = cards::max_pair_ordinal(4);
  spec.levels[100].max_weak_preflop = 85;
  const auto board = cards::parse_cards("Kd 8c 2h");
  const auto threes = cards::score_hand(cards::parse_cards("3s 3h"), board);
  const auto nines = cards::score_hand(cards::parse_cards("9s 9h"), board);
  CHECK(bin_strength(threes, spec, 100) == StrengthState::Weak);
  CHECK(bin_strength(nines, spec, 100) == StrengthState::Strong);
  CHECK(bin_strength(std::nullopt, spec, 100) == StrengthState::NotObserved);
  const auto aces = cards::score_hand(cards::parse_cards("As Ah"), {});
  const auto trash = cards::score_hand(cards::parse_cards("7d 2c"), {});
  CHECK(bin_strength(aces, spec, 100) == StrengthState::Strong);
  CHECK(bin_strength(trash, spec, 100) == StrengthState::Weak);
  try {
    bin_strength(nines, spec, 50);
    FAIL("expected MissingCutoff");
  } catch (const PipelineError& e) {
    CHECK(e.code() == PipelineErrc::MissingCutoff);
  }
}

TEST_CASE("equal-frequency cutoffs") {
  CHECK(equal_frequency_cutoff<Cents>({1, 1, 2, 2}) == 1);
  CHECK(equal_frequency_cutoff<Cents>({7, 7, 7}) == 7);
  CHECK(equal_frequency_cutoff<Cents>({5}) == 5);
  CHECK_THROWS_AS(equal_frequency_cutoff<Cents>({}), PipelineError);

  std::map<Cents, BinSamples> s;
  s[1].wagers = {1, 1, 2, 2};
  s[1].showdown_scores = {5, 9};
  s[1].preflop_scores = {3, 4, 4};
  const auto spec = fit_bins(s);
  CHECK(spec.at(1).max_small_wager == 1);
  CHECK(spec.at(1).max_weak_showdown == 5u);
  CHECK(spec.at(1).max_weak_preflop == 3u);
}

TEST_CASE("equal-frequency balance property") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 2000; ++trial) {
    std::uniform_int_distribution<int> n_dist(1, 60), range(1, 1 + trial % 12);
    std::vector<Cents> v(n_dist(gen));
    for (auto& x : v) x = range(gen);
    const Cents c = equal_frequency_cutoff(v);
    auto imbalance = [&](Cents cut) {
      std::int64_t below = 0, above = 0;
      for (const Cents x : v) {
        below += x <= cut;
        above += x > cut;
      }
      return std::abs(below - above);
    };
    // Bounded by the tie group that straddles the midpoint.
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const Cents median = sorted[(sorted.size() - 1) / 2];
    CHECK(imbalance(c) <= std::count(v.begin(), v.end(), median));
    CHECK(std::count(v.begin(), v.end(), c) > 0);
    // No observed value splits better.
    for (const Cents x : v) CHECK(imbalance(c) <= imbalance(x));
  }
}

TEST_CASE("street wagers exclude blinds") {
  const auto r = parse_fixture("fixture_001.txt");
  CHECK(street_wager(r.streets[0], "Xq7Lp2") == 125);
  CHECK(street_wager(r.streets[0], "vR9mK1") == 100);
  CHECK(street_wager(r.streets[2], "vR9mK1") == 0);
  CHECK(street_wager(r.streets[3], "vR9mK1") == 300);
}

TEST_CASE("showdown hand yields one scored round per street") {
  const std::vector<HandRecord> hands = {parse_fixture("fixture_001.txt")};
  const auto rounds = extract_rounds(hands, Variant::Main);
  REQUIRE(rounds.size() == 4);
  for (const auto& r : rounds) {
    CHECK(r.hero == "vR9mK1");
    CHECK(r.hero_position == Position::Second);
    CHECK(r.level == 50);
    REQUIRE(r.hero_score.has_value());
  }
  // Hand-computed: AQ offsuit preflop, then a pair of aces with the best
  // three kickers on each board.
  CHECK(rounds[0].hero_score->scale == cards::Scale::Preflop);
  CHECK(rounds[0].hero_score->ordinal ==
        static_cast<std::uint32_t>(170 - cards::preflop_class(cards::Card::parse("Ac"), cards::Card::parse("Qd")).rank));
  CHECK(rounds[1].hero_score->ordinal == oracle::pack(1, {14, 12, 7, 2}));
  CHECK(rounds[2].hero_score->ordinal == oracle::pack(1, {14, 13, 12, 7}));
  CHECK(rounds[3].hero_score->ordinal == oracle::pack(1, {14, 13, 12, 9}));
  CHECK(rounds[0].hero_wager == 100);
  CHECK(rounds[0].villain_wager == 125);
  CHECK(rounds[1].hero_wager == 200);
  CHECK(rounds[2].hero_wager == 0);
  CHECK(rounds[3].villain_wager == 300);

  const auto pre = extract_rounds(hands, Variant::PreflopOnly);
  CHECK(pre.size() == 1);
  const auto both = extract_rounds(hands, Variant::BothPositions);
  CHECK(both.size() == 8);
}

TEST_CASE("preflop fold yields a single unobserved round") {
  const std::vector<HandRecord> hands = {parse_fixture("fixture_unicode.txt")};
  const auto rounds = extract_rounds(hands, Variant::Main);
  REQUIRE(rounds.size() == 1);
  CHECK(rounds[0].hero == "Jürgen_ß");
  CHECK_FALSE(rounds[0].hero_score.has_value());
  BinningSpec spec;
  spec.levels[200] = {};
  const auto obs = bin_rounds(rounds, spec, {}, Variant::Main);
  REQUIRE(obs.size() == 1);
  CHECK(obs[0].w1 == WagerState::NoWager);
  CHECK(obs[0].p1 == StrengthState::NotObserved);
  CHECK(obs[0].w2 == WagerState::Large);
  CHECK(obs[0].hero_skill == SkillClass::Other);
}

TEST_CASE("non heads-up hands are rejected") {
  auto r = limped_hand("1", 100, "a", "b", 0);
  r.seats.push_back({"c", 3, 1000, 0});
  const std::vector<HandRecord> hands = {r};
  try {
    extract_rounds(hands, Variant::Main);
    FAIL("expected NonHeadsUpHand");
  } catch (const PipelineError& e) {
    CHECK(e.code() == PipelineErrc::NonHeadsUpHand);
  }
  AnalysisConfig cfg;
  const auto ex = extract_observations(hands, cfg);
  CHECK(ex.hands_skipped == 1);
  CHECK(ex.observations.empty());
}

TEST_CASE("joint distribution construction") {
  RoundObservation o;
  o.w1 = WagerState::Large;
  o.p1 = StrengthState::Weak;
  o.w2 = WagerState::Small;
  const std::vector<RoundObservation> one = {o};
  const auto j = build_joint(one);
  CHECK(j.at(2, 1, 1) == 1.0);
  try {
    build_joint(std::vector<RoundObservation>{});
    FAIL("expected EmptyInput");
  } catch (const PipelineError& e) {
    CHECK(e.code() == PipelineErrc::EmptyInput);
  }

  std::mt19937_64 gen(4);
  std::vector<RoundObservation> many(27000);
  for (std::size_t i = 0; i < many.size(); ++i) {
    many[i].w1 = static_cast<WagerState>(gen() % 3);
    many[i].p1 = static_cast<StrengthState>(gen() % 3);
    many[i].w2 = static_cast<WagerState>(gen() % 3);
  }
  const auto u = build_joint(many);
  for (const double p : u.probabilities()) CHECK(std::abs(p - 1.0 / 27) < 0.01);
  const auto px = u.marginal_x();
  std::array<double, 3> freq{};
  for (const auto& m : many) freq[static_cast<int>(m.w1)] += 1.0 / many.size();
  for (int x = 0; x < 3; ++x) CHECK(std::abs(px[x] - freq[x]) < 1e-12);
}

TEST_CASE("variants on a synthetic corpus") {
  auto cfg = sim(synth::PolicyKind::Encryptor, 3000, 21);
  cfg.hero.policy.show_rate = 0.3;
  cfg.villain.policy.show_rate = 0.3;
  const auto res = synth::simulate_session(cfg);
  AnalysisConfig ac;
  ac.levels = {100};

  ac.variant = Variant::Main;
  const auto main = extract_observations(res.hands, ac);
  ac.variant = Variant::PreflopOnly;
  const auto pre = extract_observations(res.hands, ac);
  ac.variant = Variant::ShowdownOnly;
  const auto sd = extract_observations(res.hands, ac);
  ac.variant = Variant::BothPositions;
  const auto both = extract_observations(res.hands, ac);

  CHECK(pre.observations.size() == res.hands.size());
  CHECK(both.observations.size() == 2 * main.observations.size());
  std::size_t main_observed = 0;
  for (const auto& o : main.observations) main_observed += o.p1 != StrengthState::NotObserved;
  CHECK(sd.observations.size() == main_observed);
  CHECK(sd.observations.size() > 0);
  for (const auto& o : sd.observations) CHECK(o.p1 != StrengthState::NotObserved);

  // ShowdownOnly is a subset of Main.
  std::multiset<std::tuple<std::string, int, int>> main_keys;
  for (const auto& o : main.observations)
    main_keys.insert({o.hand_id, static_cast<int>(o.street), o.cell()});
  for (const auto& o : sd.observations)
    CHECK(main_keys.count({o.hand_id, static_cast<int>(o.street), o.cell()}) > 0);
}

TEST_CASE("bootstrap basics") {
  auto cfg = sim(synth::PolicyKind::Uniform, 400, 3);
  const auto res = synth::simulate_session(cfg);
  const auto ex = extract_observations(res.hands, labelled(res, 50, 100));
  const auto& obs = ex.observations;
  REQUIRE(!obs.empty());

  const auto constant = bootstrap_ci(obs, [](const info::JointDistribution3&) { return 0.75; }, 50, 1);
  CHECK(constant.low == 0.75);
  CHECK(constant.high == 0.75);

  const Statistic total = [](const info::JointDistribution3& d) { return info::total_information(d); };
  const auto a = bootstrap_ci(obs, total, 100, 9);
  const auto b = bootstrap_ci(obs, total, 100, 9);
  CHECK(a.low == b.low);
  CHECK(a.high == b.high);
  CHECK(a.low <= a.high);
  const auto c = bootstrap_ci(obs, total, 100, 10);
  CHECK((c.low != a.low || c.high != a.high));
  const auto r = bootstrap_ci(obs, total, 100, 9, ResampleUnit::Rounds);
  CHECK(r.low <= r.high);

  const auto nan = bootstrap_ci(
      obs, [](const info::JointDistribution3&) -> double { throw std::runtime_error("x"); }, 20, 1);
  CHECK(std::isnan(nan.low));
  CHECK(std::isnan(nan.high));
}

TEST_CASE("parallel and serial bootstrap agree exactly") {
  const auto res = synth::simulate_session(sim(synth::PolicyKind::Encryptor, 1500, 5));
  const auto ex = extract_observations(res.hands, labelled(res, 50, 100));
  const MultiStatistic stat = [](const info::JointDistribution3& d) {
    const auto p = info::decompose(d);
    return std::vector<double>{p.total, p.redundancy, p.unique_y1, p.unique_y2, p.synergy};
  };
  for (const auto unit : {ResampleUnit::Hands, ResampleUnit::Rounds}) {
    const auto par = bootstrap_many(ex.observations, stat, 5, 120, 77, unit);
    const auto ser = bootstrap_many_serial(ex.observations, stat, 5, 120, 77, unit);
    REQUIRE(par.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(par[i].low == ser[i].low);
      CHECK(par[i].high == ser[i].high);
    }
  }
}

TEST_CASE("XOR-policy synergy interval is tight near one bit") {
  const auto res = synth::simulate_session(sim(synth::PolicyKind::Encryptor, 10000, 31));
  const auto report = run_analysis(res.hands, labelled(res, 200, 100));
  const auto* cell = report.find(100, SkillClass::Shark);
  REQUIRE(cell);
  CHECK(cell->synergy.high - cell->synergy.low < 0.05);
  CHECK(cell->synergy.low > 0.95);
  CHECK(cell->synergy.low <= cell->synergy.value);
  CHECK(cell->synergy.value <= cell->synergy.high);
  CHECK(std::abs(cell->synergy.value - cell->entropy_w1.value) < 0.01);
}

TEST_CASE("report cells are consistent") {
  auto cfg = sim(synth::PolicyKind::PublicFollower, 2000, 17, 50);
  cfg.villain.policy.noise = 0.1;
  cfg.hero.policy.noise = 0.2;
  const auto res = synth::simulate_session(cfg);
  auto ac = labelled(res, 60, 50);
  ac.class_overrides.clear();
  const auto report = run_analysis(res.hands, ac);
  CHECK(report.hands_used == 2000);
  std::size_t counted = 0;
  for (const auto& c : report.cells) {
    counted += c.observations;
    const double sum = c.redundancy.value + c.unique_p1.value + c.unique_w2.value + c.synergy.value;
    CHECK(std::abs(sum - c.total.value) < 1e-9);
    for (const auto* e : {&c.entropy_w1, &c.total, &c.normalized_total, &c.redundancy,
                          &c.unique_p1, &c.unique_w2, &c.synergy}) {
      CHECK(e->low <= e->value);
      CHECK(e->value <= e->high);
    }
    double weighted = 0;
    for (const auto& s : c.specific) weighted += s.weight.value * s.synergy.value;
    CHECK(std::abs(weighted - c.synergy.value) < 1e-9);
  }
  CHECK(counted <= report.observations);
}

TEST_CASE("run_analysis edge cases and determinism") {
  CHECK(run_analysis(std::vector<HandRecord>{}, AnalysisConfig{}).cells.empty());
  AnalysisConfig bad;
  bad.resamples = 1;
  CHECK_THROWS_AS(run_analysis(std::vector<HandRecord>{}, bad), PipelineError);

  const auto res = synth::simulate_session(sim(synth::PolicyKind::Encryptor, 1200, 2));
  auto ac = labelled(res, 40, 100);
  const auto a = to_json(run_analysis(res.hands, ac)).dump();
  const auto b = to_json(run_analysis(res.hands, ac)).dump();
  ac.parallel = false;
  const auto c = to_json(run_analysis(res.hands, ac)).dump();
  CHECK(a == b);
  CHECK(a == c);

  // Only a Shark in this corpus: the Fish cell is absent, not zero.
  auto only = ac;
  only.class_overrides = {{"hero", SkillClass::Shark}};
  const auto rep = run_analysis(res.hands, only);
  CHECK(rep.find(100, SkillClass::Shark) != nullptr);
  CHECK(rep.find(100, SkillClass::Fish) == nullptr);
}

TEST_CASE("report serialization round trip") {
  const auto res = synth::simulate_session(sim(synth::PolicyKind::PrivateFollower, 800, 4));
  const auto rep = run_analysis(res.hands, labelled(res, 30, 100));
  const auto j = to_json(rep);
  const auto back = report_from_json(j);
  CHECK(to_json(back).dump() == j.dump());
  CHECK(bins_from_json(to_json(rep.bins)) == rep.bins);

  const auto rows = measure_rows(rep);
  std::ostringstream csv;
  write_measures_csv(csv, rows);
  CHECK(csv.str().rfind(kMeasuresHeader, 0) == 0);
  for (int fig = 1; fig <= 3; ++fig) CHECK_FALSE(figure_rows(rows, fig).empty());
}

}  // TEST_SUITE
