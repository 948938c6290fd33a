#include <cmath>
#include <limits>
#include <set>

#include "pidpoker/pipeline.hpp"
#include "pidpoker/rng.hpp"

namespace pidpoker::pipeline {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kGlobal = 7;
constexpr std::size_t kPerState = 6;
constexpr std::size_t kWidth = kGlobal + kStates * kPerState;

// H(W1), total, normalized, Rdn, Unq1, Unq2, Syn, then per W1 state:
// weight, total, Rdn, Unq1, Unq2, Syn.
std::vector<double> measures(const info::JointDistribution3& d) {
  std::vector<double> v(kWidth, kNaN);
  const auto px = d.marginal_x();
  const double h = info::entropy(px);
  const auto dec = info::decompose(d);
  v[0] = h;
  v[1] = dec.total;
  v[2] = h > 0 ? dec.total / h : kNaN;
  v[3] = dec.redundancy;
  v[4] = dec.unique_y1;
  v[5] = dec.unique_y2;
  v[6] = dec.synergy;
  for (const auto& s : info::specific_decompose(d).states) {
    double* row = v.data() + kGlobal + s.state * kPerState;
    row[0] = s.weight;
    row[1] = s.total;
    row[2] = s.redundancy;
    row[3] = s.unique_y1;
    row[4] = s.unique_y2;
    row[5] = s.synergy;
  }
  return v;
}

Estimate widen(double value, const Interval& ci) {
  Estimate e{value, ci.low, ci.high};
  if (std::isfinite(value) && std::isfinite(ci.low) && std::isfinite(ci.high)) {
    e.low = std::min(e.low, value);
    e.high = std::max(e.high, value);
  }
  return e;
}

CellReport analyze_cell(std::span<const RoundObservation> obs, Cents level, SkillClass skill,
                        const AnalysisConfig& config) {
  CellReport cell;
  cell.level = level;
  cell.skill = skill;
  cell.observations = obs.size();
  std::set<std::size_t> hands;
  for (const auto& o : obs) hands.insert(o.hand_index);
  cell.hands = hands.size();

  const auto joint = build_joint(obs);
  const auto px = joint.marginal_x();
  for (int x = 0; x < kStates; ++x) cell.p_w1[x] = px[x];
  const auto point = measures(joint);

  const std::uint64_t seed =
      derive_seed(config.seed, static_cast<std::uint64_t>(level) * 4 + static_cast<int>(skill));
  const auto cis = config.parallel
                       ? bootstrap_many(obs, measures, kWidth, config.resamples, seed, config.unit)
                       : bootstrap_many_serial(obs, measures, kWidth, config.resamples, seed,
                                               config.unit);
  auto est = [&](std::size_t k) { return widen(point[k], cis[k]); };
  cell.entropy_w1 = est(0);
  cell.total = est(1);
  cell.normalized_total = est(2);
  cell.redundancy = est(3);
  cell.unique_p1 = est(4);
  cell.unique_w2 = est(5);
  cell.synergy = est(6);
  for (int x = 0; x < kStates; ++x) {
    if (px[x] <= 0) continue;
    const std::size_t base = kGlobal + x * kPerState;
    SpecificReport s;
    s.state = static_cast<WagerState>(x);
    s.weight = est(base);
    s.total = est(base + 1);
    s.redundancy = est(base + 2);
    s.unique_p1 = est(base + 3);
    s.unique_w2 = est(base + 4);
    s.synergy = est(base + 5);
    cell.specific.push_back(s);
  }
  return cell;
}

}  // namespace

const CellReport* AnalysisReport::find(Cents level, SkillClass skill) const {
  for (const auto& c : cells)
    if (c.level == level && c.skill == skill) return &c;
  return nullptr;
}

AnalysisReport run_analysis(std::span<const HandRecord> hands, const AnalysisConfig& config) {
  if (config.resamples < 2) {
    throw PipelineError(PipelineErrc::InvalidConfig, "resamples must be at least 2");
  }
  AnalysisReport report;
  report.config = config;
  if (hands.empty()) return report;

  const Extraction ex = extract_observations(hands, config);
  report.bins = ex.bins;
  report.hands_used = ex.hands_used;
  report.hands_skipped = ex.hands_skipped;
  report.observations = ex.observations.size();

  const std::set<Cents> levels(config.levels.begin(), config.levels.end());
  for (const Cents level : levels) {
    for (const auto skill : {SkillClass::Shark, SkillClass::Fish}) {
      std::vector<RoundObservation> subset;
      for (const auto& o : ex.observations)
        if (o.level == level && o.hero_skill == skill) subset.push_back(o);
      if (subset.empty()) continue;
      report.cells.push_back(analyze_cell(subset, level, skill, config));
    }
  }
  return report;
}

}  // namespace pidpoker::pipeline
