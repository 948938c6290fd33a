#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "pidpoker/pipeline.hpp"
#include "pidpoker/rng.hpp"

namespace pidpoker::pipeline {

namespace {

using Counts = std::array<std::uint64_t, 27>;

std::vector<Counts> clusters(std::span<const RoundObservation> obs, ResampleUnit unit) {
  std::vector<Counts> out;
  if (unit == ResampleUnit::Rounds) {
    out.resize(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) out[i][obs[i].cell()] = 1;
    return out;
  }
  std::unordered_map<std::size_t, std::size_t> slot;
  for (const auto& o : obs) {
    const auto [it, fresh] = slot.emplace(o.hand_index, out.size());
    if (fresh) out.emplace_back();
    ++out[it->second][o.cell()];
  }
  return out;
}

std::vector<double> resample_row(const std::vector<Counts>& groups, const MultiStatistic& stat,
                                 std::size_t width, std::uint64_t seed) {
  Rng rng(seed);
  Counts total{};
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[uniform_below(rng, groups.size())];
    for (std::size_t c = 0; c < total.size(); ++c) total[c] += g[c];
  }
  std::vector<double> row;
  try {
    row = stat(info::JointDistribution3::from_counts(kStates, kStates, kStates, total));
  } catch (const std::exception&) {
    row.clear();
  }
  row.resize(width, std::numeric_limits<double>::quiet_NaN());
  return row;
}

double quantile(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<Interval> summarize(const std::vector<std::vector<double>>& rows, std::size_t width) {
  std::vector<Interval> out(width);
  for (std::size_t k = 0; k < width; ++k) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& row : rows)
      if (std::isfinite(row[k])) v.push_back(row[k]);
    if (v.size() < 2) {
      out[k] = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
      continue;
    }
    std::sort(v.begin(), v.end());
    out[k] = {quantile(v, 0.025), quantile(v, 0.975)};
  }
  return out;
}

void check_inputs(std::span<const RoundObservation> obs, std::size_t resamples) {
  if (obs.empty()) throw PipelineError(PipelineErrc::InsufficientData, "no observations");
  if (resamples < 2) {
    throw PipelineError(PipelineErrc::InsufficientData, "need at least 2 resamples");
  }
}

}  // namespace

std::vector<Interval> bootstrap_many(std::span<const RoundObservation> observations,
                                     const MultiStatistic& statistic, std::size_t width,
                                     std::size_t resamples, std::uint64_t seed,
                                     ResampleUnit unit) {
  check_inputs(observations, resamples);
  const auto groups = clusters(observations, unit);
  std::vector<std::vector<double>> rows(resamples);
  const auto n = static_cast<std::int64_t>(resamples);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t r = 0; r < n; ++r) {
    rows[r] = resample_row(groups, statistic, width, derive_seed(seed, r));
  }
  return summarize(rows, width);
}

std::vector<Interval> bootstrap_many_serial(std::span<const RoundObservation> observations,
                                            const MultiStatistic& statistic, std::size_t width,
                                            std::size_t resamples, std::uint64_t seed,
                                            ResampleUnit unit) {
  check_inputs(observations, resamples);
  const auto groups = clusters(observations, unit);
  std::vector<std::vector<double>> rows;
  rows.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    rows.push_back(resample_row(groups, statistic, width, derive_seed(seed, r)));
  }
  return summarize(rows, width);
}

Interval bootstrap_ci(std::span<const RoundObservation> observations, const Statistic& statistic,
                      std::size_t resamples, std::uint64_t seed, ResampleUnit unit) {
  const MultiStatistic wrap = [&statistic](const info::JointDistribution3& d) {
    return std::vector<double>{statistic(d)};
  };
  return bootstrap_many(observations, wrap, 1, resamples, seed, unit).front();
}

}  // namespace pidpoker::pipeline
