// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <sstream>

#include "pidpoker/handeval.hpp"
#include "pidpoker/handparse.hpp"
#include "pidpoker/infodecomp.hpp"
#include "pidpoker/pipeline.hpp"
#include "pidpoker/synthgen.hpp"

using namespace pidpoker;

namespace {

synth::SimConfig sim_config(std::size_t hands) {
  synth::SimConfig c;
  c.hands = hands;
  c.seed = 1;
  c.hero.policy.kind = synth::PolicyKind::Encryptor;
  return c;
}

const synth::SimResult& session() {
  static const auto res = synth::simulate_session(sim_config(20000));
  return res;
}

const std::string& corpus_text() {
  static const std::string text = [] {
    std::string t;
    for (const auto& h : session().hands) t += hh::render_hand(h) + "\n";
    return t;
  }();
  return text;
}

const std::vector<pipeline::RoundObservation>& observations() {
  static const auto obs = [] {
    pipeline::AnalysisConfig ac;
    ac.levels = {sim_config(0).blind};
    ac.class_overrides = session().labels;
    return pipeline::extract_observations(session().hands, ac).observations;
  }();
  return obs;
}

const pipeline::MultiStatistic kPid = [](const info::JointDistribution3& d) {
  const auto p = info::decompose(d);
  return std::vector<double>{p.total, p.redundancy, p.unique_y1, p.unique_y2, p.synergy};
};

template <bool Parallel>
void BM_Bootstrap(benchmark::State& state) {
  const auto& obs = observations();
  for (auto _ : state) {
    auto r = Parallel ? pipeline::bootstrap_many(obs, kPid, 5, state.range(0), 3)
                      : pipeline::bootstrap_many_serial(obs, kPid, 5, state.range(0), 3);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_ParseStream(benchmark::State& state) {
  const auto& text = corpus_text();
  for (auto _ : state) {
    std::istringstream in(text);
    auto r = Parallel ? hh::parse_stream(in) : hh::parse_stream_serial(in);
    benchmark::DoNotOptimize(r);
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}

template <bool Parallel>
void BM_Generate(benchmark::State& state) {
  const auto cfg = sim_config(state.range(0));
  const auto& cut = session().calibration.cutoffs;
  for (auto _ : state) {
    auto r = Parallel ? synth::generate(cfg, cut) : synth::generate_serial(cfg, cut);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Equity(benchmark::State& state) {
  const std::uint64_t end = state.range(0);
  for (auto _ : state) {
    auto r = Parallel ? cards::enumerate_equity(0, end) : cards::enumerate_equity_serial(0, end);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Bootstrap<false>)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bootstrap<true>)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ParseStream<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParseStream<true>)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Generate<false>)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Generate<true>)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Equity<false>)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Equity<true>)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
