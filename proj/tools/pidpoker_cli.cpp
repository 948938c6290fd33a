// pidpoker: parse hand histories, simulate agent corpora, and decompose the
// information carried by hand strength and opponent wagers about a wager.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pidpoker/handeval.hpp"
#include "pidpoker/handparse.hpp"
#include "pidpoker/infodecomp.hpp"
#include "pidpoker/pipeline.hpp"
#include "pidpoker/report_io.hpp"
#include "pidpoker/synthgen.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using namespace pidpoker;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTooManyFailures = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ojson read_json(const fs::path& path) {
  try {
    return ojson::parse(read_file(path));
  } catch (const ojson::exception& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

fs::path prepare_out(const std::string& dir) {
  fs::path out(dir);
  fs::create_directories(out);
  return out;
}

std::string comment_line(const ojson& config) {
  return std::string("# pidpoker ") + PIDPOKER_VERSION + " " + config.dump() + "\n";
}

// --- parse -------------------------------------------------------------------

struct ParseArgs {
  std::vector<std::string> inputs;
  std::string out = ".";
  double fail_threshold = 0.10;
  bool quiet = false;
};

int cmd_parse(const ParseArgs& a) {
  std::vector<hh::HandRecord> records;
  ojson failures = ojson::array();
  std::size_t attempted = 0;
  for (const auto& path : a.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    auto result = hh::parse_stream(in);
    attempted += result.report.attempted;
    for (const auto& f : result.report.failures) {
      ojson j;
      j["file"] = path;
      j["line"] = f.line;
      j["reason"] = hh::to_string(f.code);
      j["message"] = f.message;
      failures.push_back(std::move(j));
    }
    for (auto& r : result.hands) records.push_back(std::move(r));
  }
  const double fraction =
      attempted ? static_cast<double>(attempted - records.size()) / attempted : 0.0;

  ojson meta;
  meta["tool"] = "pidpoker";
  meta["version"] = PIDPOKER_VERSION;
  meta["command"] = "parse";
  meta["inputs"] = a.inputs;
  meta["fail_threshold"] = a.fail_threshold;

  const fs::path out = prepare_out(a.out);
  std::ostringstream rec;
  hh::write_records(rec, records, meta.dump());
  pipeline::write_file_atomic(out / "records.jsonl", rec.str());

  ojson report = meta;
  report["attempted"] = attempted;
  report["parsed"] = records.size();
  report["failed"] = attempted - records.size();
  report["failure_fraction"] = fraction;
  report["failures"] = std::move(failures);
  pipeline::write_file_atomic(out / "parse_report.json", report.dump(2) + "\n");

  if (!a.quiet) {
    std::printf("parsed %zu of %zu hands (failure fraction %.4f)\n", records.size(), attempted,
                fraction);
  }
  return fraction <= a.fail_threshold ? kExitOk : kExitTooManyFailures;
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string out = ".";
  std::optional<std::size_t> hands;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

int cmd_simulate(const SimulateArgs& a) {
  synth::SimConfig cfg;
  try {
    ojson doc = a.config.empty() ? ojson::object() : read_json(a.config);
    if (a.hands) doc["hands"] = *a.hands;
    if (a.seed) doc["seed"] = *a.seed;
    cfg = synth::sim_config_from_json(doc);
  } catch (const synth::ConfigError& e) {
    throw UsageError(std::string("invalid simulation config: ") + e.what());
  }
  const auto result = synth::simulate_session(cfg);
  const ojson labels = synth::labels_json(result, cfg);

  const fs::path out = prepare_out(a.out);
  std::string raw;
  for (const auto& h : result.hands) raw += hh::render_hand(h) + "\n";
  pipeline::write_file_atomic(out / "hands.txt", raw);
  std::ostringstream rec;
  ojson meta = labels;
  meta.erase("labels");
  meta["command"] = "simulate";
  hh::write_records(rec, result.hands, meta.dump());
  pipeline::write_file_atomic(out / "records.jsonl", rec.str());
  pipeline::write_file_atomic(out / "labels.json", labels.dump(2) + "\n");
  if (!a.quiet) {
    std::printf("simulated %zu hands at %lld cents (calibration %s after %zu rounds)\n",
                result.hands.size(), static_cast<long long>(cfg.blind),
                result.calibration.converged ? "converged" : "stopped", result.calibration.iterations);
  }
  return kExitOk;
}

// --- analyze -----------------------------------------------------------------

struct AnalyzeArgs {
  std::string records;
  std::string out = ".";
  std::string variant = "main";
  std::size_t resamples = 500;
  std::uint64_t seed = pipeline::AnalysisConfig{}.seed;
  std::vector<long long> levels;
  std::string labels;
  std::string bins;
  std::string unit = "hands";
  bool serial = false;
  bool quiet = false;
};

pipeline::ClassMap load_labels(const fs::path& path) {
  const ojson doc = read_json(path);
  const ojson& map = doc.contains("labels") ? doc.at("labels") : doc;
  if (!map.is_object()) throw UsageError(path.string() + ": labels must be an object");
  pipeline::ClassMap out;
  for (const auto& [player, v] : map.items()) {
    const auto c = v.is_string() ? pipeline::skill_class_from_string(v.get<std::string>())
                                 : std::nullopt;
    if (!c) throw UsageError(path.string() + ": bad class for " + player);
    out[player] = *c;
  }
  return out;
}

pipeline::BinningSpec load_bins(const fs::path& path) {
  const ojson doc = read_json(path);
  try {
    return pipeline::bins_from_json(doc.contains("bins") ? doc.at("bins") : doc);
  } catch (const ojson::exception& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

int cmd_analyze(const AnalyzeArgs& a) {
  pipeline::AnalysisConfig cfg;
  const auto variant = pipeline::variant_from_string(a.variant);
  const auto unit = pipeline::resample_unit_from_string(a.unit);
  if (!variant) throw UsageError("unknown variant " + a.variant);
  if (!unit) throw UsageError("unknown resample unit " + a.unit);
  cfg.variant = *variant;
  cfg.unit = *unit;
  cfg.resamples = a.resamples;
  cfg.seed = a.seed;
  cfg.parallel = !a.serial;
  if (!a.levels.empty()) cfg.levels.assign(a.levels.begin(), a.levels.end());
  if (!a.labels.empty()) cfg.class_overrides = load_labels(a.labels);
  if (!a.bins.empty()) cfg.fixed_bins = load_bins(a.bins);

  std::ifstream in(a.records, std::ios::binary);
  if (!in) throw UsageError("cannot read " + a.records);
  const auto hands = hh::read_records(in);
  const auto report = pipeline::run_analysis(hands, cfg);

  const fs::path out = prepare_out(a.out);
  const ojson doc = pipeline::to_json(report);
  pipeline::write_file_atomic(out / "report.json", doc.dump(2) + "\n");
  std::ostringstream csv;
  csv << comment_line(doc.at("config"));
  pipeline::write_measures_csv(csv, pipeline::measure_rows(report));
  pipeline::write_file_atomic(out / "measures.csv", csv.str());
  if (!a.quiet) std::cout << pipeline::summary_text(report);
  return kExitOk;
}

// --- decompose ---------------------------------------------------------------

int cmd_decompose(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  const auto d = info::read_distribution(in);
  const auto px = d.marginal_x();
  const auto dec = info::decompose(d);
  std::printf("entropy_x         %.6f\n", info::entropy(px));
  std::printf("total             %.6f\n", dec.total);
  std::printf("mi_y1             %.6f\n", dec.mi_y1);
  std::printf("mi_y2             %.6f\n", dec.mi_y2);
  std::printf("redundancy        %.6f\n", dec.redundancy);
  std::printf("unique_y1         %.6f\n", dec.unique_y1);
  std::printf("unique_y2         %.6f\n", dec.unique_y2);
  std::printf("synergy           %.6f\n", dec.synergy);
  std::printf("interaction_info  %.6f\n", dec.interaction_info);
  std::printf("\nstate  weight    total     redundancy  unique_y1  unique_y2  synergy\n");
  for (const auto& s : info::specific_decompose(d).states) {
    std::printf("%-6zu %-9.6f %-9.6f %-11.6f %-10.6f %-10.6f %.6f\n", s.state, s.weight, s.total,
                s.redundancy, s.unique_y1, s.unique_y2, s.synergy);
  }
  return kExitOk;
}

// --- report ------------------------------------------------------------------

int cmd_report(const std::string& path, const std::string& out_dir, bool quiet) {
  const ojson doc = read_json(path);
  pipeline::AnalysisReport report;
  try {
    report = pipeline::report_from_json(doc);
  } catch (const ojson::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  const auto rows = pipeline::measure_rows(report);
  const fs::path out = prepare_out(out_dir);
  for (int fig = 1; fig <= 3; ++fig) {
    std::ostringstream csv;
    csv << comment_line(doc.at("config"));
    pipeline::write_measures_csv(csv, pipeline::figure_rows(rows, fig));
    pipeline::write_file_atomic(out / ("fig" + std::to_string(fig) + ".csv"), csv.str());
  }
  const std::string summary = pipeline::summary_text(report);
  pipeline::write_file_atomic(out / "summary.txt", summary);
  if (!quiet) std::cout << summary;
  return kExitOk;
}

// --- preflop-table -----------------------------------------------------------

int cmd_preflop_table(const std::string& out_path) {
  const auto tally = cards::enumerate_equity(0, cards::kBoardCount);
  const auto text = cards::format_preflop_table(cards::rank_classes(tally));
  if (out_path.empty()) {
    std::cout << text;
  } else {
    pipeline::write_file_atomic(out_path, text);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information decomposition of heads-up poker wagers"};
  app.set_version_flag("--version", std::string(PIDPOKER_VERSION));
  app.require_subcommand(1);

  ParseArgs pa;
  auto* parse = app.add_subcommand("parse", "Parse raw hand histories into normalized records");
  parse->add_option("inputs", pa.inputs, "Raw hand-history files")->required();
  parse->add_option("--out", pa.out, "Output directory")->capture_default_str();
  parse->add_option("--fail-threshold", pa.fail_threshold, "Largest acceptable failure fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  parse->add_flag("-q,--quiet", pa.quiet, "No summary on stdout");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic heads-up corpus");
  simulate->add_option("--config", sa.config, "Simulation config (JSON)");
  simulate->add_option("--out", sa.out, "Output directory")->capture_default_str();
  simulate->add_option("--hands", sa.hands, "Override the number of hands");
  simulate->add_option("--seed", sa.seed, "Override the seed")->envname("PIDPOKER_SEED");
  simulate->add_flag("-q,--quiet", sa.quiet, "No summary on stdout");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Decompose W1 by level and skill class");
  analyze->add_option("records", aa.records, "Normalized records")->required();
  analyze->add_option("--out", aa.out, "Output directory")->capture_default_str();
  analyze->add_option("--variant", aa.variant, "main, preflop, showdown or both-positions")
      ->check(CLI::IsMember({"main", "preflop", "showdown", "both-positions"}))
      ->envname("PIDPOKER_VARIANT")
      ->capture_default_str();
  analyze->add_option("--resamples", aa.resamples, "Bootstrap resamples")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1'000'000}))
      ->envname("PIDPOKER_RESAMPLES")
      ->capture_default_str();
  analyze->add_option("--seed", aa.seed, "Bootstrap seed")
      ->envname("PIDPOKER_SEED")
      ->capture_default_str();
  analyze->add_option("--levels", aa.levels, "Big blinds in cents, comma separated")
      ->delimiter(',');
  analyze->add_option("--labels", aa.labels, "Player classes (JSON), replaces the ledger");
  analyze->add_option("--bins", aa.bins, "Fixed cutoffs (JSON), replaces fitting");
  analyze->add_option("--resample-unit", aa.unit, "hands or rounds")
      ->check(CLI::IsMember({"hands", "rounds"}))
      ->capture_default_str();
  analyze->add_flag("--serial", aa.serial, "Single-threaded bootstrap");
  analyze->add_flag("-q,--quiet", aa.quiet, "No summary on stdout");

  std::string dist_path;
  auto* decompose = app.add_subcommand("decompose", "Decompose a distribution file");
  decompose->add_option("distribution", dist_path, "Lines of \"x y1 y2 p\"")->required();

  std::string report_path, report_out = ".";
  bool report_quiet = false;
  auto* report = app.add_subcommand("report", "Figure tables from a report.json");
  report->add_option("report", report_path, "report.json from analyze")->required();
  report->add_option("--out", report_out, "Output directory")->capture_default_str();
  report->add_flag("-q,--quiet", report_quiet, "No summary on stdout");

  std::string table_out;
  auto* table = app.add_subcommand(
      "preflop-table", "Recompute the 169-class preflop ranking (exhaustive, several minutes)");
  table->add_option("--out", table_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*parse) return cmd_parse(pa);
    if (*simulate) return cmd_simulate(sa);
    if (*analyze) return cmd_analyze(aa);
    if (*decompose) return cmd_decompose(dist_path);
    if (*report) return cmd_report(report_path, report_out, report_quiet);
    if (*table) return cmd_preflop_table(table_out);
  } catch (const info::InfoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  } catch (const pipeline::PipelineError& e) {
    std::fprintf(stderr, "error: %s: %s\n", pipeline::to_string(e.code()), e.what());
    return kExitError;
  } catch (const hh::SchemaError& e) {
    std::fprintf(stderr, "error: SchemaError: %s\n", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
