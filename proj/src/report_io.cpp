#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pidpoker/report_io.hpp"

namespace pidpoker::pipeline {

using ojson = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }
double num_from(const ojson& v) { return v.is_null() ? kNaN : v.get<double>(); }

ojson estimate_json(const Estimate& e) {
  ojson j;
  j["estimate"] = num(e.value);
  j["ci_low"] = num(e.low);
  j["ci_high"] = num(e.high);
  return j;
}

Estimate estimate_from(const ojson& j) {
  return {num_from(j.at("estimate")), num_from(j.at("ci_low")), num_from(j.at("ci_high"))};
}

template <typename T>
ojson opt(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

template <typename T>
std::optional<T> opt_from(const ojson& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

std::string score_label(std::uint32_t ordinal, cards::Scale scale) {
  const auto cat = scale == cards::Scale::Preflop ? cards::Category::HighCard
                                                   : static_cast<cards::Category>(ordinal >> 20);
  return cards::describe(cards::HandScore{scale, cat, ordinal});
}

struct Named {
  const char* name;
  Estimate CellReport::*field;
};
constexpr Named kGlobalMeasures[] = {
    {"entropy_w1", &CellReport::entropy_w1},
    {"total_information", &CellReport::total},
    {"normalized_total", &CellReport::normalized_total},
    {"redundancy", &CellReport::redundancy},
    {"unique_p1", &CellReport::unique_p1},
    {"unique_w2", &CellReport::unique_w2},
    {"synergy", &CellReport::synergy},
};

struct NamedSpecific {
  const char* name;
  Estimate SpecificReport::*field;
};
constexpr NamedSpecific kSpecificMeasures[] = {
    {"weight", &SpecificReport::weight},
    {"total_information", &SpecificReport::total},
    {"redundancy", &SpecificReport::redundancy},
    {"unique_p1", &SpecificReport::unique_p1},
    {"unique_w2", &SpecificReport::unique_w2},
    {"synergy", &SpecificReport::synergy},
};

std::string fmt(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

ojson to_json(const BinningSpec& bins) {
  ojson arr = ojson::array();
  for (const auto& [level, c] : bins.levels) {
    ojson j;
    j["level"] = level;
    j["max_small_wager"] = opt(c.max_small_wager);
    j["max_weak_preflop"] = opt(c.max_weak_preflop);
    j["max_weak_preflop_label"] =
        c.max_weak_preflop ? ojson(score_label(*c.max_weak_preflop, cards::Scale::Preflop))
                           : ojson(nullptr);
    j["max_weak_showdown"] = opt(c.max_weak_showdown);
    j["max_weak_showdown_label"] =
        c.max_weak_showdown ? ojson(score_label(*c.max_weak_showdown, cards::Scale::Showdown))
                            : ojson(nullptr);
    arr.push_back(std::move(j));
  }
  return arr;
}

BinningSpec bins_from_json(const ojson& doc) {
  BinningSpec bins;
  for (const auto& j : doc) {
    LevelCutoffs c;
    c.max_small_wager = opt_from<Cents>(j.at("max_small_wager"));
    c.max_weak_preflop = opt_from<std::uint32_t>(j.at("max_weak_preflop"));
    c.max_weak_showdown = opt_from<std::uint32_t>(j.at("max_weak_showdown"));
    bins.levels[j.at("level").get<Cents>()] = c;
  }
  return bins;
}

ojson to_json(const AnalysisReport& r) {
  ojson doc;
  doc["tool"] = "pidpoker";
  doc["version"] = PIDPOKER_VERSION;
  ojson cfg;
  cfg["variant"] = to_string(r.config.variant);
  cfg["resamples"] = r.config.resamples;
  cfg["seed"] = r.config.seed;
  cfg["levels"] = r.config.levels;
  cfg["resample_unit"] = to_string(r.config.unit);
  cfg["fixed_bins"] = r.config.fixed_bins.has_value();
  ojson overrides = ojson::object();
  for (const auto& [player, c] : r.config.class_overrides) overrides[player] = to_string(c);
  cfg["class_overrides"] = std::move(overrides);
  doc["config"] = std::move(cfg);
  doc["bins"] = to_json(r.bins);
  doc["hands_used"] = r.hands_used;
  doc["hands_skipped"] = r.hands_skipped;
  doc["observations"] = r.observations;

  ojson cells = ojson::array();
  for (const auto& c : r.cells) {
    ojson j;
    j["level"] = c.level;
    j["skill_class"] = to_string(c.skill);
    j["observations"] = c.observations;
    j["hands"] = c.hands;
    j["p_w1"] = c.p_w1;
    ojson m;
    for (const auto& g : kGlobalMeasures) m[g.name] = estimate_json(c.*g.field);
    j["measures"] = std::move(m);
    ojson spec = ojson::array();
    for (const auto& s : c.specific) {
      ojson sj;
      sj["state"] = to_string(s.state);
      for (const auto& g : kSpecificMeasures) sj[g.name] = estimate_json(s.*g.field);
      spec.push_back(std::move(sj));
    }
    j["specific"] = std::move(spec);
    cells.push_back(std::move(j));
  }
  doc["cells"] = std::move(cells);
  return doc;
}

AnalysisReport report_from_json(const ojson& doc) {
  AnalysisReport r;
  const auto& cfg = doc.at("config");
  const auto variant = variant_from_string(cfg.at("variant").get<std::string>());
  const auto unit = resample_unit_from_string(cfg.at("resample_unit").get<std::string>());
  if (!variant || !unit) {
    throw PipelineError(PipelineErrc::InvalidConfig, "unknown variant or resample unit");
  }
  r.config.variant = *variant;
  r.config.unit = *unit;
  r.config.resamples = cfg.at("resamples").get<std::size_t>();
  r.config.seed = cfg.at("seed").get<std::uint64_t>();
  r.config.levels = cfg.at("levels").get<std::vector<Cents>>();
  r.bins = bins_from_json(doc.at("bins"));
  if (cfg.at("fixed_bins").get<bool>()) r.config.fixed_bins = r.bins;
  for (const auto& [player, c] : cfg.at("class_overrides").items()) {
    const auto skill = skill_class_from_string(c.get<std::string>());
    if (!skill) throw PipelineError(PipelineErrc::InvalidConfig, "unknown skill class");
    r.config.class_overrides[player] = *skill;
  }
  r.hands_used = doc.at("hands_used").get<std::size_t>();
  r.hands_skipped = doc.at("hands_skipped").get<std::size_t>();
  r.observations = doc.at("observations").get<std::size_t>();

  for (const auto& j : doc.at("cells")) {
    CellReport c;
    c.level = j.at("level").get<Cents>();
    const auto skill = skill_class_from_string(j.at("skill_class").get<std::string>());
    if (!skill) throw PipelineError(PipelineErrc::InvalidConfig, "unknown skill class");
    c.skill = *skill;
    c.observations = j.at("observations").get<std::size_t>();
    c.hands = j.at("hands").get<std::size_t>();
    c.p_w1 = j.at("p_w1").get<std::array<double, kStates>>();
    for (const auto& g : kGlobalMeasures) c.*g.field = estimate_from(j.at("measures").at(g.name));
    for (const auto& sj : j.at("specific")) {
      SpecificReport s;
      const auto name = sj.at("state").get<std::string>();
      bool found = false;
      for (int x = 0; x < kStates; ++x) {
        if (name == to_string(static_cast<WagerState>(x))) {
          s.state = static_cast<WagerState>(x);
          found = true;
        }
      }
      if (!found) throw PipelineError(PipelineErrc::InvalidConfig, "unknown wager state " + name);
      for (const auto& g : kSpecificMeasures) s.*g.field = estimate_from(sj.at(g.name));
      c.specific.push_back(s);
    }
    r.cells.push_back(std::move(c));
  }
  return r;
}

std::vector<MeasureRow> measure_rows(const AnalysisReport& report) {
  std::vector<MeasureRow> rows;
  for (const auto& c : report.cells) {
    for (const auto& g : kGlobalMeasures) {
      rows.push_back({c.level, c.skill, g.name, "all", c.*g.field, c.observations});
    }
    for (const auto& s : c.specific) {
      const auto n = static_cast<std::size_t>(
          std::llround(c.p_w1[static_cast<int>(s.state)] * static_cast<double>(c.observations)));
      for (const auto& g : kSpecificMeasures) {
        rows.push_back({c.level, c.skill, std::string("specific_") + g.name, to_string(s.state),
                        s.*g.field, n});
      }
    }
  }
  return rows;
}

void write_measures_csv(std::ostream& out, const std::vector<MeasureRow>& rows) {
  out << kMeasuresHeader << '\n';
  for (const auto& r : rows) {
    out << r.level << ',' << to_string(r.skill) << ',' << r.measure << ',' << r.state << ','
        << fmt(r.estimate.value) << ',' << fmt(r.estimate.low) << ',' << fmt(r.estimate.high)
        << ',' << r.n << '\n';
  }
}

std::vector<MeasureRow> figure_rows(const std::vector<MeasureRow>& rows, int figure) {
  std::vector<MeasureRow> out;
  for (const auto& r : rows) {
    const bool net = r.measure == "entropy_w1" || r.measure == "total_information" ||
                     r.measure == "normalized_total";
    const bool specific = r.measure.rfind("specific_", 0) == 0;
    const bool pick = figure == 1   ? net && r.state == "all"
                      : figure == 2 ? !net && !specific
                                    : specific && r.measure != "specific_weight";
    if (pick) out.push_back(r);
  }
  return out;
}

std::string summary_text(const AnalysisReport& r) {
  std::ostringstream out;
  char buf[256];
  out << "variant " << to_string(r.config.variant) << ", " << r.config.resamples
      << " resamples, seed " << r.config.seed << "\n";
  out << "hands used " << r.hands_used << ", skipped " << r.hands_skipped << ", observations "
      << r.observations << "\n";
  for (const auto& [level, c] : r.bins.levels) {
    out << "level " << level << ": wager cutoff "
        << (c.max_small_wager ? std::to_string(*c.max_small_wager) : std::string("-"))
        << ", max weak hand "
        << (c.max_weak_showdown ? score_label(*c.max_weak_showdown, cards::Scale::Showdown)
                                : std::string("-"))
        << "\n";
  }
  out << "\nlevel  class  n       H(W1)   I(W1;P1,W2)  Rdn     Unq(P1)  Unq(W2)  Syn\n";
  for (const auto& c : r.cells) {
    std::snprintf(buf, sizeof buf, "%-6lld %-6s %-7zu %-7.4f %-12.4f %-7.4f %-8.4f %-8.4f %.4f\n",
                  static_cast<long long>(c.level), to_string(c.skill), c.observations,
                  c.entropy_w1.value, c.total.value, c.redundancy.value, c.unique_p1.value,
                  c.unique_w2.value, c.synergy.value);
    out << buf;
  }
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace pidpoker::pipeline
