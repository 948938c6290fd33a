#pragma once

// Serialized forms of an AnalysisReport: one JSON document and flat CSV
// tables with one row per (level, class, measure, state).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "pidpoker/pipeline.hpp"

namespace pidpoker::pipeline {

nlohmann::ordered_json to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::ordered_json& doc);

nlohmann::ordered_json to_json(const BinningSpec& bins);
BinningSpec bins_from_json(const nlohmann::ordered_json& doc);

struct MeasureRow {
  Cents level = 0;
  SkillClass skill = SkillClass::Shark;
  std::string measure;
  std::string state;  // "all" or a W1 state name
  Estimate estimate;
  std::size_t n = 0;
};

std::vector<MeasureRow> measure_rows(const AnalysisReport& report);

inline const char* kMeasuresHeader = "level,skill_class,measure,state,estimate,ci_low,ci_high,n";
void write_measures_csv(std::ostream& out, const std::vector<MeasureRow>& rows);

// Rows for the three figure tables: net predictability, the four-way
// decomposition, and the per-state decomposition.
std::vector<MeasureRow> figure_rows(const std::vector<MeasureRow>& rows, int figure);

// Human-readable per-cell summary.
std::string summary_text(const AnalysisReport& report);

// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace pidpoker::pipeline
