#pragma once

// Report documents produced by the command runners, with table/json/csv
// rendering and a lossless JSON round trip.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "osinf/analysis.hpp"

namespace osinf {

inline constexpr const char* kToolVersion = "1.0.0";

struct ReportEntry {
  std::string quantity;  // influence, coefficient, mean, slope, r-squared, ...
  std::optional<std::uint64_t> k;  // rank, or subset bitmask for Mobius entries
  double value = 0.0;
  std::optional<std::string> rational;
  std::optional<double> se;
  std::string method;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

struct CrosscheckPair {
  std::string first;
  std::string second;
  double difference = 0.0;
  double z = 0.0;

  friend bool operator==(const CrosscheckPair&, const CrosscheckPair&) = default;
};

struct DiagnosisReport {
  bool equal = false;
  bool flat_profile = false;
  bool arithmetic_progression = false;
  bool vanishing_higher_mobius = false;
  std::optional<unsigned> first_violated_profile_rank;
  std::optional<unsigned> first_violated_progression_level;
  std::optional<unsigned> first_violated_mobius_level;

  friend bool operator==(const DiagnosisReport&, const DiagnosisReport&) = default;
};

struct ReportDocument {
  std::string command;
  std::string tool_version = kToolVersion;
  std::string method;  // resolved method
  std::optional<std::uint64_t> seed;
  nlohmann::json spec;
  std::vector<ReportEntry> entries;
  std::optional<DiagnosisReport> diagnosis;
  std::vector<CrosscheckPair> pairs;
  std::vector<std::string> warnings;

  bool disagreement(double threshold = 3.0) const;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

nlohmann::json report_to_json(const ReportDocument& report);
ReportDocument report_from_json(const nlohmann::json& document);

enum class ReportFormat { Table, Json, Csv };
std::optional<ReportFormat> parse_format(std::string_view text);
std::string render_report(const ReportDocument& report, ReportFormat format);

// k = 0 requests all ranks.
ReportDocument run_influence(const FunctionSpec& f, unsigned k, const AnalysisOptions& options);
ReportDocument run_approximation(const FunctionSpec& f, const AnalysisOptions& options);

struct LovaszRequest {
  bool mobius = false;
  bool symmetric_part = false;
  bool diagnose_equal_influence = false;
};
ReportDocument run_lovasz(const FunctionSpec& f, const LovaszRequest& request);

std::optional<EstimatorKind> parse_estimator(std::string_view text);

struct CrosscheckRequest {
  unsigned k = 1;
  std::vector<EstimatorKind> estimators;  // empty: every applicable estimator
  SamplingOptions sampling;
};
// Each estimator runs on its own derived seed; pairs include the exact or
// closed-form reference when one exists.
ReportDocument run_crosscheck(const FunctionSpec& f, const CrosscheckRequest& request);

}  // namespace osinf
