#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "stereoscan/rater.hpp"
#include "stereoscan/smells.hpp"
#include "stereoscan/stats.hpp"

namespace stereoscan::report {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "stereoscan-report/1";
inline constexpr const char* kSummarySchema = "stereoscan-summary/1";

struct AnalyzeOptions {
  bool run_rater = true;
  std::vector<rater::Variant> variants = {rater::Variant::WithFramework};
  int repeats = 5;
  int provider_concurrency = 4;
  int jobs = 0;  // batch workers; 0 = logical CPUs
  std::string model_name;
  std::optional<double> temperature;
  smells::DetectorConfig detector;
  stats::NaPolicy na_policy = stats::NaPolicy::Exclude;
  std::string description;  // creator description fed to the prompt
  bool strict = false;      // batch: abort on first project error
  bool deterministic = false;  // omit wall-clock metadata (mock runs)
};

struct VariantAggregates {
  stats::CriterionMeans means;
  std::optional<stats::FrameworkScore> score;  // absent for verdict-only sheets
  stats::VerdictTally tally;
};

struct VariantRating {
  std::string variant;  // "plain" | "framework"
  std::vector<framework::RatingSheet> sheets;
  std::vector<rater::RepetitionError> errors;
  VariantAggregates aggregates;
};

struct RunMeta {
  std::string provider;
  std::string model;
  std::optional<double> temperature;
  int repeats = 0;
  std::string timestamp;  // empty in deterministic runs
  std::vector<std::string> reduced_visual_fidelity;  // placeholder costumes
  bool screenshot_excludes_monitors = true;
};

struct AnalysisReport {
  std::string project_id;
  std::string path;
  std::string meta_semver;
  std::size_t sprite_count = 0;
  std::size_t monitor_count = 0;
  std::string scratchblocks_sha256;
  std::string detector_config_sha256;
  std::string na_policy = "exclude";
  std::string tool_version = kToolVersion;
  std::vector<smells::StereotypeSmell> smells;
  std::vector<std::string> not_assessed;  // criteria without a heuristic
  std::vector<VariantRating> ratings;
  RunMeta meta;
  std::vector<std::string> errors;
};

// Single-project pipeline: load, scratchblocks, imagery, heuristics,
// optional rating, aggregation. Provider may be null when options.run_rater
// is false.
AnalysisReport analyze(const std::string& path, const AnalyzeOptions& options,
                       rater::Provider* provider);
AnalysisReport analyze_project(const ir::Project& project, const AnalyzeOptions& options,
                               rater::Provider* provider);

nlohmann::json report_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& j);
std::string render_markdown(const AnalysisReport& report);

struct ProjectFailure {
  std::string path;
  std::string error;
};

struct BatchSummary {
  std::size_t projects = 0;
  std::size_t analyzed = 0;
  std::vector<ProjectFailure> failures;
  std::size_t flagged = 0;           // gendered per >= 1 rater (framework variant)
  double flagged_percent = 0;
  std::optional<double> sigma_mean;  // mean per-project sigma
  std::optional<double> kappa_verdict;
  std::optional<double> kappa_criteria;
  bool provider_unreachable = false;
};

nlohmann::json summary_json(const BatchSummary& summary);

// Analyzes every .sb3 under `input` (a file or directory), writing
// <stem>.report.json/.md plus summary.json into out_dir. Bounded worker
// pool; per-project failures are collected unless options.strict.
BatchSummary analyze_batch(const std::string& input, const std::string& out_dir,
                           const AnalyzeOptions& options, rater::Provider* provider);

// Discovery helper: the .sb3 files analyze_batch would process, sorted.
std::vector<std::string> discover_projects(const std::string& input);

}  // namespace stereoscan::report
