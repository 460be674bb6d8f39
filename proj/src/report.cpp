#include "stereoscan/report.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "stereoscan/blocks_text.hpp"
#include "stereoscan/util.hpp"

namespace stereoscan::report {

using framework::RatingSheet;
using nlohmann::json;

namespace {

std::string now_utc() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << v;
  return ss.str();
}

VariantAggregates aggregate(const std::vector<RatingSheet>& sheets, stats::NaPolicy policy) {
  VariantAggregates agg;
  if (sheets.empty()) return agg;
  agg.tally = stats::verdict_tally(sheets);
  bool has_scores = std::any_of(sheets.begin(), sheets.end(),
                                [](const RatingSheet& s) { return !s.scores.empty(); });
  if (has_scores) {
    agg.means = stats::criterion_means(sheets, policy);
    agg.score = stats::framework_score(sheets, policy);
  }
  return agg;
}

json severity_json(smells::Severity severity) { return smells::to_string(severity); }

smells::Severity severity_from_string(const std::string& s) {
  if (s == "high") return smells::Severity::High;
  if (s == "medium") return smells::Severity::Medium;
  return smells::Severity::Low;
}

json sheets_json(const std::vector<RatingSheet>& sheets) {
  json arr = json::array();
  for (const RatingSheet& sheet : sheets) {
    json scores = json::object();
    for (const auto& [id, score] : sheet.scores) scores[id] = score.value;
    arr.push_back({{"rater_id", sheet.rater_id},
                   {"project_id", sheet.project_id},
                   {"provenance",
                    sheet.provenance == framework::Provenance::Human ? "human" : "model"},
                   {"verdict", framework::to_string(sheet.verdict)},
                   {"scores", scores}});
  }
  return arr;
}

std::vector<RatingSheet> sheets_from_json(const json& arr) {
  std::vector<RatingSheet> sheets;
  for (const json& j : arr) {
    RatingSheet sheet;
    sheet.rater_id = j.value("rater_id", "");
    sheet.project_id = j.value("project_id", "");
    sheet.provenance = j.value("provenance", "model") == "human"
                           ? framework::Provenance::Human
                           : framework::Provenance::Model;
    if (auto verdict = framework::verdict_from_string(j.value("verdict", "inclusive")))
      sheet.verdict = *verdict;
    if (j.contains("scores"))
      for (auto it = j.at("scores").begin(); it != j.at("scores").end(); ++it)
        sheet.scores[it.key()] = framework::LikertScore{it.value().get<int>()};
    sheets.push_back(std::move(sheet));
  }
  return sheets;
}

json aggregates_json(const VariantAggregates& agg) {
  json means = json::object();
  for (const auto& [id, mean] : agg.means)
    means[id] = {{"mean", mean.mean},
                 {"n_applicable", mean.n_applicable},
                 {"n_na", mean.n_na}};
  json out = {{"criterion_means", means},
              {"tally",
               {{"boy", agg.tally.boys},
                {"girl", agg.tally.girls},
                {"inclusive", agg.tally.inclusive},
                {"gendered_flag", agg.tally.gendered_flag},
                {"majority", agg.tally.majority
                                 ? json(framework::to_string(*agg.tally.majority))
                                 : json(nullptr)}}}};
  if (agg.score) {
    out["sigma"] = agg.score->sigma;
    out["n_scores"] = agg.score->n_scores;
  }
  return out;
}

VariantAggregates aggregates_from_json(const json& j) {
  VariantAggregates agg;
  if (j.contains("criterion_means"))
    for (auto it = j.at("criterion_means").begin(); it != j.at("criterion_means").end(); ++it)
      agg.means[it.key()] =
          stats::CriterionMean{it.value().value("mean", 0.0),
                               it.value().value("n_applicable", std::size_t{0}),
                               it.value().value("n_na", std::size_t{0})};
  if (j.contains("tally")) {
    const json& t = j.at("tally");
    agg.tally.boys = t.value("boy", std::size_t{0});
    agg.tally.girls = t.value("girl", std::size_t{0});
    agg.tally.inclusive = t.value("inclusive", std::size_t{0});
    agg.tally.gendered_flag = t.value("gendered_flag", false);
    if (t.contains("majority") && t.at("majority").is_string())
      agg.tally.majority = framework::verdict_from_string(t.at("majority").get<std::string>());
  }
  if (j.contains("sigma"))
    agg.score = stats::FrameworkScore{j.at("sigma").get<double>(),
                                      j.value("n_scores", std::size_t{0})};
  return agg;
}

}  // namespace

AnalysisReport analyze_project(const ir::Project& project, const AnalyzeOptions& options,
                               rater::Provider* provider) {
  AnalysisReport report;
  report.path = project.source_path;
  report.project_id = project.source_path.empty()
                          ? "project"
                          : std::filesystem::path(project.source_path).stem().string();
  report.meta_semver = project.meta_semver;
  report.sprite_count = project.sprites.size();
  report.monitor_count = project.monitor_count;
  report.na_policy = stats::to_string(options.na_policy);
  report.detector_config_sha256 = options.detector.digest();
  report.not_assessed = smells::non_heuristic_criteria();

  std::string blocks_text = text::emit_project(project);
  report.scratchblocks_sha256 = util::sha256_hex(blocks_text);

  smells::DetectorConfig detector = options.detector;
  detector.project_description = options.description;
  report.smells = smells::run_heuristics(project, detector);

  render::RenderNotes notes;
  render::render_stage(project, detector.render_options, &notes);
  report.meta.reduced_visual_fidelity = notes.placeholder_costumes;
  report.meta.repeats = options.run_rater ? options.repeats : 0;
  report.meta.model = options.model_name;
  report.meta.temperature = options.temperature;
  if (!options.deterministic) report.meta.timestamp = now_utc();

  if (options.run_rater && provider != nullptr) {
    report.meta.provider = provider->name();
    for (rater::Variant variant : options.variants) {
      rater::RateOptions rate_options;
      rate_options.repeats = options.repeats;
      rate_options.concurrency = options.provider_concurrency;
      rater::RatingOutcome outcome =
          rater::rate_project(project, options.description, variant, *provider, rate_options,
                              detector.render_options, options.model_name, options.temperature);
      VariantRating rating;
      rating.variant = rater::to_string(variant);
      rating.sheets = std::move(outcome.sheets);
      rating.errors = std::move(outcome.errors);
      rating.aggregates = aggregate(rating.sheets, options.na_policy);
      for (const rater::RepetitionError& error : rating.errors)
        report.errors.push_back("rate[" + rating.variant + "#" +
                                std::to_string(error.repetition_index) + "]: " + error.message);
      report.ratings.push_back(std::move(rating));
    }
  }
  return report;
}

AnalysisReport analyze(const std::string& path, const AnalyzeOptions& options,
                       rater::Provider* provider) {
  ir::Project project = ir::load_project_file(path);
  return analyze_project(project, options, provider);
}

json report_json(const AnalysisReport& report) {
  json smells_arr = json::array();
  for (const smells::StereotypeSmell& smell : report.smells) {
    json evidence = json::array();
    for (const smells::Evidence& e : smell.evidence)
      evidence.push_back(
          {{"target", e.target_name}, {"element", e.element}, {"excerpt", e.excerpt}});
    smells_arr.push_back({{"criterion", smell.criterion_id},
                          {"severity", severity_json(smell.severity)},
                          {"detector", smell.detector},
                          {"evidence", evidence}});
  }

  json ratings = json::object();
  for (const VariantRating& rating : report.ratings) {
    json errors = json::array();
    for (const rater::RepetitionError& e : rating.errors)
      errors.push_back({{"repetition", e.repetition_index},
                        {"message", e.message},
                        {"provider_status", e.provider_status}});
    ratings[rating.variant] = {{"sheets", sheets_json(rating.sheets)},
                               {"errors", errors},
                               {"aggregates", aggregates_json(rating.aggregates)}};
  }

  return json{
      {"schema", kReportSchema},
      {"project",
       {{"id", report.project_id},
        {"path", report.path},
        {"meta_semver", report.meta_semver},
        {"sprites", report.sprite_count},
        {"monitors", report.monitor_count}}},
      {"scratchblocks_sha256", report.scratchblocks_sha256},
      {"detector_config_sha256", report.detector_config_sha256},
      {"na_policy", report.na_policy},
      {"tool_version", report.tool_version},
      {"heuristics", {{"smells", smells_arr}, {"not_assessed", report.not_assessed}}},
      {"ratings", ratings},
      {"meta",
       {{"provider", report.meta.provider},
        {"model", report.meta.model},
        {"temperature",
         report.meta.temperature ? json(*report.meta.temperature) : json(nullptr)},
        {"repeats", report.meta.repeats},
        {"timestamp", report.meta.timestamp},
        {"reduced_visual_fidelity", report.meta.reduced_visual_fidelity},
        {"screenshot_excludes_monitors", report.meta.screenshot_excludes_monitors}}},
      {"errors", report.errors},
  };
}

AnalysisReport report_from_json(const json& j) {
  AnalysisReport report;
  const json& project = j.at("project");
  report.project_id = project.value("id", "");
  report.path = project.value("path", "");
  report.meta_semver = project.value("meta_semver", "");
  report.sprite_count = project.value("sprites", std::size_t{0});
  report.monitor_count = project.value("monitors", std::size_t{0});
  report.scratchblocks_sha256 = j.value("scratchblocks_sha256", "");
  report.detector_config_sha256 = j.value("detector_config_sha256", "");
  report.na_policy = j.value("na_policy", "exclude");
  report.tool_version = j.value("tool_version", kToolVersion);

  for (const json& s : j.at("heuristics").at("smells")) {
    smells::StereotypeSmell smell;
    smell.criterion_id = s.value("criterion", "");
    smell.severity = severity_from_string(s.value("severity", "low"));
    smell.detector = s.value("detector", "");
    for (const json& e : s.at("evidence"))
      smell.evidence.push_back({e.value("target", ""), e.value("element", ""),
                                e.value("excerpt", "")});
    report.smells.push_back(std::move(smell));
  }
  for (const json& id : j.at("heuristics").at("not_assessed"))
    report.not_assessed.push_back(id.get<std::string>());

  if (j.contains("ratings"))
    for (auto it = j.at("ratings").begin(); it != j.at("ratings").end(); ++it) {
      VariantRating rating;
      rating.variant = it.key();
      rating.sheets = sheets_from_json(it.value().at("sheets"));
      for (const json& e : it.value().at("errors"))
        rating.errors.push_back({e.value("repetition", 0), e.value("message", ""),
                                 e.value("provider_status", -1)});
      rating.aggregates = aggregates_from_json(it.value().at("aggregates"));
      report.ratings.push_back(std::move(rating));
    }
  std::sort(report.ratings.begin(), report.ratings.end(),
            [](const VariantRating& a, const VariantRating& b) {
              return a.variant < b.variant;
            });

  const json& meta = j.at("meta");
  report.meta.provider = meta.value("provider", "");
  report.meta.model = meta.value("model", "");
  if (meta.contains("temperature") && meta.at("temperature").is_number())
    report.meta.temperature = meta.at("temperature").get<double>();
  report.meta.repeats = meta.value("repeats", 0);
  report.meta.timestamp = meta.value("timestamp", "");
  for (const json& r : meta.value("reduced_visual_fidelity", json::array()))
    report.meta.reduced_visual_fidelity.push_back(r.get<std::string>());
  report.meta.screenshot_excludes_monitors = meta.value("screenshot_excludes_monitors", true);
  for (const json& e : j.value("errors", json::array()))
    report.errors.push_back(e.get<std::string>());
  return report;
}

std::string render_markdown(const AnalysisReport& report) {
  std::ostringstream out;
  out << "# Stereotype analysis: " << report.project_id << "\n\n";
  out << "- Path: `" << report.path << "`\n";
  out << "- Scratch format: " << (report.meta_semver.empty() ? "?" : report.meta_semver)
      << ", sprites: " << report.sprite_count << "\n";
  out << "- scratchblocks sha256: `" << report.scratchblocks_sha256 << "`\n";
  out << "- Detector config: `" << report.detector_config_sha256 << "`, N/A policy: "
      << report.na_policy << "\n\n";

  out << "## Heuristic smells\n\n";
  if (report.smells.empty()) {
    out << "No heuristic smells detected.\n\n";
  } else {
    out << "| Criterion | Severity | Detector | Evidence |\n";
    out << "|---|---|---|---|\n";
    for (const smells::StereotypeSmell& smell : report.smells) {
      std::string evidence;
      for (const smells::Evidence& e : smell.evidence) {
        if (!evidence.empty()) evidence += "; ";
        if (!e.target_name.empty()) evidence += e.target_name + ": ";
        evidence += e.excerpt;
      }
      std::replace(evidence.begin(), evidence.end(), '|', '/');
      std::replace(evidence.begin(), evidence.end(), '\n', ' ');
      out << "| " << smell.criterion_id << " | " << smells::to_string(smell.severity) << " | "
          << smell.detector << " | " << evidence << " |\n";
    }
    out << "\n";
  }
  out << "Not heuristically assessed: ";
  for (std::size_t i = 0; i < report.not_assessed.size(); ++i)
    out << (i > 0 ? ", " : "") << report.not_assessed[i];
  out << "\n\n";

  for (const VariantRating& rating : report.ratings) {
    out << "## Ratings (" << rating.variant << " prompt, " << rating.sheets.size()
        << " sheets)\n\n";
    const VariantAggregates& agg = rating.aggregates;
    out << "Verdicts: boy " << agg.tally.boys << ", girl " << agg.tally.girls
        << ", inclusive " << agg.tally.inclusive
        << (agg.tally.gendered_flag ? " — flagged as gender-specific" : "") << "\n\n";
    if (agg.score) {
      out << "Overall framework score: " << format_double(agg.score->sigma) << " over "
          << agg.score->n_scores << " scores\n\n";
      out << "| Criterion | Mean | n | N/A |\n|---|---|---|---|\n";
      for (const auto& [id, mean] : agg.means)
        out << "| " << id << " | " << format_double(mean.mean) << " | " << mean.n_applicable
            << " | " << mean.n_na << " |\n";
      out << "\n";
    }
    if (!rating.errors.empty()) {
      out << "Errors:\n";
      for (const rater::RepetitionError& e : rating.errors)
        out << "- repetition " << e.repetition_index << ": " << e.message << "\n";
      out << "\n";
    }
  }

  if (!report.errors.empty()) {
    out << "## Errors\n\n";
    for (const std::string& error : report.errors) out << "- " << error << "\n";
    out << "\n";
  }
  return out.str();
}

std::vector<std::string> discover_projects(const std::string& input) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  fs::path path(input);
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".sb3")
        files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
  } else if (fs::exists(path)) {
    files.push_back(path.string());
  }
  return files;
}

json summary_json(const BatchSummary& summary) {
  json failures = json::array();
  for (const ProjectFailure& f : summary.failures)
    failures.push_back({{"path", f.path}, {"error", f.error}});
  return json{
      {"schema", kSummarySchema},
      {"projects", summary.projects},
      {"analyzed", summary.analyzed},
      {"failures", failures},
      {"flagged", summary.flagged},
      {"flagged_percent", summary.flagged_percent},
      {"sigma_mean", summary.sigma_mean ? json(*summary.sigma_mean) : json(nullptr)},
      {"kappa_verdict", summary.kappa_verdict ? json(*summary.kappa_verdict) : json(nullptr)},
      {"kappa_criteria",
       summary.kappa_criteria ? json(*summary.kappa_criteria) : json(nullptr)},
      {"provider_unreachable", summary.provider_unreachable},
  };
}

BatchSummary analyze_batch(const std::string& input, const std::string& out_dir,
                           const AnalyzeOptions& options, rater::Provider* provider) {
  namespace fs = std::filesystem;
  std::vector<std::string> files = discover_projects(input);
  fs::create_directories(out_dir);

  BatchSummary summary;
  summary.projects = files.size();

  std::vector<std::optional<AnalysisReport>> reports(files.size());
  std::vector<std::optional<ProjectFailure>> failures(files.size());

  unsigned jobs = options.jobs > 0 ? static_cast<unsigned>(options.jobs)
                                   : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(files.size(), 1));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort_batch{false};
  auto worker = [&] {
    while (!abort_batch) {
      std::size_t i = next.fetch_add(1);
      if (i >= files.size()) break;
      try {
        reports[i] = analyze(files[i], options, provider);
      } catch (const std::exception& e) {
        failures[i] = ProjectFailure{files[i], e.what()};
        if (options.strict) abort_batch = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  std::vector<std::vector<int>> verdict_rows;
  std::vector<std::vector<int>> criteria_rows;
  double sigma_sum = 0;
  std::size_t sigma_n = 0;

  for (std::size_t i = 0; i < files.size(); ++i) {
    if (failures[i]) {
      summary.failures.push_back(*failures[i]);
      continue;
    }
    if (!reports[i]) continue;  // strict abort skipped it
    const AnalysisReport& report = *reports[i];
    ++summary.analyzed;

    for (const VariantRating& rating : report.ratings) {
      for (const rater::RepetitionError& e : rating.errors)
        if (e.provider_status == 0) summary.provider_unreachable = true;
      if (rating.variant != "framework") continue;
      if (rating.aggregates.tally.total() > 0 && rating.aggregates.tally.gendered_flag)
        ++summary.flagged;
      if (rating.aggregates.score) {
        sigma_sum += rating.aggregates.score->sigma;
        ++sigma_n;
      }
      // Reliability rows need the full set of repetitions; incomplete
      // projects are dropped (the summary reports analyzed counts).
      if (static_cast<int>(rating.sheets.size()) == options.repeats && options.repeats >= 2) {
        std::vector<int> verdicts;
        for (const RatingSheet& sheet : rating.sheets)
          verdicts.push_back(static_cast<int>(sheet.verdict));
        verdict_rows.push_back(std::move(verdicts));
        for (const framework::Criterion& criterion : framework::catalog()) {
          std::vector<int> row;
          bool complete = true;
          for (const RatingSheet& sheet : rating.sheets) {
            auto it = sheet.scores.find(criterion.id);
            if (it == sheet.scores.end()) {
              complete = false;
              break;
            }
            row.push_back(it->second.value);
          }
          if (complete && !row.empty()) criteria_rows.push_back(std::move(row));
        }
      }
    }

    std::string stem = fs::path(files[i]).stem().string();
    json j = report_json(report);
    util::write_file((fs::path(out_dir) / (stem + ".report.json")).string(), j.dump(2) + "\n");
    util::write_file((fs::path(out_dir) / (stem + ".report.md")).string(),
                     render_markdown(report));
    if (!report.errors.empty())
      summary.failures.push_back(
          ProjectFailure{files[i], std::to_string(report.errors.size()) + " rating error(s)"});
  }

  if (summary.analyzed > 0) {
    summary.flagged_percent =
        100.0 * static_cast<double>(summary.flagged) / static_cast<double>(summary.analyzed);
  }
  if (sigma_n > 0) summary.sigma_mean = sigma_sum / static_cast<double>(sigma_n);
  if (verdict_rows.size() >= 2) summary.kappa_verdict = stats::fleiss_kappa(verdict_rows);
  if (criteria_rows.size() >= 2) summary.kappa_criteria = stats::fleiss_kappa(criteria_rows);

  util::write_file((fs::path(out_dir) / "summary.json").string(),
                   summary_json(summary).dump(2) + "\n");
  return summary;
}

}  // namespace stereoscan::report
