#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "stereoscan/blocks_text.hpp"
#include "stereoscan/framework.hpp"
#include "stereoscan/genprompt.hpp"
#include "stereoscan/provider.hpp"
#include "stereoscan/report.hpp"
#include "stereoscan/stage_render.hpp"
#include "stereoscan/stats.hpp"
#include "stereoscan/toml_lite.hpp"
#include "stereoscan/util.hpp"

namespace {

using nlohmann::json;
using namespace stereoscan;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAnalysisErrors = 2;
constexpr int kExitProviderUnreachable = 3;

struct ProviderFlags {
  bool mock = false;
  std::string model;
  std::string base_url;
  double temperature = -1;  // <0 = provider default
  int max_retries = -1;     // <0 = default
  std::string transcript_path;
};

// Precedence: CLI flags > environment > config file > defaults.
std::string resolve(const std::string& flag, const char* env_var, const toml::Table* config,
                    const std::string& config_key, const std::string& fallback) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(env_var); env != nullptr && *env != '\0') return env;
  if (config != nullptr) return config->get_string(config_key, fallback);
  return fallback;
}

std::unique_ptr<rater::Provider> make_provider(const ProviderFlags& flags,
                                               const toml::Table* config) {
  if (flags.mock) return std::make_unique<rater::MockProvider>();
  llm::HttpProviderConfig http;
  http.base_url = resolve(flags.base_url, "STEREOSCAN_BASE_URL", config, "provider.base_url",
                          http.base_url);
  http.api_key = resolve("", "STEREOSCAN_API_KEY", config, "provider.api_key", "");
  http.model = resolve(flags.model, "STEREOSCAN_MODEL", config, "provider.model", http.model);
  if (flags.temperature >= 0) http.temperature = flags.temperature;
  if (flags.max_retries >= 0) http.max_retries = flags.max_retries;

  llm::TranscriptSink sink;
  if (!flags.transcript_path.empty()) {
    std::string path = flags.transcript_path;
    sink = [path](const std::string& request, const std::string& response) {
      std::ofstream out(path, std::ios::app);
      json line = {{"request", request}, {"response", response}};
      out << line.dump() << "\n";
    };
  }
  return std::make_unique<llm::HttpProvider>(http, sink);
}

std::vector<framework::RatingSheet> sheets_from_ratings_file(const json& j) {
  std::vector<framework::RatingSheet> sheets;
  auto parse_sheet = [](const json& s) {
    framework::RatingSheet sheet;
    sheet.rater_id = s.value("rater_id", "");
    sheet.project_id = s.value("project_id", "");
    sheet.provenance = s.value("provenance", "model") == "human"
                           ? framework::Provenance::Human
                           : framework::Provenance::Model;
    if (auto v = framework::verdict_from_string(s.value("verdict", "inclusive")))
      sheet.verdict = *v;
    if (s.contains("scores"))
      for (auto it = s.at("scores").begin(); it != s.at("scores").end(); ++it)
        sheet.scores[it.key()] = framework::LikertScore{it.value().get<int>()};
    return sheet;
  };
  if (j.contains("projects")) {
    for (const json& project : j.at("projects"))
      for (const json& s : project.value("sheets", json::array()))
        sheets.push_back(parse_sheet(s));
  } else {
    for (const json& s : j.value("sheets", json::array())) sheets.push_back(parse_sheet(s));
  }
  return sheets;
}

// Per-project sigma values for Mann-Whitney between two rating files.
std::vector<double> sigmas_from_ratings_file(const json& j, stats::NaPolicy policy) {
  std::vector<double> sigmas;
  auto project_sigma = [&](const json& project) {
    std::vector<framework::RatingSheet> sheets;
    for (const json& s : project.value("sheets", json::array())) {
      framework::RatingSheet sheet;
      if (s.contains("scores"))
        for (auto it = s.at("scores").begin(); it != s.at("scores").end(); ++it)
          sheet.scores[it.key()] = framework::LikertScore{it.value().get<int>()};
      sheets.push_back(std::move(sheet));
    }
    if (sheets.empty()) return;
    try {
      sigmas.push_back(stats::framework_score(sheets, policy).sigma);
    } catch (const stats::StatsError&) {
      // verdict-only sheets carry no sigma
    }
  };
  if (j.contains("projects"))
    for (const json& project : j.at("projects")) project_sigma(project);
  else
    project_sigma(j);
  return sigmas;
}

json stats_payload(const std::vector<framework::RatingSheet>& sheets, stats::NaPolicy policy) {
  json out;
  if (sheets.empty()) return out;
  json means = json::object();
  bool has_scores = false;
  for (const auto& sheet : sheets)
    if (!sheet.scores.empty()) has_scores = true;
  if (has_scores) {
    for (const auto& [id, mean] : stats::criterion_means(sheets, policy))
      means[id] = {{"mean", mean.mean},
                   {"n_applicable", mean.n_applicable},
                   {"n_na", mean.n_na}};
    stats::FrameworkScore score = stats::framework_score(sheets, policy);
    out["sigma"] = score.sigma;
    out["n_scores"] = score.n_scores;
  }
  out["criterion_means"] = means;
  stats::VerdictTally tally = stats::verdict_tally(sheets);
  out["tally"] = {{"boy", tally.boys},
                  {"girl", tally.girls},
                  {"inclusive", tally.inclusive},
                  {"gendered_flag", tally.gendered_flag}};

  // Verdict reliability grouped by project id when every project carries
  // the same rater count.
  std::map<std::string, std::vector<int>> by_project;
  for (const auto& sheet : sheets)
    by_project[sheet.project_id].push_back(static_cast<int>(sheet.verdict));
  if (by_project.size() >= 2) {
    std::vector<std::vector<int>> rows;
    bool balanced = true;
    std::size_t n = by_project.begin()->second.size();
    for (auto& [id, row] : by_project) {
      if (row.size() != n) balanced = false;
      rows.push_back(row);
    }
    if (balanced && n >= 2) out["kappa_verdict"] = stats::fleiss_kappa(rows);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stereoscan — gender stereotype smell analysis for Scratch tutorials"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "TOML config file");

  // ---- blocks ----
  auto* cmd_blocks = app.add_subcommand("blocks", "Print a project as scratchblocks text");
  std::string blocks_file;
  cmd_blocks->add_option("file", blocks_file, "Path to .sb3")->required();

  // ---- render ----
  auto* cmd_render = app.add_subcommand("render", "Render the start-state stage screenshot");
  std::string render_file, render_out = "stage.png", costumes_dir;
  cmd_render->add_option("file", render_file, "Path to .sb3")->required();
  cmd_render->add_option("-o,--out", render_out, "Output PNG path");
  cmd_render->add_option("--costumes-dir", costumes_dir, "Also export sprite costumes here");

  // ---- analyze ----
  auto* cmd_analyze = app.add_subcommand("analyze", "Analyze a project or directory");
  std::string analyze_input, analyze_out = "stereoscan-out", detector_path, description;
  bool no_llm = false, strict = false, deterministic = false;
  int repeats = 5, jobs = 0;
  std::string variant_name = "framework";
  ProviderFlags analyze_provider;
  std::string na_policy_name = "exclude";
  cmd_analyze->add_option("path", analyze_input, ".sb3 file or directory")->required();
  cmd_analyze->add_option("-o,--out-dir", analyze_out, "Report output directory");
  cmd_analyze->add_flag("--no-llm", no_llm, "Heuristics only, no rater");
  cmd_analyze->add_flag("--mock", analyze_provider.mock, "Use the deterministic mock provider");
  cmd_analyze->add_flag("--strict", strict, "Abort the batch on the first project error");
  cmd_analyze->add_flag("--deterministic", deterministic, "Omit timestamps from reports");
  cmd_analyze->add_option("--repeats", repeats, "Rating repetitions per prompt");
  cmd_analyze->add_option("--jobs", jobs, "Parallel project workers (0 = logical CPUs)");
  cmd_analyze->add_option("--variant", variant_name, "plain | framework | both");
  cmd_analyze->add_option("--model", analyze_provider.model, "Model name");
  cmd_analyze->add_option("--base-url", analyze_provider.base_url, "Chat-completions base URL");
  cmd_analyze->add_option("--temperature", analyze_provider.temperature, "Sampling temperature");
  cmd_analyze->add_option("--detector-config", detector_path, "Detector thresholds (TOML)");
  cmd_analyze->add_option("--description", description, "Creator description for the prompt");
  cmd_analyze->add_option("--na-policy", na_policy_name, "exclude | as_midpoint");
  cmd_analyze->add_option("--transcripts", analyze_provider.transcript_path,
                          "JSONL transcript file (real provider)");
  cmd_analyze->add_option("--max-retries", analyze_provider.max_retries,
                          "HTTP retry attempts on 429/5xx");

  // ---- rate ----
  auto* cmd_rate = app.add_subcommand("rate", "Rate one project with the LLM prompt");
  std::string rate_file, rate_out;
  std::string rate_variant = "framework";
  int rate_repeats = 5;
  ProviderFlags rate_provider;
  std::string rate_description;
  cmd_rate->add_option("file", rate_file, "Path to .sb3")->required();
  cmd_rate->add_option("-o,--out", rate_out, "Write sheets JSON here (default stdout)");
  cmd_rate->add_option("--variant", rate_variant, "plain | framework");
  cmd_rate->add_option("--repeats", rate_repeats, "Repetitions");
  cmd_rate->add_flag("--mock", rate_provider.mock, "Use the deterministic mock provider");
  cmd_rate->add_option("--model", rate_provider.model, "Model name");
  cmd_rate->add_option("--base-url", rate_provider.base_url, "Chat-completions base URL");
  cmd_rate->add_option("--temperature", rate_provider.temperature, "Sampling temperature");
  cmd_rate->add_option("--description", rate_description, "Creator description");
  cmd_rate->add_option("--transcripts", rate_provider.transcript_path, "JSONL transcripts");
  cmd_rate->add_option("--max-retries", rate_provider.max_retries,
                       "HTTP retry attempts on 429/5xx");
  bool rate_prompt_only = false;
  cmd_rate->add_flag("--prompt-only", rate_prompt_only, "Print the prompt and exit");

  // ---- generate ----
  auto* cmd_generate = app.add_subcommand("generate", "Build / run RQ3 generation prompts");
  std::string gen_topic;
  bool gen_inclusive = false, gen_prompt_only = false, gen_all = false;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  ProviderFlags gen_provider;
  cmd_generate->add_option("--topic", gen_topic, "Project topic");
  cmd_generate->add_flag("--inclusive", gen_inclusive, "Request a gender-inclusive project");
  cmd_generate->add_flag("--prompt-only", gen_prompt_only, "Print the prompt and exit");
  cmd_generate->add_flag("--all-topics", gen_all, "Both variants for every topic (16 prompts)");
  cmd_generate->add_option("--seed", gen_seed, "Generation seed (recorded in the spec)");
  cmd_generate->add_option("-o,--out", gen_out, "Write descriptions JSON here");
  cmd_generate->add_flag("--mock", gen_provider.mock, "Use the deterministic mock provider");
  cmd_generate->add_option("--model", gen_provider.model, "Model name");
  cmd_generate->add_option("--base-url", gen_provider.base_url, "Chat-completions base URL");

  // ---- questionnaire ----
  auto* cmd_quest = app.add_subcommand("questionnaire", "Export randomized questionnaires");
  std::string quest_in, quest_out_dir = ".";
  int quest_orders = 3;
  std::uint64_t quest_seed = 0;
  cmd_quest->add_option("--in", quest_in, "descriptions.json from `generate`")->required();
  cmd_quest->add_option("--orders", quest_orders, "Number of orderings");
  cmd_quest->add_option("--seed", quest_seed, "Permutation seed");
  cmd_quest->add_option("--out-dir", quest_out_dir, "Output directory");

  // ---- stats ----
  auto* cmd_stats = app.add_subcommand("stats", "Aggregate rating sheets");
  std::vector<std::string> ratings_files;
  std::string stats_na = "exclude";
  cmd_stats->add_option("--ratings", ratings_files, "One or two ratings JSON files")
      ->required()
      ->expected(1, 2);
  cmd_stats->add_option("--na-policy", stats_na, "exclude | as_midpoint");

  // ---- framework ----
  auto* cmd_framework = app.add_subcommand("framework", "Print the criteria catalog");
  bool framework_as_json = false;
  cmd_framework->add_flag("--json", framework_as_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  std::optional<toml::Table> config;
  if (!config_path.empty()) {
    try {
      config = toml::Table::parse_file(config_path);
    } catch (const std::exception& e) {
      std::cerr << "config: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  try {
    if (cmd_blocks->parsed()) {
      ir::Project project = ir::load_project_file(blocks_file);
      std::cout << text::emit_project(project);
      return kExitOk;
    }

    if (cmd_render->parsed()) {
      ir::Project project = ir::load_project_file(render_file);
      render::RenderNotes notes;
      render::StageImage stage = render::render_stage(project, {}, &notes);
      std::vector<std::uint8_t> png = img::encode_png(stage.image);
      util::write_file(render_out, std::string(png.begin(), png.end()));
      if (!costumes_dir.empty()) render::export_costumes(project, costumes_dir, {}, &notes);
      for (const std::string& costume : notes.placeholder_costumes)
        std::cerr << "placeholder (no rasterizer): " << costume << "\n";
      std::cout << render_out << "\n";
      return kExitOk;
    }

    if (cmd_analyze->parsed()) {
      report::AnalyzeOptions options;
      options.run_rater = !no_llm;
      options.repeats = repeats;
      options.jobs = jobs;
      options.strict = strict;
      options.deterministic = deterministic || analyze_provider.mock;
      options.description = description;
      options.model_name = analyze_provider.model;
      if (analyze_provider.temperature >= 0)
        options.temperature = analyze_provider.temperature;
      if (na_policy_name == "as_midpoint") options.na_policy = stats::NaPolicy::AsMidpoint;
      if (!detector_path.empty())
        options.detector = smells::DetectorConfig::from_toml(toml::Table::parse_file(detector_path));
      else if (config)
        options.detector = smells::DetectorConfig::from_toml(*config);
      if (variant_name == "plain")
        options.variants = {rater::Variant::Plain};
      else if (variant_name == "both")
        options.variants = {rater::Variant::Plain, rater::Variant::WithFramework};
      else
        options.variants = {rater::Variant::WithFramework};

      std::unique_ptr<rater::Provider> provider;
      if (options.run_rater)
        provider = make_provider(analyze_provider, config ? &*config : nullptr);

      if (report::discover_projects(analyze_input).empty()) {
        std::cerr << "analyze: no .sb3 projects under " << analyze_input << "\n";
        return kExitUsage;
      }
      report::BatchSummary summary =
          report::analyze_batch(analyze_input, analyze_out, options, provider.get());
      std::cout << report::summary_json(summary).dump(2) << "\n";
      if (summary.provider_unreachable) return kExitProviderUnreachable;
      if (!summary.failures.empty() || summary.analyzed < summary.projects)
        return kExitAnalysisErrors;
      return kExitOk;
    }

    if (cmd_rate->parsed()) {
      ir::Project project = ir::load_project_file(rate_file);
      rater::Variant variant =
          rate_variant == "plain" ? rater::Variant::Plain : rater::Variant::WithFramework;
      if (rate_prompt_only) {
        rater::RaterRequest request = rater::build_prompt(project, rate_description, variant);
        std::cout << request.prompt_text;
        return kExitOk;
      }
      std::unique_ptr<rater::Provider> provider =
          make_provider(rate_provider, config ? &*config : nullptr);
      rater::RateOptions rate_options;
      rate_options.repeats = rate_repeats;
      rater::RatingOutcome outcome = rater::rate_project(
          project, rate_description, variant, *provider, rate_options, {}, rate_provider.model);
      json sheets = json::array();
      for (const framework::RatingSheet& sheet : outcome.sheets) {
        json scores = json::object();
        for (const auto& [id, score] : sheet.scores) scores[id] = score.value;
        sheets.push_back({{"rater_id", sheet.rater_id},
                          {"project_id", sheet.project_id},
                          {"provenance", "model"},
                          {"verdict", framework::to_string(sheet.verdict)},
                          {"scores", scores}});
      }
      json errors = json::array();
      bool unreachable = false;
      for (const rater::RepetitionError& e : outcome.errors) {
        errors.push_back({{"repetition", e.repetition_index}, {"message", e.message}});
        if (e.provider_status == 0) unreachable = true;
      }
      json out = {{"project_id", project.source_path},
                  {"variant", rate_variant},
                  {"sheets", sheets},
                  {"errors", errors}};
      if (rate_out.empty())
        std::cout << out.dump(2) << "\n";
      else
        util::write_file(rate_out, out.dump(2) + "\n");
      if (unreachable) return kExitProviderUnreachable;
      return outcome.errors.empty() ? kExitOk : kExitAnalysisErrors;
    }

    if (cmd_generate->parsed()) {
      std::vector<genprompt::GenerationSpec> specs;
      if (gen_all) {
        for (std::string_view topic : genprompt::kTopics)
          for (bool inclusive : {false, true})
            specs.push_back({std::string(topic), inclusive, gen_seed});
      } else {
        if (gen_topic.empty()) {
          std::cerr << "generate: --topic or --all-topics is required\n";
          return kExitUsage;
        }
        specs.push_back({gen_topic, gen_inclusive, gen_seed});
      }
      if (gen_prompt_only) {
        for (const auto& spec : specs)
          std::cout << genprompt::build_generation_prompt(spec) << "\n";
        return kExitOk;
      }
      std::unique_ptr<rater::Provider> provider =
          make_provider(gen_provider, config ? &*config : nullptr);
      auto generated = genprompt::generate_batch(*provider, specs, gen_provider.model);
      json out = json::array();
      for (const auto& g : generated)
        out.push_back({{"topic", g.spec.topic},
                       {"inclusive", g.spec.inclusive},
                       {"seed", g.spec.seed},
                       {"description", g.description}});
      json doc = {{"schema", "stereoscan-descriptions/1"}, {"descriptions", out}};
      if (gen_out.empty())
        std::cout << doc.dump(2) << "\n";
      else
        util::write_file(gen_out, doc.dump(2) + "\n");
      return kExitOk;
    }

    if (cmd_quest->parsed()) {
      json doc = json::parse(util::read_file(quest_in));
      std::vector<genprompt::GeneratedDescription> descriptions;
      for (const json& d : doc.at("descriptions"))
        descriptions.push_back({{d.value("topic", ""), d.value("inclusive", false),
                                 d.value("seed", std::uint64_t{0})},
                                d.value("description", "")});
      auto questionnaires =
          genprompt::export_questionnaires(descriptions, quest_orders, quest_seed);
      std::filesystem::create_directories(quest_out_dir);
      for (const auto& q : questionnaires) {
        std::string base =
            (std::filesystem::path(quest_out_dir) /
             ("questionnaire_" + std::to_string(q.order_index + 1)))
                .string();
        util::write_file(base + ".json", genprompt::questionnaire_json(q).dump(2) + "\n");
        util::write_file(base + ".md", genprompt::questionnaire_markdown(q));
        std::cout << base << ".json\n";
      }
      return kExitOk;
    }

    if (cmd_stats->parsed()) {
      stats::NaPolicy policy =
          stats_na == "as_midpoint" ? stats::NaPolicy::AsMidpoint : stats::NaPolicy::Exclude;
      json out = json::object();
      std::vector<std::vector<double>> sigma_sets;
      const char* labels[] = {"a", "b"};
      for (std::size_t i = 0; i < ratings_files.size(); ++i) {
        json doc = json::parse(util::read_file(ratings_files[i]));
        auto sheets = sheets_from_ratings_file(doc);
        out[labels[i]] = stats_payload(sheets, policy);
        sigma_sets.push_back(sigmas_from_ratings_file(doc, policy));
      }
      if (sigma_sets.size() == 2 && !sigma_sets[0].empty() && !sigma_sets[1].empty()) {
        stats::MannWhitneyResult mw = stats::mann_whitney_u(sigma_sets[0], sigma_sets[1]);
        out["mannwhitney"] = {{"u", mw.u}, {"p_two_sided", mw.p_two_sided}, {"exact", mw.exact}};
      }
      std::cout << out.dump(2) << "\n";
      return kExitOk;
    }

    if (cmd_framework->parsed()) {
      if (framework_as_json) {
        json criteria = json::array();
        for (const framework::Criterion& criterion : framework::catalog())
          criteria.push_back({{"id", criterion.id},
                              {"category", framework::to_string(criterion.category)},
                              {"statement", criterion.statement},
                              {"source", framework::to_string(criterion.source)}});
        json doc = {{"criteria", criteria},
                    {"verdict_question", framework::verdict_question()}};
        std::cout << doc.dump(2) << "\n";
      } else {
        std::cout << framework::framework_prompt_block();
      }
      return kExitOk;
    }
  } catch (const rater::ProviderError& e) {
    std::cerr << e.what() << "\n";
    return e.status() == 0 ? kExitProviderUnreachable : kExitAnalysisErrors;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAnalysisErrors;
  }
  return kExitUsage;
}
