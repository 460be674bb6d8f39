#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "stereoscan/report.hpp"
#include "stereoscan/util.hpp"
#include "support/fixtures.hpp"
#include "support/schema_check.hpp"

using namespace stereoscan;
using nlohmann::json;

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  std::string command = std::string(testsupport::cli_path()) + " " + args + " 2>&1";
  CliResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  while (std::size_t n = fread(buffer, 1, sizeof(buffer), pipe))
    result.output.append(buffer, n);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_fixture_corpus(const fs::path& dir) {
  auto write = [&](const std::string& name, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(dir / name, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  };
  write("minimal.sb3", testsupport::minimal_stage_project());
  write("starter.sb3", testsupport::starter_fixture());
  write("dressup.sb3", testsupport::dressup_fixture());
  write("paintbox.sb3", testsupport::paintbox_fixture());
  return dir;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file())
      files[fs::relative(entry.path(), dir).string()] = util::read_file(entry.path().string());
  return files;
}

}  // namespace

TEST_CASE("analyze without rater: heuristics and hashes only") {
  report::AnalyzeOptions options;
  options.run_rater = false;
  options.deterministic = true;
  ir::Project project = ir::load_project(testsupport::dressup_fixture(), "dressup.sb3");
  report::AnalysisReport result = report::analyze_project(project, options, nullptr);

  CHECK(result.project_id == "dressup");
  CHECK(result.sprite_count == 1);
  CHECK(result.scratchblocks_sha256.size() == 64);
  CHECK(result.detector_config_sha256.size() == 64);
  CHECK_FALSE(result.smells.empty());
  CHECK(result.not_assessed.size() == 12);
  CHECK(result.ratings.empty());
  CHECK(result.meta.timestamp.empty());
}

TEST_CASE("analyze with the mock rater aggregates sheets per variant") {
  report::AnalyzeOptions options;
  options.deterministic = true;
  options.variants = {rater::Variant::Plain, rater::Variant::WithFramework};
  rater::MockProvider provider;
  ir::Project project = ir::load_project(testsupport::dressup_fixture(), "dressup.sb3");
  report::AnalysisReport result = report::analyze_project(project, options, &provider);

  REQUIRE(result.ratings.size() == 2);
  const report::VariantRating* framework_rating = nullptr;
  const report::VariantRating* plain_rating = nullptr;
  for (const auto& rating : result.ratings) {
    if (rating.variant == "framework") framework_rating = &rating;
    if (rating.variant == "plain") plain_rating = &rating;
  }
  REQUIRE(framework_rating != nullptr);
  REQUIRE(plain_rating != nullptr);

  CHECK(framework_rating->sheets.size() == 5);
  CHECK(framework_rating->aggregates.tally.girls == 5);
  CHECK(framework_rating->aggregates.tally.gendered_flag);
  REQUIRE(framework_rating->aggregates.score.has_value());
  CHECK(framework_rating->aggregates.score->n_scores == 90);
  CHECK(framework_rating->aggregates.means.at("CH01").mean == doctest::Approx(4.0));

  CHECK(plain_rating->sheets.size() == 5);
  CHECK_FALSE(plain_rating->aggregates.score.has_value());  // verdicts only
  CHECK(plain_rating->aggregates.tally.gendered_flag);
}

TEST_CASE("report json round-trips losslessly and validates against the schema") {
  report::AnalyzeOptions options;
  options.deterministic = true;
  rater::MockProvider provider;
  ir::Project project = ir::load_project(testsupport::starter_fixture(), "starter.sb3");
  report::AnalysisReport original = report::analyze_project(project, options, &provider);

  json first = report::report_json(original);
  report::AnalysisReport reparsed = report::report_from_json(first);
  json second = report::report_json(reparsed);
  CHECK(first.dump() == second.dump());

  json schema = json::parse(
      util::read_file(testsupport::test_dir() + "/../docs/report.schema.json"));
  auto violations = testsupport::schema_violations(schema, first);
  for (const auto& violation : violations) INFO(violation);
  CHECK(violations.empty());
}

TEST_CASE("markdown rendering") {
  report::AnalyzeOptions options;
  options.deterministic = true;
  options.run_rater = false;

  SUBCASE("clean project prints the no-smells line") {
    ir::Project project = ir::load_project(testsupport::paintbox_fixture(), "paintbox.sb3");
    auto result = report::analyze_project(project, options, nullptr);
    std::string md = report::render_markdown(result);
    CHECK(md.find("No heuristic smells detected.") != std::string::npos);
  }
  SUBCASE("smelly project lists criterion rows and is deterministic") {
    ir::Project project = ir::load_project(testsupport::dressup_fixture(), "dressup.sb3");
    auto result = report::analyze_project(project, options, nullptr);
    std::string md = report::render_markdown(result);
    CHECK(md.find("| CH01 |") != std::string::npos);
    CHECK(md.find("| PR01 |") != std::string::npos);
    CHECK(md == report::render_markdown(result));
  }
  SUBCASE("sigma prints with two decimals") {
    rater::MockProvider provider;
    report::AnalyzeOptions rated;
    rated.deterministic = true;
    ir::Project project = ir::load_project(testsupport::dressup_fixture(), "dressup.sb3");
    auto result = report::analyze_project(project, rated, &provider);
    std::string md = report::render_markdown(result);
    // Mock sheet: 5 criteria at 4 (CH) + 13 at 2 -> sigma = (5*4+13*2)/18.
    CHECK(md.find("Overall framework score: 2.56") != std::string::npos);
  }
}

TEST_CASE("batch analysis over the fixture corpus") {
  fs::path corpus = fresh_dir("stereoscan_corpus");
  write_fixture_corpus(corpus);

  report::AnalyzeOptions options;
  options.deterministic = true;
  options.jobs = 2;
  rater::MockProvider provider;

  fs::path out1 = fresh_dir("stereoscan_out1");
  report::BatchSummary summary =
      report::analyze_batch(corpus.string(), out1.string(), options, &provider);
  CHECK(summary.projects == 4);
  CHECK(summary.analyzed == 4);
  CHECK(summary.failures.empty());
  CHECK(summary.flagged == 1);  // dressup only
  CHECK(summary.flagged_percent == doctest::Approx(25.0));
  REQUIRE(summary.kappa_verdict.has_value());
  CHECK(*summary.kappa_verdict == doctest::Approx(1.0));  // mock repeats agree

  for (const char* name : {"minimal", "starter", "dressup", "paintbox"}) {
    CHECK(fs::exists(out1 / (std::string(name) + ".report.json")));
    CHECK(fs::exists(out1 / (std::string(name) + ".report.md")));
  }
  CHECK(fs::exists(out1 / "summary.json"));

  SUBCASE("two runs are byte-identical") {
    fs::path out2 = fresh_dir("stereoscan_out2");
    rater::MockProvider provider2;
    report::analyze_batch(corpus.string(), out2.string(), options, &provider2);
    auto tree1 = read_tree(out1);
    auto tree2 = read_tree(out2);
    REQUIRE(tree1.size() == tree2.size());
    for (const auto& [name, content] : tree1) {
      INFO(name);
      CHECK(content == tree2.at(name));
    }
  }

  SUBCASE("corrupt member is recorded while the batch continues") {
    util::write_file((corpus / "broken.sb3").string(), "not a zip");
    fs::path out3 = fresh_dir("stereoscan_out3");
    rater::MockProvider provider3;
    report::BatchSummary with_error =
        report::analyze_batch(corpus.string(), out3.string(), options, &provider3);
    CHECK(with_error.projects == 5);
    CHECK(with_error.analyzed == 4);
    REQUIRE(with_error.failures.size() == 1);
    CHECK(with_error.failures[0].error.find("NotZip") != std::string::npos);
  }

  fs::remove_all(corpus);
}

TEST_CASE("cli: blocks prints scratchblocks text") {
  fs::path dir = fresh_dir("stereoscan_cli_fx");
  write_fixture_corpus(dir);
  auto result = run_cli("blocks " + (dir / "starter.sb3").string());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("== sprite: Ship ==") != std::string::npos);
  CHECK(result.output.find("when green flag clicked") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("cli: render writes the stage png") {
  fs::path dir = fresh_dir("stereoscan_cli_render");
  write_fixture_corpus(dir);
  fs::path out = dir / "stage.png";
  auto result = run_cli("render " + (dir / "minimal.sb3").string() + " -o " + out.string());
  CHECK(result.exit_code == 0);
  REQUIRE(fs::exists(out));
  std::string png = util::read_file(out.string());
  CHECK(png.substr(1, 3) == "PNG");
  fs::remove_all(dir);
}

TEST_CASE("cli: exit codes") {
  SUBCASE("usage error on unknown subcommand") {
    CHECK(run_cli("definitely-not-a-command").exit_code == 1);
  }
  SUBCASE("usage error on missing input") {
    CHECK(run_cli("analyze /does/not/exist --no-llm -o /tmp/ss_na").exit_code == 1);
  }
  SUBCASE("analysis errors yield exit 2") {
    fs::path dir = fresh_dir("stereoscan_cli_err");
    util::write_file((dir / "broken.sb3").string(), "junk");
    auto result = run_cli("analyze " + dir.string() + " --no-llm -o " + dir.string() + "/out");
    CHECK(result.exit_code == 2);
    fs::remove_all(dir);
  }
  SUBCASE("clean heuristics-only analysis yields exit 0") {
    fs::path dir = fresh_dir("stereoscan_cli_ok");
    write_fixture_corpus(dir);
    auto result =
        run_cli("analyze " + dir.string() + " --no-llm -o " + dir.string() + "/out");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("\"flagged\": 0") != std::string::npos);
    fs::remove_all(dir);
  }
  SUBCASE("unreachable provider yields exit 3") {
    fs::path dir = fresh_dir("stereoscan_cli_prov");
    write_fixture_corpus(dir);
    auto result = run_cli("rate " + (dir / "minimal.sb3").string() +
                          " --base-url http://127.0.0.1:9 --repeats 1 --max-retries 0");
    CHECK(result.exit_code == 3);
    fs::remove_all(dir);
  }
}

TEST_CASE("cli: stats command merges two ratings files with mann-whitney") {
  fs::path dir = fresh_dir("stereoscan_cli_stats");
  auto make_ratings = [&](const std::string& name, int base) {
    json projects = json::array();
    for (int p = 0; p < 6; ++p) {
      json sheets = json::array();
      for (int r = 0; r < 3; ++r) {
        json scores = json::object();
        for (const auto& criterion : framework::catalog())
          scores[criterion.id] = std::min(5, base + (p + r) % 2);
        sheets.push_back({{"rater_id", "h" + std::to_string(r)},
                          {"project_id", "p" + std::to_string(p)},
                          {"provenance", "human"},
                          {"verdict", "inclusive"},
                          {"scores", scores}});
      }
      projects.push_back({{"project_id", "p" + std::to_string(p)}, {"sheets", sheets}});
    }
    json doc = {{"projects", projects}};
    util::write_file((dir / name).string(), doc.dump());
  };
  make_ratings("a.json", 4);
  make_ratings("b.json", 1);
  auto result =
      run_cli("stats --ratings " + (dir / "a.json").string() + " " + (dir / "b.json").string());
  CHECK(result.exit_code == 0);
  json out = json::parse(result.output);
  CHECK(out.at("a").at("sigma").get<double>() > out.at("b").at("sigma").get<double>());
  REQUIRE(out.contains("mannwhitney"));
  CHECK(out.at("mannwhitney").at("p_two_sided").get<double>() < 0.01);
  CHECK(out.at("a").contains("kappa_verdict"));
  fs::remove_all(dir);
}

TEST_CASE("cli: framework --json lists all criteria with sources") {
  auto result = run_cli("framework --json");
  CHECK(result.exit_code == 0);
  json doc = json::parse(result.output);
  REQUIRE(doc.at("criteria").size() == 18);
  CHECK(doc.at("criteria")[8].at("id") == "CO04");
  CHECK(doc.at("criteria")[8].at("source") == "Heemskerk");
}

TEST_CASE("cli: end-to-end generate then questionnaire") {
  fs::path dir = fresh_dir("stereoscan_cli_gen");
  auto gen = run_cli("generate --all-topics --mock -o " + (dir / "desc.json").string());
  CHECK(gen.exit_code == 0);
  json desc = json::parse(util::read_file((dir / "desc.json").string()));
  CHECK(desc.at("descriptions").size() == 16);

  auto quest = run_cli("questionnaire --in " + (dir / "desc.json").string() +
                       " --orders 3 --seed 5 --out-dir " + dir.string());
  CHECK(quest.exit_code == 0);
  for (int i = 1; i <= 3; ++i) {
    CHECK(fs::exists(dir / ("questionnaire_" + std::to_string(i) + ".json")));
    CHECK(fs::exists(dir / ("questionnaire_" + std::to_string(i) + ".md")));
  }
  json q1 = json::parse(util::read_file((dir / "questionnaire_1.json").string()));
  CHECK(q1.at("items").size() == 16);
  fs::remove_all(dir);
}
