#include "stereoscan/rater.hpp"

#include <atomic>
#include <cctype>
#include <filesystem>
#include <regex>
#include <semaphore>
#include <sstream>
#include <thread>

#include "stereoscan/blocks_text.hpp"
#include "stereoscan/lexicon.hpp"
#include "stereoscan/util.hpp"

namespace stereoscan::rater {

namespace {

constexpr const char* kIntro =
    "I am teaching programming to children. We use the Scratch programming language.\n"
    "I have found a Scratch project I would like to use as a starter project. The children "
    "then extend it in class with their own ideas.\n";

constexpr const char* kCharactersHint =
    "Keep in mind that not only humans but also non-humans, animals, or objects can be "
    "characters and have gender-specific features.\n";

const char* verdict_tokens[] = {"@boy@", "@girl@", "@inclusive@"};

}  // namespace

std::string to_string(Variant variant) {
  return variant == Variant::Plain ? "plain" : "framework";
}

RaterRequest build_prompt(const ir::Project& project, const std::string& description,
                          Variant variant, const render::RenderOptions& render_options,
                          const std::string& model_name, std::optional<double> temperature) {
  RaterRequest request;
  request.variant = variant;
  request.model_name = model_name;
  request.temperature = temperature;

  std::ostringstream prompt;
  prompt << kIntro << "\n";
  prompt << "Here is the Scratch program in the ScratchBlocks format as you know it from the "
            "Scratch community forums:\n";
  prompt << text::emit_project(project);
  prompt << "It was described by the creator as: " << description << "\n";
  prompt << "I also give you the images of the sprites of the project and a screenshot of "
            "the whole stage as it appears at the start of the program.\n\n";

  if (variant == Variant::WithFramework) {
    prompt << "Researchers have identified the following checks to identify if a program is "
              "gender-inclusive:\n";
    prompt << framework::framework_prompt_block();
    prompt << "\n";
    prompt << kCharactersHint;
    prompt << "Answer the following question:\n";
    prompt << framework::verdict_question() << "\n\n";
    prompt << "Use the checks from the table above to form your answer.\n";
    prompt << "Answer each check on a five-point Likert scale ranging from 1=strongly agree "
              "to 5=strongly disagree, 3 representing neither agree nor disagree, or "
              "alternatively 0=not applicable.\n";
    prompt << "Output your answers as a list of the following format:\n";
    prompt << "<Identifier>: <score>.\n";
    prompt << "Use the <Identifier> from the first column of the table above and <score> as "
              "number between 0 and 5 on the Likert scale.\n";
    prompt << "Finally, give your conclusion as \"@boy@\", \"@girl@\", or \"@inclusive@\".\n";
  } else {
    prompt << framework::verdict_question() << "\n";
    prompt << kCharactersHint;
    prompt << "Explain your answer.\n";
    prompt << "Give your final answer as \"@boy@\", \"@girl@\", or \"@inclusive@\".\n";
  }
  request.prompt_text = prompt.str();

  for (const ir::Target& sprite : project.sprites) {
    if (sprite.current_costume >= sprite.costumes.size()) continue;
    const ir::Costume& costume = sprite.costumes[sprite.current_costume];
    img::RgbaImage raster =
        render::costume_image(project, sprite, costume, render_options, nullptr);
    request.images.emplace_back(sprite.name, img::encode_png(raster));
  }
  render::StageImage stage = render::render_stage(project, render_options, nullptr);
  request.images.emplace_back("stage", img::encode_png(stage.image));
  return request;
}

ParseResult parse_response(const std::string& raw, Variant variant) {
  static const std::regex score_line(R"(^\s*((?:CH|CO|IN|PR)\d{2})\s*:\s*([0-5])\s*$)",
                                     std::regex::icase);
  ParseResult result;
  std::map<std::string, framework::LikertScore> scores;
  std::vector<std::string> duplicates;

  for (const std::string& line : util::split_lines(raw)) {
    std::smatch m;
    if (!std::regex_match(line, m, score_line)) continue;
    std::string id = util::to_lower(m[1].str());
    for (char& c : id) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (framework::find_criterion(id) == nullptr) continue;
    int value = m[2].str()[0] - '0';
    auto it = scores.find(id);
    if (it != scores.end() && it->second.value != value) {
      result.issues.push_back({ParseIssue::Kind::DuplicateScore, id});
      continue;
    }
    scores[id] = framework::LikertScore{value};
  }

  std::size_t best_pos = std::string::npos;
  std::optional<framework::Verdict> verdict;
  for (const char* token : verdict_tokens) {
    std::size_t pos = raw.rfind(token);
    if (pos != std::string::npos && (best_pos == std::string::npos || pos > best_pos)) {
      best_pos = pos;
      std::string name(token + 1, std::strlen(token) - 2);
      verdict = framework::verdict_from_string(name);
    }
  }
  if (!verdict) {
    result.issues.push_back({ParseIssue::Kind::NoVerdict, ""});
    return result;
  }

  if (variant == Variant::WithFramework) {
    std::vector<std::string> missing;
    for (const framework::Criterion& criterion : framework::catalog())
      if (scores.find(criterion.id) == scores.end()) missing.push_back(criterion.id);
    if (!missing.empty()) {
      std::string detail;
      for (const std::string& id : missing) detail += (detail.empty() ? "" : ",") + id;
      result.issues.push_back({ParseIssue::Kind::MissingScores, detail});
      return result;
    }
  }
  if (!result.issues.empty()) return result;  // conflicting duplicates

  RaterResponse response;
  response.raw_text = raw;
  response.verdict = *verdict;
  if (variant == Variant::WithFramework) response.scores = std::move(scores);
  result.response = std::move(response);
  return result;
}

std::string render_response_text(const framework::RatingSheet& sheet) {
  std::ostringstream out;
  for (const framework::Criterion& criterion : framework::catalog()) {
    auto it = sheet.scores.find(criterion.id);
    if (it != sheet.scores.end())
      out << criterion.id << ": " << it->second.value << "\n";
  }
  out << "@" << framework::to_string(sheet.verdict) << "@\n";
  return out.str();
}

MockProvider::MockProvider() = default;

MockProvider::MockProvider(std::vector<std::string> script, bool repeat_last)
    : scripted_(true), repeat_last_(repeat_last), script_(std::move(script)) {}

std::string MockProvider::scripted_next() {
  if (script_.empty()) return "";
  if (cursor_ >= script_.size()) {
    if (repeat_last_) return script_.back();
    cursor_ = 0;  // cycle
  }
  return script_[cursor_++];
}

std::string MockProvider::complete(const RaterRequest& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  ++calls_;
  if (scripted_) return scripted_next();
  return derived_response(request);
}

std::string MockProvider::derived_response(const RaterRequest& request) {
  const std::string& prompt = request.prompt_text;

  // Generation prompts ask for a project description, not a rating.
  std::size_t topic_pos = prompt.find("The general topic for the project should be: '");
  if (topic_pos != std::string::npos && prompt.find("@boy@") == std::string::npos) {
    std::size_t start = prompt.find('\'', topic_pos) + 1;
    std::size_t end = prompt.find('\'', start);
    std::string topic = end == std::string::npos ? "scratch" : prompt.substr(start, end - start);
    std::string digest = util::sha256_hex(prompt).substr(0, 8);
    return "A starter project about " + topic +
           " where learners animate a simple scene, trigger events with the green flag, and "
           "experiment with their own ideas. Suggested sprites: two friendly shapes and a "
           "plain backdrop. (ref " + digest + ")";
  }

  // Rating prompts: code the sprite names with the same lexicon the
  // heuristics use so corpus fixtures behave predictably.
  const smells::NameLexicon& lexicon = smells::default_name_lexicon();
  bool female = false, male = false;
  for (const std::string& line : util::split_lines(prompt)) {
    if (!line.starts_with("== sprite: ")) continue;
    for (const std::string& token : util::word_tokens(line)) {
      if (lexicon.female.count(token) > 0) female = true;
      if (lexicon.male.count(token) > 0) male = true;
    }
  }
  std::string verdict = "@inclusive@";
  if (female && !male) verdict = "@girl@";
  if (male && !female) verdict = "@boy@";

  std::ostringstream out;
  if (request.variant == Variant::WithFramework) {
    out << "Assessment based on the provided checks.\n";
    bool coded = verdict != "@inclusive@";
    for (const framework::Criterion& criterion : framework::catalog()) {
      int score = 1;
      if (coded) {
        bool character_criterion = criterion.id[0] == 'C' && criterion.id[1] == 'H';
        score = character_criterion ? 4 : 2;
      }
      out << criterion.id << ": " << score << "\n";
    }
    out << verdict << "\n";
  } else {
    out << "The sprite names and imagery decide the audience here. " << verdict << "\n";
  }
  return out.str();
}

RatingOutcome rate_project(const ir::Project& project, const std::string& description,
                           Variant variant, Provider& provider, const RateOptions& options,
                           const render::RenderOptions& render_options,
                           const std::string& model_name, std::optional<double> temperature) {
  RaterRequest request =
      build_prompt(project, description, variant, render_options, model_name, temperature);

  std::string project_id = project.source_path.empty()
                               ? "project"
                               : std::filesystem::path(project.source_path).stem().string();

  int repeats = std::max(options.repeats, 0);
  std::vector<std::optional<framework::RatingSheet>> sheets(repeats);
  std::vector<std::optional<RepetitionError>> errors(repeats);
  std::vector<std::string> raw(repeats);

  std::counting_semaphore<64> gate(std::max(options.concurrency, 1));
  std::vector<std::thread> workers;
  workers.reserve(repeats);
  for (int i = 0; i < repeats; ++i) {
    workers.emplace_back([&, i] {
      gate.acquire();
      try {
        std::string text = provider.complete(request);
        ParseResult parsed = parse_response(text, variant);
        if (!parsed.ok()) {  // one retry per repetition
          text = provider.complete(request);
          parsed = parse_response(text, variant);
        }
        raw[i] = text;
        if (parsed.ok()) {
          framework::RatingSheet sheet;
          sheet.rater_id = options.rater_prefix + "#" + std::to_string(i);
          sheet.project_id = project_id;
          sheet.verdict = parsed.response->verdict;
          if (parsed.response->scores) sheet.scores = *parsed.response->scores;
          sheet.provenance = framework::Provenance::Model;
          sheets[i] = std::move(sheet);
        } else {
          std::string why;
          for (const ParseIssue& issue : parsed.issues) {
            switch (issue.kind) {
              case ParseIssue::Kind::NoVerdict: why += "NoVerdict "; break;
              case ParseIssue::Kind::MissingScores:
                why += "MissingScores(" + issue.detail + ") ";
                break;
              case ParseIssue::Kind::DuplicateScore:
                why += "DuplicateScore(" + issue.detail + ") ";
                break;
            }
          }
          errors[i] = RepetitionError{i, "ParseFailedAfterRetry: " + why};
        }
      } catch (const ProviderError& e) {
        errors[i] = RepetitionError{i, e.what(), e.status()};
      } catch (const std::exception& e) {
        errors[i] = RepetitionError{i, e.what()};
      }
      gate.release();
    });
  }
  for (std::thread& worker : workers) worker.join();

  RatingOutcome outcome;
  for (int i = 0; i < repeats; ++i) {
    if (sheets[i]) outcome.sheets.push_back(std::move(*sheets[i]));
    if (errors[i]) outcome.errors.push_back(*errors[i]);
    outcome.raw_responses.emplace_back(i, raw[i]);
  }
  return outcome;
}

}  // namespace stereoscan::rater
