#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "stereoscan/framework.hpp"
#include "stereoscan/scratch_ir.hpp"
#include "stereoscan/stage_render.hpp"

namespace stereoscan::rater {

enum class Variant { Plain, WithFramework };

std::string to_string(Variant variant);

struct RaterRequest {
  std::string prompt_text;
  // Costume exports (label = sprite name) followed by the stage screenshot.
  std::vector<std::pair<std::string, std::vector<std::uint8_t>>> images;
  Variant variant = Variant::Plain;
  std::string model_name;
  std::optional<double> temperature;
};

class ProviderError : public std::runtime_error {
 public:
  ProviderError(int status, const std::string& body)
      : std::runtime_error("ProviderError(" + std::to_string(status) + "): " + body),
        status_(status),
        body_(body) {}
  int status() const { return status_; }  // 0 = unreachable
  const std::string& body() const { return body_; }

 private:
  int status_;
  std::string body_;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string complete(const RaterRequest& request) = 0;
  virtual std::string name() const = 0;
};

// Deterministic test double. Scripted mode replays canned responses;
// the default mode derives a stable response from the request text, rating
// by the same name lexicon the heuristics use.
class MockProvider : public Provider {
 public:
  MockProvider();  // deterministic function of the request
  explicit MockProvider(std::vector<std::string> script, bool repeat_last = false);

  std::string complete(const RaterRequest& request) override;
  std::string name() const override { return "mock"; }

  std::size_t calls() const { return calls_; }

 private:
  std::string scripted_next();
  static std::string derived_response(const RaterRequest& request);

  bool scripted_ = false;
  bool repeat_last_ = false;
  std::vector<std::string> script_;
  std::size_t cursor_ = 0;
  std::size_t calls_ = 0;
  std::mutex mutex_;
};

struct RaterResponse {
  std::string raw_text;
  std::optional<std::map<std::string, framework::LikertScore>> scores;
  framework::Verdict verdict = framework::Verdict::Inclusive;
  int repetition_index = 0;
};

struct ParseIssue {
  enum class Kind { NoVerdict, MissingScores, DuplicateScore };
  Kind kind;
  std::string detail;
};

struct ParseResult {
  std::optional<RaterResponse> response;
  std::vector<ParseIssue> issues;
  bool ok() const { return response.has_value() && issues.empty(); }
};

// Assembles the rating prompt with scratchblocks text, creator description,
// per-sprite costume images, and the stage screenshot.
RaterRequest build_prompt(const ir::Project& project, const std::string& description,
                          Variant variant, const render::RenderOptions& render_options = {},
                          const std::string& model_name = "",
                          std::optional<double> temperature = std::nullopt);

// Total on arbitrary text; never throws. Scores come from lines matching
// "<Identifier>: <score>", the verdict from the last @boy@/@girl@/@inclusive@.
ParseResult parse_response(const std::string& raw, Variant variant);

// Canonical response text for a sheet; parse_response() inverts it.
std::string render_response_text(const framework::RatingSheet& sheet);

struct RateOptions {
  int repeats = 5;
  int concurrency = 4;
  std::string rater_prefix = "model";
};

struct RepetitionError {
  int repetition_index = 0;
  std::string message;
  int provider_status = -1;  // ProviderError status; 0 = unreachable
};

struct RatingOutcome {
  std::vector<framework::RatingSheet> sheets;  // sorted by repetition index
  std::vector<RepetitionError> errors;         // parse failures after retry
  std::vector<std::pair<int, std::string>> raw_responses;  // (repetition, text)
};

// Runs `repeats` repetitions of the same prompt, bounded concurrency,
// one retry per failed parse; errors are recorded, never thrown.
RatingOutcome rate_project(const ir::Project& project, const std::string& description,
                           Variant variant, Provider& provider,
                           const RateOptions& options = {},
                           const render::RenderOptions& render_options = {},
                           const std::string& model_name = "",
                           std::optional<double> temperature = std::nullopt);

}  // namespace stereoscan::rater
