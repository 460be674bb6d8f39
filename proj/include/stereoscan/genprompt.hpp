#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "stereoscan/rater.hpp"

namespace stereoscan::genprompt {

// The Scratch starter-project categories.
inline constexpr std::array<std::string_view, 8> kTopics = {
    "animation",        "games",      "interactive art", "music",
    "stories",          "math and science", "extensions",
    "community and kindness",
};

bool is_valid_topic(std::string_view topic);

struct GenerationSpec {
  std::string topic;
  bool inclusive = false;
  std::uint64_t seed = 0;
};

// Tutorial-generation prompt; the framework criteria are injected only for
// inclusive specs. Throws std::invalid_argument on an unknown topic.
std::string build_generation_prompt(const GenerationSpec& spec);

struct GeneratedDescription {
  GenerationSpec spec;
  std::string description;
};

std::vector<GeneratedDescription> generate_batch(rater::Provider& provider,
                                                 std::span<const GenerationSpec> specs,
                                                 const std::string& model_name = "");

enum class Usability { AsIs, SomeMod, LotsMod, Not };

struct QuestionnaireItem {
  std::string item_id;  // anonymized: P01, P02, …
  std::string description;
};

struct Questionnaire {
  int order_index = 0;
  std::vector<QuestionnaireItem> items;  // seeded permutation of all descriptions
};

// n_orders randomized questionnaires; the variant provenance never appears
// in the documents. Throws StatsError-free std::invalid_argument on empty
// input.
std::vector<Questionnaire> export_questionnaires(
    std::span<const GeneratedDescription> descriptions, int n_orders = 3,
    std::uint64_t seed = 0);

nlohmann::json questionnaire_json(const Questionnaire& questionnaire);
std::string questionnaire_markdown(const Questionnaire& questionnaire);

const std::vector<std::string>& usability_options();

}  // namespace stereoscan::genprompt
