#include "stereoscan/genprompt.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "stereoscan/framework.hpp"
#include "stereoscan/util.hpp"

namespace stereoscan::genprompt {

using nlohmann::json;

bool is_valid_topic(std::string_view topic) {
  return std::find(kTopics.begin(), kTopics.end(), topic) != kTopics.end();
}

std::string build_generation_prompt(const GenerationSpec& spec) {
  if (!is_valid_topic(spec.topic))
    throw std::invalid_argument("unknown project topic: " + spec.topic);

  std::ostringstream prompt;
  prompt << "I am teaching programming to children. We use the Scratch programming "
            "language.\n";
  prompt << "I need help to create a Scratch project the children can implement to learn "
            "basic programming concepts.\n\n";
  if (spec.inclusive) {
    prompt << "The project should be gender-inclusive.\n";
    prompt << "As a guideline, researchers have identified the following criteria to check "
              "whether a project is gender-inclusive:\n";
    prompt << framework::framework_prompt_block();
    prompt << "\n";
  }
  prompt << "If it makes sense, the project should contain basic programming concepts like "
            "conditions and other control structures.\n";
  prompt << "Keep in mind that the children are beginners. Do not include too many "
            "programming concepts at once.\n\n";
  prompt << "The general topic for the project should be: '" << spec.topic << "'\n\n";
  prompt << "Describe a Scratch project that fulfils the requirements above.\n";
  prompt << "Focus on the project design, features, and programming concepts in your "
            "description.\n";
  prompt << "I also want to demonstrate the children an example of this project at the "
            "beginning of the class to get them motivated.\n";
  prompt << "Describe which sprite and background images I should choose for this example "
            "demonstration.\n";
  prompt << "You should not output any code. The project and example image descriptions "
            "are enough.\n";
  return prompt.str();
}

std::vector<GeneratedDescription> generate_batch(rater::Provider& provider,
                                                 std::span<const GenerationSpec> specs,
                                                 const std::string& model_name) {
  std::vector<GeneratedDescription> out;
  out.reserve(specs.size());
  for (const GenerationSpec& spec : specs) {
    rater::RaterRequest request;
    request.prompt_text = build_generation_prompt(spec);
    request.model_name = model_name;
    request.variant = rater::Variant::Plain;
    out.push_back({spec, provider.complete(request)});
  }
  return out;
}

const std::vector<std::string>& usability_options() {
  static const std::vector<std::string> options = {
      "as-is",
      "with some modifications",
      "with lots of modifications",
      "not at all",
  };
  return options;
}

std::vector<Questionnaire> export_questionnaires(
    std::span<const GeneratedDescription> descriptions, int n_orders, std::uint64_t seed) {
  if (descriptions.empty())
    throw std::invalid_argument("no descriptions to export");

  std::vector<Questionnaire> questionnaires;
  for (int order = 0; order < n_orders; ++order) {
    Questionnaire q;
    q.order_index = order;
    std::vector<std::size_t> perm =
        util::seeded_permutation(descriptions.size(), seed + static_cast<std::uint64_t>(order));
    for (std::size_t pos : perm) {
      std::ostringstream id;
      id << "P" << std::setw(2) << std::setfill('0') << (pos + 1);
      q.items.push_back({id.str(), descriptions[pos].description});
    }
    questionnaires.push_back(std::move(q));
  }
  return questionnaires;
}

json questionnaire_json(const Questionnaire& questionnaire) {
  json criteria = json::array();
  for (const framework::Criterion& criterion : framework::catalog())
    criteria.push_back({{"id", criterion.id}, {"statement", criterion.statement}});

  json items = json::array();
  for (const QuestionnaireItem& item : questionnaire.items)
    items.push_back({{"item_id", item.item_id}, {"description", item.description}});

  return json{
      {"schema", "stereoscan-questionnaire/1"},
      {"order_index", questionnaire.order_index},
      {"scale",
       "1=strongly agree to 5=strongly disagree, 3 neither agree nor disagree, 0=not "
       "applicable"},
      {"criteria", criteria},
      {"verdict_question", framework::verdict_question()},
      {"usability_question",
       {{"text", "Would you use this program in your classroom?"},
        {"options", usability_options()}}},
      {"items", items},
  };
}

std::string questionnaire_markdown(const Questionnaire& questionnaire) {
  std::ostringstream out;
  out << "# Project questionnaire (order " << questionnaire.order_index + 1 << ")\n\n";
  out << "Rate each statement from 1 (strongly agree) to 5 (strongly disagree); 3 means "
         "neither agree nor disagree, 0 means not applicable.\n\n";
  for (const QuestionnaireItem& item : questionnaire.items) {
    out << "## " << item.item_id << "\n\n";
    out << item.description << "\n\n";
    out << "| Identifier | Statement | Score (0-5) |\n";
    out << "|---|---|---|\n";
    for (const framework::Criterion& criterion : framework::catalog())
      out << "| " << criterion.id << " | " << criterion.statement << " |  |\n";
    out << "\n";
    out << framework::verdict_question() << "\n\n";
    out << "Would you use this program in your classroom? ";
    bool first = true;
    for (const std::string& option : usability_options()) {
      if (!first) out << " / ";
      out << option;
      first = false;
    }
    out << "\n\n";
  }
  return out.str();
}

}  // namespace stereoscan::genprompt
