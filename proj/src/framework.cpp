#include "stereoscan/framework.hpp"

#include <sstream>

namespace stereoscan::framework {

namespace {

std::vector<Criterion> build_catalog() {
  using C = Category;
  using S = Source;
  return {
      {"CH01", C::Characters, "Female and male characters are equally represented.",
       S::Bhargava},
      {"CH02", C::Characters,
       "Active and passive behaviors are equally distributed between female and male "
       "characters.",
       S::Bhargava},
      {"CH03", C::Characters,
       "Female characters are presented in problem solving & leadership roles.", S::Bhargava},
      {"CH04", C::Characters, "The characters are not stereotyped by occupational roles.",
       S::Bhargava},
      {"CH05", C::Characters,
       "The types of emotional statements attributed to females and males are not "
       "stereotypic.",
       S::Bhargava},
      {"CO01", C::Content, "The project is free of sexist language.", S::Bhargava},
      {"CO02", C::Content,
       "The extent and frequency of aggressive and/or destructive behaviors is limited or "
       "non-existent.",
       S::Bhargava},
      {"CO03", C::Content, "Content and overall style of the project appeal to girls & boys.",
       S::Bhargava},
      {"CO04", C::Content,
       "The preferences of different groups are taken into account in the visual interface "
       "(e.g. bright vs dark colours).",
       S::Heemskerk},
      {"CO05", C::Content, "Non-human objects are not assumed to be male.", S::Bhargava},
      {"CO06", C::Content,
       "The number of elements of competitiveness vs. cooperation is balanced.", S::Bhargava},
      {"CO07", C::Content,
       "Themes and scenarios reflect diverse interests beyond stereotypical gender "
       "preferences.",
       S::New},
      {"IN01", C::Instructions,
       "The project addresses different kinds of skills (e.g. writing, drawing).",
       S::Heemskerk},
      {"IN02", C::Instructions,
       "The project is made in such a flexible manner that students can alter parts to "
       "their preference (e.g. own sprites).",
       S::Heemskerk},
      {"PR01", C::ProgrammingConcepts,
       "Basic programming concepts (i.e., loops, conditionals) are used.", S::New},
      {"PR02", C::ProgrammingConcepts, "The project complexity is appropriate for beginners.",
       S::New},
      {"PR03", C::ProgrammingConcepts,
       "The project presents programming as having diverse applications beyond games and "
       "competition.",
       S::New},
      {"PR04", C::ProgrammingConcepts,
       "Creative and artistic programming features are balanced with logical or "
       "computational elements.",
       S::New},
  };
}

}  // namespace

SheetError::SheetError(Kind kind, const std::string& detail)
    : std::runtime_error([&] {
        switch (kind) {
          case Kind::MissingCriterion: return "MissingCriterion: " + detail;
          case Kind::InvalidScore: return "InvalidScore: " + detail;
          case Kind::UnknownCriterion: return "UnknownCriterion: " + detail;
        }
        return "SheetError: " + detail;
      }()),
      kind_(kind) {}

const std::vector<Criterion>& catalog() {
  static const std::vector<Criterion> criteria = build_catalog();
  return criteria;
}

const Criterion* find_criterion(const std::string& id) {
  for (const Criterion& criterion : catalog())
    if (criterion.id == id) return &criterion;
  return nullptr;
}

const std::string& verdict_question() {
  static const std::string question =
      "Is the program targeted towards boys, girls, or is it gender-inclusive?";
  return question;
}

std::string framework_prompt_block() {
  std::ostringstream out;
  out << "Identifier  Description\n";
  for (const Criterion& criterion : catalog())
    out << criterion.id << "        " << criterion.statement << "\n";
  return out.str();
}

const RatingSheet& validate_sheet(const RatingSheet& sheet) {
  for (const auto& [id, score] : sheet.scores) {
    if (find_criterion(id) == nullptr)
      throw SheetError(SheetError::Kind::UnknownCriterion, id);
    if (score.value < 0 || score.value > 5)
      throw SheetError(SheetError::Kind::InvalidScore,
                       id + "=" + std::to_string(score.value));
  }
  for (const Criterion& criterion : catalog())
    if (sheet.scores.find(criterion.id) == sheet.scores.end())
      throw SheetError(SheetError::Kind::MissingCriterion, criterion.id);
  return sheet;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Boy: return "boy";
    case Verdict::Girl: return "girl";
    case Verdict::Inclusive: return "inclusive";
  }
  return "inclusive";
}

std::optional<Verdict> verdict_from_string(const std::string& s) {
  if (s == "boy") return Verdict::Boy;
  if (s == "girl") return Verdict::Girl;
  if (s == "inclusive") return Verdict::Inclusive;
  return std::nullopt;
}

std::string to_string(Category category) {
  switch (category) {
    case Category::Characters: return "Characters";
    case Category::Content: return "Content";
    case Category::Instructions: return "Instructions";
    case Category::ProgrammingConcepts: return "Programming Concepts";
  }
  return "";
}

std::string to_string(Source source) {
  switch (source) {
    case Source::Bhargava: return "Bhargava";
    case Source::Heemskerk: return "Heemskerk";
    case Source::New: return "New";
  }
  return "";
}

}  // namespace stereoscan::framework
