#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stereoscan::framework {

enum class Category { Characters, Content, Instructions, ProgrammingConcepts };

enum class Source { Bhargava, Heemskerk, New };

struct Criterion {
  std::string id;  // CH01..CH05, CO01..CO07, IN01, IN02, PR01..PR04
  Category category;
  std::string statement;
  Source source;
};

// 0 = not applicable, 1 = strongly agree … 5 = strongly disagree.
// Lower non-zero scores mean fewer stereotype smells.
struct LikertScore {
  int value = 0;
  bool is_na() const { return value == 0; }
  bool operator==(const LikertScore&) const = default;
};

enum class Verdict { Boy, Girl, Inclusive };

std::string to_string(Verdict verdict);
std::optional<Verdict> verdict_from_string(const std::string& s);

enum class Provenance { Human, Model };

struct RatingSheet {
  std::string rater_id;
  std::string project_id;
  std::map<std::string, LikertScore> scores;  // keyed by criterion id, all 18
  Verdict verdict = Verdict::Inclusive;
  Provenance provenance = Provenance::Model;
};

class SheetError : public std::runtime_error {
 public:
  enum class Kind { MissingCriterion, InvalidScore, UnknownCriterion };
  SheetError(Kind kind, const std::string& detail);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// The 18 scored criteria in catalog order (CH, CO, IN, PR). The verdict
// question is asked separately and is not part of the catalog.
const std::vector<Criterion>& catalog();

const Criterion* find_criterion(const std::string& id);

// The final question put to raters, kept verbatim for prompt assembly.
const std::string& verdict_question();

// Two-column "Identifier  Description" block listing all 18 criteria;
// byte-stable across calls.
std::string framework_prompt_block();

// Returns the sheet unchanged iff it carries exactly the 18 catalog ids
// with values in 0..5; throws SheetError otherwise.
const RatingSheet& validate_sheet(const RatingSheet& sheet);

std::string to_string(Category category);
std::string to_string(Source source);

}  // namespace stereoscan::framework
