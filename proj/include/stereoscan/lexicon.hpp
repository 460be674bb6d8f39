#pragma once

#include <set>
#include <string>
#include <vector>

namespace stereoscan::smells {

// Gender-coded given names and character nouns, lowercase tokens.
struct NameLexicon {
  std::set<std::string> female;
  std::set<std::string> male;
};

struct TextLexicons {
  std::set<std::string> violence;             // single-word terms
  std::set<std::string> competition_vars;     // variable-name markers
  std::vector<std::string> competition_phrases;  // matched as substrings
};

// Built-in English defaults; the data/lexicons files carry the same terms
// and are the override point.
const NameLexicon& default_name_lexicon();
const TextLexicons& default_text_lexicons();

// One term per line, '#' comments, blanks ignored; terms lowercased.
std::set<std::string> load_term_file(const std::string& path);
NameLexicon load_name_lexicon(const std::string& female_path, const std::string& male_path);

}  // namespace stereoscan::smells
