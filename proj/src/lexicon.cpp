#include "stereoscan/lexicon.hpp"

#include "stereoscan/util.hpp"

namespace stereoscan::smells {

namespace {

// Kept in sync with data/lexicons/*.txt; a test pins the equivalence.
constexpr const char* kFemaleTerms[] = {
    // given names
    "abby", "ada", "amara", "amy", "anna", "anina", "avery", "bella", "cassy", "dani",
    "daisy", "dorothy", "elena", "ellie", "emily", "emma", "grace", "hannah", "isla",
    "jessica", "jordyn", "kiki", "lily", "lucy", "maria", "mia", "nora", "olivia",
    "penny", "priya", "rosie", "ruby", "sasha", "sofia", "sophie", "tatiana", "taylor",
    "tera", "trisha", "wanda", "zoe",
    // character nouns
    "ballerina", "bride", "duchess", "fairy", "girl", "girls", "grandma", "lady",
    "mermaid", "mother", "mom", "mum", "princess", "queen", "sister", "witch", "woman",
    "women",
};

constexpr const char* kMaleTerms[] = {
    // given names
    "ben", "bruno", "carlos", "dan", "dean", "devin", "ethan", "harry", "henry", "jack",
    "jake", "james", "jay", "jamal", "leo", "marco", "max", "noah", "oliver", "pedro",
    "ryan", "sam", "tom", "victor", "william",
    // character nouns
    "boy", "boys", "brother", "dad", "duke", "father", "grandpa", "king", "knight",
    "lord", "man", "men", "prince", "sir", "uncle", "warrior", "wizard",
};

constexpr const char* kViolenceTerms[] = {
    "attack", "battle", "blast", "bomb", "crush", "dead", "death", "destroy", "die",
    "enemies", "enemy", "explode", "explosion", "fight", "gun", "kill", "laser",
    "missile", "punch", "shoot", "shot", "slay", "smash", "sword", "war", "weapon",
};

constexpr const char* kCompetitionVars[] = {
    "health", "highscore", "hiscore", "lives", "points", "score",
};

constexpr const char* kCompetitionPhrases[] = {
    "final score", "game over", "you lose", "you win",
};

}  // namespace

const NameLexicon& default_name_lexicon() {
  static const NameLexicon lexicon = [] {
    NameLexicon l;
    for (const char* t : kFemaleTerms) l.female.insert(t);
    for (const char* t : kMaleTerms) l.male.insert(t);
    return l;
  }();
  return lexicon;
}

const TextLexicons& default_text_lexicons() {
  static const TextLexicons lexicons = [] {
    TextLexicons l;
    for (const char* t : kViolenceTerms) l.violence.insert(t);
    for (const char* t : kCompetitionVars) l.competition_vars.insert(t);
    for (const char* t : kCompetitionPhrases) l.competition_phrases.push_back(t);
    return l;
  }();
  return lexicons;
}

std::set<std::string> load_term_file(const std::string& path) {
  std::set<std::string> terms;
  for (const std::string& raw : util::split_lines(util::read_file(path))) {
    std::string line = util::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    terms.insert(util::to_lower(line));
  }
  return terms;
}

NameLexicon load_name_lexicon(const std::string& female_path, const std::string& male_path) {
  NameLexicon lexicon;
  lexicon.female = load_term_file(female_path);
  lexicon.male = load_term_file(male_path);
  return lexicon;
}

}  // namespace stereoscan::smells
