#include "stereoscan/smells.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "stereoscan/framework.hpp"
#include "stereoscan/util.hpp"

namespace stereoscan::smells {

namespace {

bool is_loop(const std::string& opcode) {
  return opcode == "control_repeat" || opcode == "control_forever" ||
         opcode == "control_repeat_until";
}

bool is_conditional(const std::string& opcode) {
  return opcode == "control_if" || opcode == "control_if_else";
}

bool is_wait(const std::string& opcode) {
  return opcode == "control_wait" || opcode == "control_wait_until";
}

// Members of a script: the next-chain from the root plus all input blocks.
void collect_script_blocks(const ir::Target& target, const std::string& root,
                           std::vector<const ir::Block*>* out) {
  auto it = target.blocks.find(root);
  while (it != target.blocks.end()) {
    const ir::Block& block = it->second;
    out->push_back(&block);
    for (const auto& [name, input] : block.inputs)
      if (input.kind == ir::Input::Kind::Block) collect_script_blocks(target, input.ref_id, out);
    it = block.next ? target.blocks.find(*block.next) : target.blocks.end();
  }
}

struct TextHit {
  std::string target;
  std::string element;
  std::string excerpt;
};

// Say/think/ask/speak literals plus variable-assignment literals.
std::vector<TextHit> scan_literals(const ir::Project& project) {
  static const std::map<std::string, std::string> kTextInputs = {
      {"looks_say", "MESSAGE"},          {"looks_sayforsecs", "MESSAGE"},
      {"looks_think", "MESSAGE"},        {"looks_thinkforsecs", "MESSAGE"},
      {"sensing_askandwait", "QUESTION"},{"text2speech_speakAndWait", "WORDS"},
      {"data_setvariableto", "VALUE"},
  };
  std::vector<TextHit> hits;
  auto scan_target = [&](const ir::Target& target) {
    for (const auto& [id, block] : target.blocks) {
      auto it = kTextInputs.find(block.opcode);
      if (it == kTextInputs.end()) continue;
      auto input = block.inputs.find(it->second);
      if (input == block.inputs.end() || input->second.kind != ir::Input::Kind::Literal)
        continue;
      if (input->second.text.empty()) continue;
      hits.push_back({target.name, id, input->second.text});
    }
  };
  scan_target(project.stage);
  for (const ir::Target& sprite : project.sprites) scan_target(sprite);
  return hits;
}

std::size_t count_terms(const std::string& text, const std::set<std::string>& terms) {
  std::size_t n = 0;
  for (const std::string& token : util::word_tokens(text))
    if (terms.count(token) > 0) ++n;
  return n;
}

}  // namespace

std::string to_string(Severity severity) {
  switch (severity) {
    case Severity::Low: return "low";
    case Severity::Medium: return "medium";
    case Severity::High: return "high";
  }
  return "low";
}

const std::vector<std::string>& heuristic_criteria() {
  static const std::vector<std::string> ids = {"CH01", "CO02", "CO04",
                                               "CO06", "PR01", "PR04"};
  return ids;
}

std::vector<std::string> non_heuristic_criteria() {
  std::vector<std::string> out;
  for (const auto& criterion : framework::catalog()) {
    bool heuristic = std::find(heuristic_criteria().begin(), heuristic_criteria().end(),
                               criterion.id) != heuristic_criteria().end();
    if (!heuristic) out.push_back(criterion.id);
  }
  return out;
}

DetectorConfig DetectorConfig::from_toml(const toml::Table& table) {
  DetectorConfig config;
  config.co04_pink_hue_min = table.get_double("co04.pink_hue_min", config.co04_pink_hue_min);
  config.co04_pink_hue_max = table.get_double("co04.pink_hue_max", config.co04_pink_hue_max);
  config.co04_pink_sat_min = table.get_double("co04.pink_sat_min", config.co04_pink_sat_min);
  config.co04_pink_fraction = table.get_double("co04.pink_fraction", config.co04_pink_fraction);
  config.co04_dark_value_max =
      table.get_double("co04.dark_value_max", config.co04_dark_value_max);
  config.co04_dark_fraction = table.get_double("co04.dark_fraction", config.co04_dark_fraction);
  config.co02_low_max = static_cast<std::size_t>(
      table.get_int("co02.low_max", static_cast<long long>(config.co02_low_max)));
  config.co02_medium_max = static_cast<std::size_t>(
      table.get_int("co02.medium_max", static_cast<long long>(config.co02_medium_max)));
  config.co06_high_markers = static_cast<std::size_t>(
      table.get_int("co06.high_markers", static_cast<long long>(config.co06_high_markers)));
  if (table.has("lexicons.female") && table.has("lexicons.male"))
    config.name_lexicon =
        load_name_lexicon(table.get_string("lexicons.female", ""),
                          table.get_string("lexicons.male", ""));
  if (table.has("lexicons.violence"))
    config.text_lexicons.violence = load_term_file(table.get_string("lexicons.violence", ""));
  if (table.has("lexicons.competition_vars"))
    config.text_lexicons.competition_vars =
        load_term_file(table.get_string("lexicons.competition_vars", ""));
  if (table.has("lexicons.competition_phrases")) {
    config.text_lexicons.competition_phrases.clear();
    for (const std::string& phrase :
         load_term_file(table.get_string("lexicons.competition_phrases", "")))
      config.text_lexicons.competition_phrases.push_back(phrase);
  }
  return config;
}

std::string DetectorConfig::digest() const {
  std::ostringstream ss;
  ss << co04_pink_hue_min << '|' << co04_pink_hue_max << '|' << co04_pink_sat_min << '|'
     << co04_pink_fraction << '|' << co04_dark_value_max << '|' << co04_dark_fraction << '|'
     << co02_low_max << '|' << co02_medium_max << '|' << co06_high_markers << '|';
  for (const auto& t : name_lexicon.female) ss << t << ',';
  ss << '|';
  for (const auto& t : name_lexicon.male) ss << t << ',';
  ss << '|';
  for (const auto& t : text_lexicons.violence) ss << t << ',';
  ss << '|';
  for (const auto& t : text_lexicons.competition_vars) ss << t << ',';
  ss << '|';
  for (const auto& t : text_lexicons.competition_phrases) ss << t << ',';
  return util::sha256_hex(ss.str());
}

ConceptProfile concept_profile(const ir::Project& project) {
  ConceptProfile profile;
  auto scan_target = [&](const ir::Target& target) {
    profile.variables += target.variable_names.size();
    profile.lists += target.list_names.size();
    for (const auto& [id, block] : target.blocks) {
      if (block.shadow) continue;
      ++profile.total_blocks;
      const std::string& op = block.opcode;
      if (is_loop(op)) ++profile.loops;
      if (is_conditional(op)) ++profile.conditionals;
      if (op == "procedures_definition") ++profile.custom_blocks;
      if (op == "event_broadcast" || op == "event_broadcastandwait") ++profile.broadcasts;
      if (block.shape == ir::BlockShape::Hat) ++profile.events;
      std::string palette = blocks::palette_of(op);
      if (palette == "looks" || palette == "sound" || palette == "pen" || palette == "music")
        ++profile.creative_blocks;
      if (palette == "control" || palette == "operator") ++profile.logic_blocks;
    }
    for (const std::string& root : ir::iter_scripts(target)) {
      ++profile.script_count;
      std::vector<const ir::Block*> members;
      collect_script_blocks(target, root, &members);
      bool sequence_only = true;
      for (const ir::Block* block : members) {
        const std::string& op = block->opcode;
        if (blocks::palette_of(op) == "control" && !is_wait(op)) {
          sequence_only = false;
          break;
        }
      }
      if (sequence_only) ++profile.sequence_only_scripts;
    }
  };
  scan_target(project.stage);
  for (const ir::Target& sprite : project.sprites) scan_target(sprite);
  return profile;
}

std::vector<StereotypeSmell> detect_concept_smells(const ConceptProfile& profile,
                                                   const DetectorConfig& config) {
  (void)config;
  std::vector<StereotypeSmell> out;
  if (profile.total_blocks == 0) return out;  // an empty project is not a tutorial

  std::size_t structure = profile.loops + profile.conditionals;
  if (structure == 0) {
    out.push_back({"PR01",
                   Severity::High,
                   {{"", "",
                     "no loops or conditionals across " +
                         std::to_string(profile.total_blocks) + " blocks"}},
                   "concepts"});
  } else if (structure == 1) {
    out.push_back({"PR01",
                   Severity::Medium,
                   {{"", "", profile.loops == 1 ? "a single loop and no conditionals"
                                                : "a single conditional and no loops"}},
                   "concepts"});
  }

  if (profile.creative_blocks > 0 && profile.logic_blocks == 0) {
    out.push_back({"PR04",
                   Severity::Medium,
                   {{"", "",
                     std::to_string(profile.creative_blocks) +
                         " looks/sound blocks with no control or operator blocks"}},
                   "concepts"});
  }
  return out;
}

std::vector<StereotypeSmell> detect_character_smells(const ir::Project& project,
                                                     const NameLexicon& lexicon,
                                                     const DetectorConfig& config) {
  (void)config;
  std::vector<Evidence> female_hits;
  std::vector<Evidence> male_hits;
  auto classify = [&](const std::string& target_name, const std::string& element,
                      const std::string& text) {
    for (const std::string& token : util::word_tokens(text)) {
      if (lexicon.female.count(token) > 0)
        female_hits.push_back({target_name, element, "'" + text + "' matches female-coded '" +
                                                         token + "'"});
      if (lexicon.male.count(token) > 0)
        male_hits.push_back({target_name, element, "'" + text + "' matches male-coded '" +
                                                       token + "'"});
    }
  };
  for (const ir::Target& sprite : project.sprites) {
    classify(sprite.name, "", sprite.name);
    for (const ir::Costume& costume : sprite.costumes)
      classify(sprite.name, costume.name, costume.name);
  }

  std::vector<StereotypeSmell> out;
  bool one_sided = (female_hits.empty() != male_hits.empty());
  if (one_sided) {
    StereotypeSmell smell;
    smell.criterion_id = "CH01";
    smell.severity = Severity::High;
    smell.detector = "characters";
    smell.evidence = female_hits.empty() ? male_hits : female_hits;
    out.push_back(std::move(smell));
  }
  return out;
}

std::vector<StereotypeSmell> detect_color_smells(const ir::Project& project,
                                                 const DetectorConfig& config) {
  struct CostumeStats {
    std::string target;
    std::string costume;
    std::size_t opaque = 0;
    std::size_t pink = 0;
    std::size_t dark = 0;
  };
  std::vector<CostumeStats> per_costume;
  std::size_t total_opaque = 0, total_pink = 0, total_dark = 0;

  render::RenderNotes notes;
  auto sample = [&](const ir::Target& target) {
    if (target.current_costume >= target.costumes.size()) return;
    const ir::Costume& costume = target.costumes[target.current_costume];
    render::RenderNotes local;
    img::RgbaImage raster;
    try {
      raster = render::costume_image(project, target, costume, config.render_options, &local);
    } catch (const render::RenderError&) {
      return;
    }
    if (!local.placeholder_costumes.empty()) return;  // skip unrasterizable costumes
    CostumeStats stats{target.name, costume.name};
    for (std::size_t i = 0; i < raster.pixels.size(); i += 4) {
      if (raster.pixels[i + 3] == 0) continue;
      ++stats.opaque;
      img::Hsv hsv = img::rgb_to_hsv(raster.pixels[i], raster.pixels[i + 1],
                                     raster.pixels[i + 2]);
      if (hsv.h >= config.co04_pink_hue_min && hsv.h <= config.co04_pink_hue_max &&
          hsv.s > config.co04_pink_sat_min)
        ++stats.pink;
      if (hsv.v < config.co04_dark_value_max) ++stats.dark;
    }
    total_opaque += stats.opaque;
    total_pink += stats.pink;
    total_dark += stats.dark;
    per_costume.push_back(std::move(stats));
  };
  sample(project.stage);
  for (const ir::Target& sprite : project.sprites) sample(sprite);

  std::vector<StereotypeSmell> out;
  if (total_opaque == 0) return out;
  double pink_fraction = static_cast<double>(total_pink) / static_cast<double>(total_opaque);
  double dark_fraction = static_cast<double>(total_dark) / static_cast<double>(total_opaque);
  bool pink_fires = pink_fraction > config.co04_pink_fraction;
  bool dark_fires = dark_fraction > config.co04_dark_fraction;
  if (!pink_fires && !dark_fires) return out;

  StereotypeSmell smell;
  smell.criterion_id = "CO04";
  smell.severity = Severity::Medium;
  smell.detector = "colors";
  std::ostringstream summary;
  summary.precision(3);
  if (pink_fires) summary << "pink-band fraction " << pink_fraction;
  if (pink_fires && dark_fires) summary << ", ";
  if (dark_fires) summary << "dark fraction " << dark_fraction;
  smell.evidence.push_back({"", "", summary.str()});
  for (const CostumeStats& stats : per_costume) {
    if (stats.opaque == 0) continue;
    double own_pink = static_cast<double>(stats.pink) / static_cast<double>(stats.opaque);
    double own_dark = static_cast<double>(stats.dark) / static_cast<double>(stats.opaque);
    if ((pink_fires && own_pink > config.co04_pink_fraction) ||
        (dark_fires && own_dark > config.co04_dark_fraction)) {
      std::ostringstream detail;
      detail.precision(3);
      detail << "pink " << own_pink << ", dark " << own_dark;
      smell.evidence.push_back({stats.target, stats.costume, detail.str()});
    }
  }
  out.push_back(std::move(smell));
  return out;
}

std::vector<StereotypeSmell> detect_text_smells(const ir::Project& project,
                                                const TextLexicons& lexicons,
                                                const DetectorConfig& config) {
  std::vector<StereotypeSmell> out;
  std::vector<TextHit> literals = scan_literals(project);

  // CO02: violence terms over literals, variable names, sprite names, and
  // the project description.
  std::size_t violence_hits = 0;
  std::vector<Evidence> violence_evidence;
  auto scan_for_violence = [&](const std::string& target, const std::string& element,
                               const std::string& text) {
    std::size_t n = count_terms(text, lexicons.violence);
    if (n == 0) return;
    violence_hits += n;
    violence_evidence.push_back({target, element, "'" + text + "'"});
  };
  for (const TextHit& hit : literals) scan_for_violence(hit.target, hit.element, hit.excerpt);
  for (const ir::Target& sprite : project.sprites) {
    scan_for_violence(sprite.name, "", sprite.name);
    for (const std::string& name : sprite.variable_names)
      scan_for_violence(sprite.name, name, name);
  }
  for (const std::string& name : project.stage.variable_names)
    scan_for_violence(project.stage.name, name, name);
  scan_for_violence("", "description", config.project_description);

  if (violence_hits > 0) {
    Severity severity = violence_hits <= config.co02_low_max      ? Severity::Low
                        : violence_hits <= config.co02_medium_max ? Severity::Medium
                                                                  : Severity::High;
    out.push_back({"CO02", severity, violence_evidence, "text"});
  }

  // CO06: competition markers.
  std::size_t markers = 0;
  std::vector<Evidence> competition_evidence;
  auto check_var = [&](const std::string& target, const std::string& name) {
    std::string lower = util::to_lower(name);
    for (const std::string& marker : lexicons.competition_vars) {
      if (lower.find(marker) != std::string::npos) {
        ++markers;
        competition_evidence.push_back({target, name, "variable '" + name + "'"});
        return;
      }
    }
  };
  for (const std::string& name : project.stage.variable_names)
    check_var(project.stage.name, name);
  for (const ir::Target& sprite : project.sprites)
    for (const std::string& name : sprite.variable_names) check_var(sprite.name, name);

  for (const TextHit& hit : literals) {
    std::string lower = util::to_lower(hit.excerpt);
    for (const std::string& phrase : lexicons.competition_phrases) {
      if (lower.find(phrase) != std::string::npos) {
        ++markers;
        competition_evidence.push_back({hit.target, hit.element, "'" + hit.excerpt + "'"});
        break;
      }
    }
  }

  // Clone-delete-on-touch: survival/combat mechanics.
  auto clone_combat = [&](const ir::Target& target) {
    bool deletes_clone = false, touch_check = false;
    std::string delete_id;
    for (const auto& [id, block] : target.blocks) {
      if (block.opcode == "control_delete_this_clone") {
        deletes_clone = true;
        delete_id = id;
      }
      if (block.opcode == "sensing_touchingobject") touch_check = true;
    }
    if (deletes_clone && touch_check) {
      ++markers;
      competition_evidence.push_back(
          {target.name, delete_id, "clone deleted on touch contact"});
    }
  };
  for (const ir::Target& sprite : project.sprites) clone_combat(sprite);

  if (markers > 0) {
    Severity severity = markers >= config.co06_high_markers ? Severity::High : Severity::Medium;
    out.push_back({"CO06", severity, competition_evidence, "text"});
  }
  return out;
}

std::vector<StereotypeSmell> run_heuristics(const ir::Project& project,
                                            const DetectorConfig& config) {
  std::vector<StereotypeSmell> all;
  auto append = [&all](std::vector<StereotypeSmell> smells) {
    for (StereotypeSmell& smell : smells) all.push_back(std::move(smell));
  };
  append(detect_concept_smells(concept_profile(project), config));
  append(detect_character_smells(project, config.name_lexicon, config));
  append(detect_color_smells(project, config));
  append(detect_text_smells(project, config.text_lexicons, config));

  std::stable_sort(all.begin(), all.end(),
                   [](const StereotypeSmell& a, const StereotypeSmell& b) {
                     if (a.criterion_id != b.criterion_id) return a.criterion_id < b.criterion_id;
                     return static_cast<int>(a.severity) > static_cast<int>(b.severity);
                   });
  return all;
}

}  // namespace stereoscan::smells
