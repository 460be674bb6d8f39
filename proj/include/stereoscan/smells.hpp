#pragma once

#include <string>
#include <vector>

#include "stereoscan/lexicon.hpp"
#include "stereoscan/scratch_ir.hpp"
#include "stereoscan/stage_render.hpp"
#include "stereoscan/toml_lite.hpp"

namespace stereoscan::smells {

struct ConceptProfile {
  std::size_t loops = 0;          // repeat / forever / repeat until
  std::size_t conditionals = 0;   // if / if-else
  std::size_t variables = 0;      // declared variables
  std::size_t lists = 0;
  std::size_t custom_blocks = 0;  // procedure definitions
  std::size_t broadcasts = 0;     // broadcast-sending blocks
  std::size_t events = 0;         // hat blocks
  std::size_t sequence_only_scripts = 0;
  std::size_t total_blocks = 0;   // non-shadow blocks
  std::size_t script_count = 0;
  std::size_t creative_blocks = 0;  // looks + sound (+ pen/music palettes)
  std::size_t logic_blocks = 0;     // control + operators
};

enum class Severity { Low, Medium, High };

std::string to_string(Severity severity);

struct Evidence {
  std::string target_name;
  std::string element;  // block id or costume name, may be empty
  std::string excerpt;
};

struct StereotypeSmell {
  std::string criterion_id;
  Severity severity = Severity::Low;
  std::vector<Evidence> evidence;
  std::string detector;
};

// Criteria covered by the heuristics; everything else is rater-only and
// reported as "not heuristically assessed".
const std::vector<std::string>& heuristic_criteria();
std::vector<std::string> non_heuristic_criteria();

struct DetectorConfig {
  // CO04 colour bands
  double co04_pink_hue_min = 300.0;
  double co04_pink_hue_max = 345.0;
  double co04_pink_sat_min = 0.3;
  double co04_pink_fraction = 0.35;
  double co04_dark_value_max = 0.25;
  double co04_dark_fraction = 0.5;
  // CO02 severity by violence-term hit count
  std::size_t co02_low_max = 2;    // 1..low_max  -> Low
  std::size_t co02_medium_max = 5; // ..medium_max -> Medium, above -> High
  // CO06 marker count that escalates Medium -> High
  std::size_t co06_high_markers = 3;

  NameLexicon name_lexicon = default_name_lexicon();
  TextLexicons text_lexicons = default_text_lexicons();
  std::string project_description;  // scanned by the text detector
  render::RenderOptions render_options;

  // Thresholds (not lexicons) from a TOML table, e.g. "[co04]
  // pink_fraction = 0.35". Unknown keys are ignored.
  static DetectorConfig from_toml(const toml::Table& table);

  // Stable digest over thresholds and lexicon contents, for reports.
  std::string digest() const;
};

ConceptProfile concept_profile(const ir::Project& project);

std::vector<StereotypeSmell> detect_concept_smells(const ConceptProfile& profile,
                                                   const DetectorConfig& config = {});

std::vector<StereotypeSmell> detect_character_smells(const ir::Project& project,
                                                     const NameLexicon& lexicon,
                                                     const DetectorConfig& config = {});

std::vector<StereotypeSmell> detect_color_smells(const ir::Project& project,
                                                 const DetectorConfig& config = {});

std::vector<StereotypeSmell> detect_text_smells(const ir::Project& project,
                                                const TextLexicons& lexicons,
                                                const DetectorConfig& config = {});

// Union of all detectors, sorted by (criterion id, severity desc).
std::vector<StereotypeSmell> run_heuristics(const ir::Project& project,
                                            const DetectorConfig& config = {});

}  // namespace stereoscan::smells
