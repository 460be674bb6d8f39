#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "stereoscan/image.hpp"
#include "support/zip_writer.hpp"

namespace testsupport {

using nlohmann::json;

// Solid-color PNG bytes.
std::vector<std::uint8_t> solid_png(int w, int h, std::uint8_t r, std::uint8_t g,
                                    std::uint8_t b, std::uint8_t a = 255);

// Assembles sb3 fixture archives. Costume JSON and archive members are
// derived from the registered asset bytes (real md5 ids).
class ProjectBuilder {
 public:
  ProjectBuilder();

  // Adds a target; returns its JSON node for direct manipulation.
  json& add_stage();
  json& add_sprite(const std::string& name);

  // Registers asset bytes and appends a costume entry to the target.
  void add_costume(json& target, const std::string& costume_name,
                   std::span<const std::uint8_t> bytes, const std::string& ext,
                   double center_x = 0, double center_y = 0, int bitmap_resolution = 1);

  // Convenience: block object insertion.
  static void add_block(json& target, const std::string& id, json block);

  json& root() { return root_; }

  std::vector<std::uint8_t> build(bool tamper_first_asset = false,
                                  bool drop_assets = false) const;

 private:
  json root_;
  std::vector<std::pair<std::string, std::vector<std::uint8_t>>> assets_;
};

// A stage-only project with a single white backdrop and no blocks.
std::vector<std::uint8_t> minimal_stage_project();

// Clone-shooter starter lookalike: 3 sprites, loops, conditionals, clones,
// score/lives variables. Counts are pinned in golden/starter_manifest.json.
std::vector<std::uint8_t> starter_fixture();

// Sequences-only dress-up project: female-coded sprite, pink palette.
std::vector<std::uint8_t> dressup_fixture();

// Loop-rich neutral drawing project; designed to trip no heuristic.
std::vector<std::uint8_t> paintbox_fixture();

std::string test_dir();
std::string golden_path(const std::string& name);
std::string cli_path();

}  // namespace testsupport
