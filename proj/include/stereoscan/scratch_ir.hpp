#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stereoscan/block_catalog.hpp"
#include "stereoscan/zip.hpp"

namespace stereoscan::ir {

using blocks::BlockShape;

class LoadError : public std::runtime_error {
 public:
  enum class Kind {
    NotZip,
    MissingProjectJson,
    MalformedJson,
    DanglingBlockRef,
    MissingAsset,
    UnsupportedFormat,
  };

  LoadError(Kind kind, const std::string& detail)
      : std::runtime_error(describe(kind) + ": " + detail), kind_(kind), detail_(detail) {}

  Kind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  static std::string describe(Kind kind);
  Kind kind_;
  std::string detail_;
};

enum class RotationStyle { AllAround, LeftRight, DontRotate };

enum class CostumeFormat { Png, Svg, Jpg, Bmp, Gif };

struct Costume {
  std::string name;
  std::string asset_id;   // content hash (md5 of the asset bytes)
  std::string md5ext;     // archive member name: "<asset_id>.<ext>"
  CostumeFormat format = CostumeFormat::Png;
  double rotation_center_x = 0;
  double rotation_center_y = 0;
  int bitmap_resolution = 1;
};

struct Input {
  enum class Kind { Empty, Literal, Block, Broadcast, Variable, List };
  Kind kind = Kind::Empty;
  std::string text;      // literal value or referenced name
  std::string ref_id;    // block/broadcast/variable/list id
  int literal_type = 0;  // sb3 primitive code (4..10) when kind == Literal
};

struct Field {
  std::string value;
  std::string id;  // variable/list/broadcast id when present
};

struct Block {
  std::string opcode;
  std::optional<std::string> next;
  std::optional<std::string> parent;
  std::map<std::string, Input> inputs;
  std::map<std::string, Field> fields;
  bool top_level = false;
  bool shadow = false;
  BlockShape shape = BlockShape::Stack;
  bool known_opcode = true;

  // Custom-block mutation payload (procedures_prototype / procedures_call).
  std::string proccode;
  std::vector<std::string> argument_ids;
  std::vector<std::string> argument_names;
};

struct Target {
  std::string name;
  bool is_stage = false;
  std::map<std::string, Block> blocks;
  std::vector<Costume> costumes;
  std::size_t current_costume = 0;
  double x = 0;
  double y = 0;
  double size = 100;        // percent
  double direction = 90;    // degrees, 90 = right, wrapped into (-180, 180]
  bool visible = true;
  RotationStyle rotation_style = RotationStyle::AllAround;
  int layer_order = 0;

  std::vector<std::string> variable_names;
  std::vector<std::string> list_names;
  std::vector<std::string> broadcast_names;
  std::size_t sound_count = 0;
  std::size_t comment_count = 0;
};

struct Project {
  Target stage;
  std::vector<Target> sprites;
  std::string meta_semver;
  std::string source_path;
  std::size_t monitor_count = 0;
  std::vector<std::string> extensions;

  std::shared_ptr<const zip::ZipReader> archive;

  const Target* find_target(const std::string& name) const;
};

struct AssetBytes {
  std::vector<std::uint8_t> bytes;
  bool integrity_ok = true;  // md5(bytes) == asset_id and zip CRC matched
};

// Decodes an .sb3 archive into a fully linked, validated Project.
Project load_project(std::span<const std::uint8_t> archive_bytes,
                     const std::string& source_path = "");
Project load_project_file(const std::string& path);

// Exact bytes of the archive member backing a costume. A hash or CRC
// mismatch is reported via integrity_ok, not as an error.
AssetBytes asset_bytes(const Project& project, const Costume& costume);

// Script roots: hat blocks first, then orphan stacks, each group ordered by
// block id.
std::vector<std::string> iter_scripts(const Target& target);

}  // namespace stereoscan::ir
