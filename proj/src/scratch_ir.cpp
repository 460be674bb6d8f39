#include "stereoscan/scratch_ir.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>

#include "stereoscan/util.hpp"

namespace stereoscan::ir {

using nlohmann::json;

std::string LoadError::describe(Kind kind) {
  switch (kind) {
    case Kind::NotZip: return "NotZip";
    case Kind::MissingProjectJson: return "MissingProjectJson";
    case Kind::MalformedJson: return "MalformedJson";
    case Kind::DanglingBlockRef: return "DanglingBlockRef";
    case Kind::MissingAsset: return "MissingAsset";
    case Kind::UnsupportedFormat: return "UnsupportedFormat";
  }
  return "LoadError";
}

namespace {

[[noreturn]] void malformed(const std::string& path, const std::string& why) {
  throw LoadError(LoadError::Kind::MalformedJson, path + ": " + why);
}

std::string scalar_to_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_number() || j.is_null()) return j.is_null() ? "" : j.dump();
  return j.dump();
}

double wrap_direction(double dir) {
  double d = std::fmod(dir, 360.0);
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;
  return d;
}

CostumeFormat parse_format(const std::string& fmt, const std::string& path) {
  if (fmt == "png") return CostumeFormat::Png;
  if (fmt == "svg") return CostumeFormat::Svg;
  if (fmt == "jpg" || fmt == "jpeg") return CostumeFormat::Jpg;
  if (fmt == "bmp") return CostumeFormat::Bmp;
  if (fmt == "gif") return CostumeFormat::Gif;
  malformed(path, "unsupported costume dataFormat '" + fmt + "'");
}

Input parse_input(const json& value, const std::string& path) {
  Input input;
  if (!value.is_array() || value.empty()) malformed(path, "input is not an array");
  // [shadow_state, primary, (obscured shadow)]; the primary is what shows.
  if (value.size() < 2 || value[1].is_null()) return input;  // Empty
  const json& primary = value[1];
  if (primary.is_string()) {
    input.kind = Input::Kind::Block;
    input.ref_id = primary.get<std::string>();
    return input;
  }
  if (!primary.is_array() || primary.empty() || !primary[0].is_number_integer())
    malformed(path, "input value has unrecognized form");
  int type = primary[0].get<int>();
  switch (type) {
    case 4: case 5: case 6: case 7: case 8: case 9: case 10:
      input.kind = Input::Kind::Literal;
      input.literal_type = type;
      input.text = primary.size() > 1 ? scalar_to_string(primary[1]) : "";
      return input;
    case 11:
      input.kind = Input::Kind::Broadcast;
      break;
    case 12:
      input.kind = Input::Kind::Variable;
      break;
    case 13:
      input.kind = Input::Kind::List;
      break;
    default:
      malformed(path, "unknown input primitive type " + std::to_string(type));
  }
  input.text = primary.size() > 1 ? scalar_to_string(primary[1]) : "";
  if (primary.size() > 2 && primary[2].is_string()) input.ref_id = primary[2].get<std::string>();
  return input;
}

std::vector<std::string> parse_string_array_field(const json& mutation, const char* key,
                                                  const std::string& path) {
  std::vector<std::string> out;
  if (!mutation.contains(key)) return out;
  const json& raw = mutation.at(key);
  json arr;
  if (raw.is_string()) {
    // Serialized as a JSON-encoded string inside the mutation.
    arr = json::parse(raw.get<std::string>(), nullptr, false);
    if (arr.is_discarded()) malformed(path, std::string("mutation ") + key + " not parseable");
  } else {
    arr = raw;
  }
  if (!arr.is_array()) malformed(path, std::string("mutation ") + key + " is not an array");
  for (const json& item : arr) out.push_back(scalar_to_string(item));
  return out;
}

Block parse_block(const json& j, const std::string& path) {
  Block block;
  if (j.is_array()) {
    // Compact form used for free-floating variable/list reporters:
    // [12|13, name, id, x, y]
    if (j.size() < 3 || !j[0].is_number_integer()) malformed(path, "compact block malformed");
    int type = j[0].get<int>();
    if (type == 12) {
      block.opcode = "data_variable";
      block.fields["VARIABLE"] = Field{scalar_to_string(j[1]), scalar_to_string(j[2])};
    } else if (type == 13) {
      block.opcode = "data_listcontents";
      block.fields["LIST"] = Field{scalar_to_string(j[1]), scalar_to_string(j[2])};
    } else {
      malformed(path, "compact block of unknown type " + std::to_string(type));
    }
    block.top_level = true;
    block.shape = BlockShape::Reporter;
    return block;
  }
  if (!j.is_object()) malformed(path, "block is neither object nor array");
  if (!j.contains("opcode") || !j.at("opcode").is_string()) malformed(path, "missing opcode");
  block.opcode = j.at("opcode").get<std::string>();
  if (j.contains("next") && j.at("next").is_string())
    block.next = j.at("next").get<std::string>();
  if (j.contains("parent") && j.at("parent").is_string())
    block.parent = j.at("parent").get<std::string>();
  block.top_level = j.value("topLevel", false);
  block.shadow = j.value("shadow", false);
  block.shape = blocks::shape_of(block.opcode, &block.known_opcode);

  if (j.contains("inputs")) {
    const json& inputs = j.at("inputs");
    if (!inputs.is_object()) malformed(path, "inputs is not an object");
    for (auto it = inputs.begin(); it != inputs.end(); ++it)
      block.inputs[it.key()] = parse_input(it.value(), path + ".inputs." + it.key());
  }
  if (j.contains("fields")) {
    const json& fields = j.at("fields");
    if (!fields.is_object()) malformed(path, "fields is not an object");
    for (auto it = fields.begin(); it != fields.end(); ++it) {
      const json& fv = it.value();
      Field field;
      if (fv.is_array() && !fv.empty()) {
        field.value = scalar_to_string(fv[0]);
        if (fv.size() > 1 && fv[1].is_string()) field.id = fv[1].get<std::string>();
      } else {
        field.value = scalar_to_string(fv);
      }
      block.fields[it.key()] = field;
    }
  }
  if (j.contains("mutation") && j.at("mutation").is_object()) {
    const json& mutation = j.at("mutation");
    block.proccode = mutation.value("proccode", "");
    block.argument_ids = parse_string_array_field(mutation, "argumentids", path);
    block.argument_names = parse_string_array_field(mutation, "argumentnames", path);
  }
  return block;
}

bool is_expression_shape(BlockShape shape) {
  return shape == BlockShape::Reporter || shape == BlockShape::Boolean;
}

void validate_target(const Target& target) {
  for (const auto& [id, block] : target.blocks) {
    auto require_ref = [&](const std::optional<std::string>& ref) {
      if (ref && target.blocks.find(*ref) == target.blocks.end())
        throw LoadError(LoadError::Kind::DanglingBlockRef, target.name + "/" + *ref);
    };
    require_ref(block.next);
    require_ref(block.parent);
    for (const auto& [name, input] : block.inputs) {
      if (input.kind == Input::Kind::Block) {
        auto it = target.blocks.find(input.ref_id);
        if (it == target.blocks.end())
          throw LoadError(LoadError::Kind::DanglingBlockRef, target.name + "/" + input.ref_id);
        if (name.starts_with("SUBSTACK") && is_expression_shape(it->second.shape))
          malformed(target.name + "/" + id, "substack references an expression block");
      }
    }
    if (block.shape == BlockShape::Hat && block.parent)
      malformed(target.name + "/" + id, "hat block has a parent");
    if (block.next) {
      const Block& next = target.blocks.at(*block.next);
      if (is_expression_shape(next.shape))
        malformed(target.name + "/" + id, "next chain contains an expression block");
    }
  }
}

Target parse_target(const json& j, std::size_t index) {
  const std::string path = "targets[" + std::to_string(index) + "]";
  if (!j.is_object()) malformed(path, "target is not an object");
  Target target;
  target.is_stage = j.value("isStage", false);
  target.name = j.value("name", target.is_stage ? "Stage" : "");
  if (target.name.empty()) malformed(path, "target has no name");

  if (j.contains("blocks")) {
    const json& blocks_obj = j.at("blocks");
    if (!blocks_obj.is_object()) malformed(path + ".blocks", "not an object");
    for (auto it = blocks_obj.begin(); it != blocks_obj.end(); ++it)
      target.blocks[it.key()] = parse_block(it.value(), path + ".blocks." + it.key());
  }

  if (j.contains("costumes")) {
    const json& costumes = j.at("costumes");
    if (!costumes.is_array()) malformed(path + ".costumes", "not an array");
    for (std::size_t i = 0; i < costumes.size(); ++i) {
      const json& cj = costumes[i];
      const std::string cpath = path + ".costumes[" + std::to_string(i) + "]";
      if (!cj.is_object()) malformed(cpath, "not an object");
      Costume costume;
      costume.name = cj.value("name", "");
      costume.asset_id = cj.value("assetId", "");
      std::string fmt = cj.value("dataFormat", "");
      costume.format = parse_format(fmt, cpath);
      costume.md5ext = cj.value("md5ext", costume.asset_id + "." + fmt);
      costume.rotation_center_x = cj.value("rotationCenterX", 0.0);
      costume.rotation_center_y = cj.value("rotationCenterY", 0.0);
      costume.bitmap_resolution = cj.value("bitmapResolution", 1);
      if (costume.format == CostumeFormat::Svg) {
        costume.bitmap_resolution = 1;
      } else if (costume.bitmap_resolution != 1 && costume.bitmap_resolution != 2) {
        malformed(cpath, "bitmapResolution must be 1 or 2");
      }
      target.costumes.push_back(std::move(costume));
    }
  }

  long long current = j.value("currentCostume", 0);
  if (current < 0 || (static_cast<std::size_t>(current) >= target.costumes.size() &&
                      !(target.costumes.empty() && current == 0)))
    malformed(path, "currentCostume out of range");
  target.current_costume = static_cast<std::size_t>(current);

  if (!target.is_stage) {
    target.x = j.value("x", 0.0);
    target.y = j.value("y", 0.0);
    target.size = j.value("size", 100.0);
    if (!(target.size > 0)) malformed(path, "size must be positive");
    target.direction = wrap_direction(j.value("direction", 90.0));
    target.visible = j.value("visible", true);
    std::string style = j.value("rotationStyle", "all around");
    if (style == "all around") target.rotation_style = RotationStyle::AllAround;
    else if (style == "left-right") target.rotation_style = RotationStyle::LeftRight;
    else if (style == "don't rotate") target.rotation_style = RotationStyle::DontRotate;
    else malformed(path, "unknown rotationStyle '" + style + "'");
  }
  target.layer_order = j.value("layerOrder", target.is_stage ? 0 : 1);

  if (j.contains("variables") && j.at("variables").is_object())
    for (auto it = j.at("variables").begin(); it != j.at("variables").end(); ++it)
      if (it.value().is_array() && !it.value().empty())
        target.variable_names.push_back(scalar_to_string(it.value()[0]));
  if (j.contains("lists") && j.at("lists").is_object())
    for (auto it = j.at("lists").begin(); it != j.at("lists").end(); ++it)
      if (it.value().is_array() && !it.value().empty())
        target.list_names.push_back(scalar_to_string(it.value()[0]));
  if (j.contains("broadcasts") && j.at("broadcasts").is_object())
    for (auto it = j.at("broadcasts").begin(); it != j.at("broadcasts").end(); ++it)
      target.broadcast_names.push_back(scalar_to_string(it.value()));
  if (j.contains("sounds") && j.at("sounds").is_array())
    target.sound_count = j.at("sounds").size();
  if (j.contains("comments") && j.at("comments").is_object())
    target.comment_count = j.at("comments").size();

  validate_target(target);
  return target;
}

}  // namespace

const Target* Project::find_target(const std::string& name) const {
  if (stage.name == name) return &stage;
  for (const Target& sprite : sprites)
    if (sprite.name == name) return &sprite;
  return nullptr;
}

Project load_project(std::span<const std::uint8_t> archive_bytes,
                     const std::string& source_path) {
  std::shared_ptr<const zip::ZipReader> archive;
  try {
    archive = std::make_shared<zip::ZipReader>(
        std::vector<std::uint8_t>(archive_bytes.begin(), archive_bytes.end()));
  } catch (const zip::ZipError& e) {
    throw LoadError(LoadError::Kind::NotZip, source_path + " (" + e.what() + ")");
  }

  if (!archive->has("project.json"))
    throw LoadError(LoadError::Kind::MissingProjectJson, source_path);

  json root;
  try {
    auto raw = archive->read("project.json");
    root = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw LoadError(LoadError::Kind::MalformedJson, std::string("project.json: ") + e.what());
  }

  Project project;
  project.source_path = source_path;
  project.archive = archive;
  if (root.contains("meta") && root.at("meta").is_object())
    project.meta_semver = root.at("meta").value("semver", "");

  if (!root.contains("targets") || !root.at("targets").is_array())
    throw LoadError(LoadError::Kind::UnsupportedFormat,
                    project.meta_semver.empty() ? "no targets array (pre-3.0 project?)"
                                                : project.meta_semver);

  bool have_stage = false;
  for (std::size_t i = 0; i < root.at("targets").size(); ++i) {
    Target target = parse_target(root.at("targets")[i], i);
    if (target.is_stage) {
      if (have_stage) malformed("targets", "more than one stage");
      project.stage = std::move(target);
      have_stage = true;
    } else {
      for (const Target& existing : project.sprites)
        if (existing.name == target.name)
          malformed("targets", "duplicate sprite name '" + target.name + "'");
      project.sprites.push_back(std::move(target));
    }
  }
  if (!have_stage) malformed("targets", "no stage target");

  if (root.contains("monitors") && root.at("monitors").is_array())
    project.monitor_count = root.at("monitors").size();
  if (root.contains("extensions") && root.at("extensions").is_array())
    for (const json& ext : root.at("extensions"))
      if (ext.is_string()) project.extensions.push_back(ext.get<std::string>());

  // Sounds are out of analysis scope but their assets are still references.
  auto check_assets = [&](const Target& target, const json& tj) {
    for (const Costume& costume : target.costumes)
      if (!archive->has(costume.md5ext))
        throw LoadError(LoadError::Kind::MissingAsset, costume.md5ext);
    if (tj.contains("sounds") && tj.at("sounds").is_array())
      for (const json& sound : tj.at("sounds"))
        if (sound.is_object() && sound.contains("md5ext") && sound.at("md5ext").is_string())
          if (!archive->has(sound.at("md5ext").get<std::string>()))
            throw LoadError(LoadError::Kind::MissingAsset,
                            sound.at("md5ext").get<std::string>());
  };
  std::size_t sprite_index = 0;
  for (std::size_t i = 0; i < root.at("targets").size(); ++i) {
    const json& tj = root.at("targets")[i];
    bool is_stage = tj.value("isStage", false);
    check_assets(is_stage ? project.stage : project.sprites[sprite_index], tj);
    if (!is_stage) ++sprite_index;
  }

  return project;
}

Project load_project_file(const std::string& path) {
  std::string raw = util::read_file(path);
  return load_project(std::span<const std::uint8_t>(
                          reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()),
                      path);
}

AssetBytes asset_bytes(const Project& project, const Costume& costume) {
  if (!project.archive || !project.archive->has(costume.md5ext))
    throw LoadError(LoadError::Kind::MissingAsset, costume.md5ext);
  AssetBytes result;
  bool crc_ok = true;
  result.bytes = project.archive->read(costume.md5ext, &crc_ok);
  result.integrity_ok = crc_ok && util::md5_hex(result.bytes) == costume.asset_id;
  return result;
}

std::vector<std::string> iter_scripts(const Target& target) {
  std::vector<std::string> hats;
  std::vector<std::string> orphans;
  for (const auto& [id, block] : target.blocks) {
    if (!block.top_level || block.shadow) continue;
    if (block.shape == BlockShape::Hat)
      hats.push_back(id);
    else
      orphans.push_back(id);
  }
  // std::map iteration is already id-ordered within each group.
  hats.insert(hats.end(), orphans.begin(), orphans.end());
  return hats;
}

}  // namespace stereoscan::ir
