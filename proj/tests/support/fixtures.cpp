#include "support/fixtures.hpp"

#include "stereoscan/util.hpp"

namespace testsupport {

namespace ss = stereoscan;

std::vector<std::uint8_t> solid_png(int w, int h, std::uint8_t r, std::uint8_t g,
                                    std::uint8_t b, std::uint8_t a) {
  return ss::img::encode_png(ss::img::RgbaImage(w, h, r, g, b, a));
}

ProjectBuilder::ProjectBuilder() {
  root_ = json{{"targets", json::array()},
               {"monitors", json::array()},
               {"extensions", json::array()},
               {"meta", {{"semver", "3.0.0"}, {"vm", "2.0.0"}, {"agent", ""}}}};
}

json& ProjectBuilder::add_stage() {
  root_["targets"].push_back(json{{"isStage", true},
                                  {"name", "Stage"},
                                  {"variables", json::object()},
                                  {"lists", json::object()},
                                  {"broadcasts", json::object()},
                                  {"blocks", json::object()},
                                  {"comments", json::object()},
                                  {"currentCostume", 0},
                                  {"costumes", json::array()},
                                  {"sounds", json::array()},
                                  {"volume", 100},
                                  {"layerOrder", 0},
                                  {"tempo", 60}});
  return root_["targets"].back();
}

json& ProjectBuilder::add_sprite(const std::string& name) {
  int layer = static_cast<int>(root_["targets"].size());
  root_["targets"].push_back(json{{"isStage", false},
                                  {"name", name},
                                  {"variables", json::object()},
                                  {"lists", json::object()},
                                  {"broadcasts", json::object()},
                                  {"blocks", json::object()},
                                  {"comments", json::object()},
                                  {"currentCostume", 0},
                                  {"costumes", json::array()},
                                  {"sounds", json::array()},
                                  {"volume", 100},
                                  {"layerOrder", layer},
                                  {"visible", true},
                                  {"x", 0},
                                  {"y", 0},
                                  {"size", 100},
                                  {"direction", 90},
                                  {"draggable", false},
                                  {"rotationStyle", "all around"}});
  return root_["targets"].back();
}

void ProjectBuilder::add_costume(json& target, const std::string& costume_name,
                                 std::span<const std::uint8_t> bytes, const std::string& ext,
                                 double center_x, double center_y, int bitmap_resolution) {
  std::string asset_id = ss::util::md5_hex(bytes);
  json costume = {{"name", costume_name},
                  {"assetId", asset_id},
                  {"dataFormat", ext},
                  {"md5ext", asset_id + "." + ext},
                  {"rotationCenterX", center_x},
                  {"rotationCenterY", center_y}};
  if (ext != "svg") costume["bitmapResolution"] = bitmap_resolution;
  target["costumes"].push_back(costume);
  assets_.emplace_back(asset_id + "." + ext,
                       std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
}

void ProjectBuilder::add_block(json& target, const std::string& id, json block) {
  if (block.is_object()) {
    if (!block.contains("next")) block["next"] = nullptr;
    if (!block.contains("parent")) block["parent"] = nullptr;
    if (!block.contains("inputs")) block["inputs"] = json::object();
    if (!block.contains("fields")) block["fields"] = json::object();
    if (!block.contains("shadow")) block["shadow"] = false;
    if (!block.contains("topLevel")) block["topLevel"] = false;
  }
  target["blocks"][id] = std::move(block);
}

std::vector<std::uint8_t> ProjectBuilder::build(bool tamper_first_asset,
                                                bool drop_assets) const {
  ZipWriter zip;
  zip.add_text("project.json", root_.dump());
  if (!drop_assets) {
    for (const auto& [name, bytes] : assets_) zip.add(name, bytes);
    if (tamper_first_asset && !assets_.empty()) zip.tamper_crc(assets_.front().first);
  }
  return zip.finish();
}

std::vector<std::uint8_t> minimal_stage_project() {
  ProjectBuilder builder;
  json& stage = builder.add_stage();
  builder.add_costume(stage, "backdrop1", solid_png(2, 2, 255, 255, 255), "png", 1, 1);
  return builder.build();
}

namespace {

json hat(const std::string& opcode, const std::string& next) {
  json b = {{"opcode", opcode}, {"topLevel", true}};
  if (!next.empty()) b["next"] = next;
  return b;
}

json stack(const std::string& opcode, const std::string& parent, const std::string& next) {
  json b = {{"opcode", opcode}, {"parent", parent}};
  if (!next.empty()) b["next"] = next;
  return b;
}

json num_input(const std::string& value) {
  return json::array({1, json::array({4, value})});
}

json text_input(const std::string& value) {
  return json::array({1, json::array({10, value})});
}

json block_input(const std::string& id) { return json::array({2, id}); }

json shadow_input(const std::string& id) { return json::array({1, id}); }

json menu_block(const std::string& opcode, const std::string& parent,
                const std::string& field, const std::string& value) {
  return json{{"opcode", opcode},
              {"parent", parent},
              {"shadow", true},
              {"fields", {{field, json::array({value, nullptr})}}}};
}

}  // namespace

std::vector<std::uint8_t> starter_fixture() {
  ProjectBuilder builder;
  json& stage = builder.add_stage();
  builder.add_costume(stage, "space", solid_png(8, 6, 10, 10, 40), "png", 4, 3);
  stage["variables"] = {{"var-score", json::array({"score", 0})},
                        {"var-lives", json::array({"lives", 3})}};

  ProjectBuilder::add_block(stage, "sb1", hat("event_whenflagclicked", "sb2"));
  {
    json b = stack("looks_switchbackdropto", "sb1", "");
    b["inputs"] = {{"BACKDROP", shadow_input("sb2m")}};
    ProjectBuilder::add_block(stage, "sb2", b);
    ProjectBuilder::add_block(stage, "sb2m",
                              menu_block("looks_backdrops", "sb2", "BACKDROP", "space"));
  }

  json& ship = builder.add_sprite("Ship");
  builder.add_costume(ship, "ship-a", solid_png(12, 8, 60, 60, 200), "png", 6, 4);
  ship["variables"] = {{"var-speed", json::array({"speed", 10})}};
  ProjectBuilder::add_block(ship, "a1", hat("event_whenflagclicked", "a2"));
  {
    json b = stack("control_forever", "a1", "");
    b["inputs"] = {{"SUBSTACK", block_input("a3")}};
    ProjectBuilder::add_block(ship, "a2", b);
  }
  {
    json b = stack("control_if", "a2", "");
    b["inputs"] = {{"CONDITION", block_input("a4")}, {"SUBSTACK", block_input("a5")}};
    ProjectBuilder::add_block(ship, "a3", b);
  }
  {
    json b = json{{"opcode", "sensing_keypressed"}, {"parent", "a3"}};
    b["inputs"] = {{"KEY_OPTION", shadow_input("a4m")}};
    ProjectBuilder::add_block(ship, "a4", b);
    ProjectBuilder::add_block(
        ship, "a4m", menu_block("sensing_keyoptions", "a4", "KEY_OPTION", "right arrow"));
  }
  {
    json b = stack("motion_changexby", "a3", "");
    b["inputs"] = {{"DX", num_input("10")}};
    ProjectBuilder::add_block(ship, "a5", b);
  }
  {
    json b = hat("event_whenkeypressed", "a7");
    b["fields"] = {{"KEY_OPTION", json::array({"space", nullptr})}};
    ProjectBuilder::add_block(ship, "a6", b);
  }
  {
    json b = stack("control_create_clone_of", "a6", "");
    b["inputs"] = {{"CLONE_OPTION", shadow_input("a7m")}};
    ProjectBuilder::add_block(ship, "a7", b);
    ProjectBuilder::add_block(
        ship, "a7m",
        menu_block("control_create_clone_of_menu", "a7", "CLONE_OPTION", "_myself_"));
  }

  json& bat = builder.add_sprite("Bat");
  builder.add_costume(bat, "bat-a", solid_png(10, 10, 90, 90, 90), "png", 5, 5);
  ProjectBuilder::add_block(bat, "b1", hat("control_start_as_clone", "b2"));
  {
    json b = stack("control_repeat_until", "b1", "b5");
    b["inputs"] = {{"CONDITION", block_input("b3")}, {"SUBSTACK", block_input("b4")}};
    ProjectBuilder::add_block(bat, "b2", b);
  }
  {
    json b = json{{"opcode", "sensing_touchingobject"}, {"parent", "b2"}};
    b["inputs"] = {{"TOUCHINGOBJECTMENU", shadow_input("b3m")}};
    ProjectBuilder::add_block(bat, "b3", b);
    ProjectBuilder::add_block(
        bat, "b3m", menu_block("sensing_touchingobjectmenu", "b3", "TOUCHINGOBJECTMENU", "Ship"));
  }
  {
    json b = stack("motion_movesteps", "b2", "");
    b["inputs"] = {{"STEPS", num_input("5")}};
    ProjectBuilder::add_block(bat, "b4", b);
  }
  {
    json b = stack("data_changevariableby", "b2", "b6");
    b["fields"] = {{"VARIABLE", json::array({"score", "var-score"})}};
    b["inputs"] = {{"VALUE", num_input("1")}};
    ProjectBuilder::add_block(bat, "b5", b);
  }
  ProjectBuilder::add_block(bat, "b6", stack("control_delete_this_clone", "b5", ""));
  ProjectBuilder::add_block(bat, "b7", hat("event_whenflagclicked", "b8"));
  {
    json b = stack("looks_sayforsecs", "b7", "");
    b["inputs"] = {{"MESSAGE", text_input("Game over!")}, {"SECS", num_input("2")}};
    ProjectBuilder::add_block(bat, "b8", b);
  }

  json& star = builder.add_sprite("Star");
  builder.add_costume(star, "star-a", solid_png(6, 6, 250, 220, 60), "png", 3, 3);
  ProjectBuilder::add_block(star, "c1", hat("event_whenflagclicked", "c2"));
  {
    json b = stack("control_forever", "c1", "");
    b["inputs"] = {{"SUBSTACK", block_input("c3")}};
    ProjectBuilder::add_block(star, "c2", b);
  }
  {
    json b = stack("motion_turnright", "c2", "");
    b["inputs"] = {{"DEGREES", num_input("15")}};
    ProjectBuilder::add_block(star, "c3", b);
  }

  return builder.build();
}

std::vector<std::uint8_t> dressup_fixture() {
  ProjectBuilder builder;
  json& stage = builder.add_stage();
  builder.add_costume(stage, "pink room", solid_png(8, 6, 255, 51, 153), "png", 4, 3);

  json& tera = builder.add_sprite("Tera");
  builder.add_costume(tera, "dress", solid_png(16, 16, 255, 51, 153), "png", 8, 8);
  builder.add_costume(tera, "hat", solid_png(16, 16, 240, 80, 170), "png", 8, 8);

  ProjectBuilder::add_block(tera, "d1", hat("event_whenflagclicked", "d2"));
  {
    json b = stack("looks_sayforsecs", "d1", "d3");
    b["inputs"] = {{"MESSAGE", text_input("Pick an outfit!")}, {"SECS", num_input("2")}};
    ProjectBuilder::add_block(tera, "d2", b);
  }
  {
    json b = stack("looks_switchcostumeto", "d2", "");
    b["inputs"] = {{"COSTUME", shadow_input("d3m")}};
    ProjectBuilder::add_block(tera, "d3", b);
    ProjectBuilder::add_block(tera, "d3m", menu_block("looks_costume", "d3", "COSTUME", "dress"));
  }
  ProjectBuilder::add_block(tera, "e1", hat("event_whenthisspriteclicked", "e2"));
  ProjectBuilder::add_block(tera, "e2", stack("looks_nextcostume", "e1", ""));

  return builder.build();
}

std::vector<std::uint8_t> paintbox_fixture() {
  ProjectBuilder builder;
  json& stage = builder.add_stage();
  builder.add_costume(stage, "white", solid_png(8, 6, 255, 255, 255), "png", 4, 3);

  json& star = builder.add_sprite("Star");
  builder.add_costume(star, "star", solid_png(12, 12, 255, 221, 51), "png", 6, 6);
  star["variables"] = {{"var-brush", json::array({"brush width", 2})}};

  ProjectBuilder::add_block(star, "p1", hat("event_whenflagclicked", "p2"));
  ProjectBuilder::add_block(star, "p2", stack("pen_clear", "p1", "p3"));
  {
    json b = stack("control_forever", "p2", "");
    b["inputs"] = {{"SUBSTACK", block_input("p4")}};
    ProjectBuilder::add_block(star, "p3", b);
  }
  {
    json b = stack("control_if_else", "p3", "");
    b["inputs"] = {{"CONDITION", block_input("p5")},
                   {"SUBSTACK", block_input("p6")},
                   {"SUBSTACK2", block_input("p10")}};
    ProjectBuilder::add_block(star, "p4", b);
  }
  ProjectBuilder::add_block(star, "p5",
                            json{{"opcode", "sensing_mousedown"}, {"parent", "p4"}});
  ProjectBuilder::add_block(star, "p6", stack("pen_penDown", "p4", "p7"));
  {
    json b = stack("motion_gotoxy", "p6", "");
    b["inputs"] = {{"X", block_input("p8")}, {"Y", block_input("p9")}};
    ProjectBuilder::add_block(star, "p7", b);
  }
  ProjectBuilder::add_block(star, "p8", json{{"opcode", "sensing_mousex"}, {"parent", "p7"}});
  ProjectBuilder::add_block(star, "p9", json{{"opcode", "sensing_mousey"}, {"parent", "p7"}});
  ProjectBuilder::add_block(star, "p10", stack("pen_penUp", "p4", ""));

  {
    json b = hat("event_whenkeypressed", "q2");
    b["fields"] = {{"KEY_OPTION", json::array({"space", nullptr})}};
    ProjectBuilder::add_block(star, "q1", b);
  }
  {
    json b = stack("control_repeat", "q1", "");
    b["inputs"] = {{"TIMES", num_input("10")}, {"SUBSTACK", block_input("q3")}};
    ProjectBuilder::add_block(star, "q2", b);
  }
  {
    json b = stack("pen_changePenColorParamBy", "q2", "");
    b["inputs"] = {{"COLOR_PARAM", shadow_input("q3m")}, {"VALUE", num_input("10")}};
    ProjectBuilder::add_block(star, "q3", b);
    ProjectBuilder::add_block(star, "q3m",
                              menu_block("pen_menu_colorParam", "q3", "colorParam", "color"));
  }

  builder.root()["extensions"].push_back("pen");
  return builder.build();
}

std::string test_dir() { return STEREOSCAN_TEST_DIR; }

std::string golden_path(const std::string& name) {
  return std::string(STEREOSCAN_TEST_DIR) + "/golden/" + name;
}

std::string cli_path() { return STEREOSCAN_CLI_PATH; }

}  // namespace testsupport
