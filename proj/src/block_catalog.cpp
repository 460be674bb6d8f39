#include "stereoscan/block_catalog.hpp"

#include <array>
#include <unordered_map>

namespace stereoscan::blocks {

namespace {

using S = BlockShape;

// clang-format off
constexpr std::array kSignatures = {
    // --- motion ---
    Signature{"motion_movesteps", S::Stack, "move {STEPS:n} steps"},
    Signature{"motion_turnright", S::Stack, "turn cw {DEGREES:n} degrees"},
    Signature{"motion_turnleft", S::Stack, "turn ccw {DEGREES:n} degrees"},
    Signature{"motion_goto", S::Stack, "go to {TO:mr}"},
    Signature{"motion_gotoxy", S::Stack, "go to x: {X:n} y: {Y:n}"},
    Signature{"motion_glideto", S::Stack, "glide {SECS:n} secs to {TO:mr}"},
    Signature{"motion_glidesecstoxy", S::Stack, "glide {SECS:n} secs to x: {X:n} y: {Y:n}"},
    Signature{"motion_pointindirection", S::Stack, "point in direction {DIRECTION:n}"},
    Signature{"motion_pointtowards", S::Stack, "point towards {TOWARDS:mr}"},
    Signature{"motion_changexby", S::Stack, "change x by {DX:n}"},
    Signature{"motion_setx", S::Stack, "set x to {X:n}"},
    Signature{"motion_changeyby", S::Stack, "change y by {DY:n}"},
    Signature{"motion_sety", S::Stack, "set y to {Y:n}"},
    Signature{"motion_ifonedgebounce", S::Stack, "if on edge, bounce"},
    Signature{"motion_setrotationstyle", S::Stack, "set rotation style {STYLE:mf}"},
    Signature{"motion_xposition", S::Reporter, "x position"},
    Signature{"motion_yposition", S::Reporter, "y position"},
    Signature{"motion_direction", S::Reporter, "direction"},
    Signature{"motion_goto_menu", S::Reporter, "", true, "TO"},
    Signature{"motion_glideto_menu", S::Reporter, "", true, "TO"},
    Signature{"motion_pointtowards_menu", S::Reporter, "", true, "TOWARDS"},

    // --- looks ---
    Signature{"looks_sayforsecs", S::Stack, "say {MESSAGE:s} for {SECS:n} seconds"},
    Signature{"looks_say", S::Stack, "say {MESSAGE:s}"},
    Signature{"looks_thinkforsecs", S::Stack, "think {MESSAGE:s} for {SECS:n} seconds"},
    Signature{"looks_think", S::Stack, "think {MESSAGE:s}"},
    Signature{"looks_switchcostumeto", S::Stack, "switch costume to {COSTUME:mr}"},
    Signature{"looks_nextcostume", S::Stack, "next costume"},
    Signature{"looks_switchbackdropto", S::Stack, "switch backdrop to {BACKDROP:mr}"},
    Signature{"looks_switchbackdroptoandwait", S::Stack, "switch backdrop to {BACKDROP:mr} and wait"},
    Signature{"looks_nextbackdrop", S::Stack, "next backdrop"},
    Signature{"looks_changesizeby", S::Stack, "change size by {CHANGE:n}"},
    Signature{"looks_setsizeto", S::Stack, "set size to {SIZE:n} %"},
    Signature{"looks_changeeffectby", S::Stack, "change {EFFECT:mf} effect by {CHANGE:n}"},
    Signature{"looks_seteffectto", S::Stack, "set {EFFECT:mf} effect to {VALUE:n}"},
    Signature{"looks_cleargraphiceffects", S::Stack, "clear graphic effects"},
    Signature{"looks_show", S::Stack, "show"},
    Signature{"looks_hide", S::Stack, "hide"},
    Signature{"looks_gotofrontback", S::Stack, "go to {FRONT_BACK:mf} layer"},
    Signature{"looks_goforwardbackwardlayers", S::Stack, "go {FORWARD_BACKWARD:mf} {NUM:n} layers"},
    Signature{"looks_costumenumbername", S::Reporter, "costume {NUMBER_NAME:mf}"},
    Signature{"looks_backdropnumbername", S::Reporter, "backdrop {NUMBER_NAME:mf}"},
    Signature{"looks_size", S::Reporter, "size"},
    Signature{"looks_costume", S::Reporter, "", true, "COSTUME"},
    Signature{"looks_backdrops", S::Reporter, "", true, "BACKDROP"},

    // --- sound ---
    Signature{"sound_playuntildone", S::Stack, "play sound {SOUND_MENU:mr} until done"},
    Signature{"sound_play", S::Stack, "start sound {SOUND_MENU:mr}"},
    Signature{"sound_stopallsounds", S::Stack, "stop all sounds"},
    Signature{"sound_changeeffectby", S::Stack, "change {EFFECT:mf} effect by {VALUE:n}"},
    Signature{"sound_seteffectto", S::Stack, "set {EFFECT:mf} effect to {VALUE:n}"},
    Signature{"sound_cleareffects", S::Stack, "clear sound effects"},
    Signature{"sound_changevolumeby", S::Stack, "change volume by {VOLUME:n}"},
    Signature{"sound_setvolumeto", S::Stack, "set volume to {VOLUME:n} %"},
    Signature{"sound_volume", S::Reporter, "volume"},
    Signature{"sound_sounds_menu", S::Reporter, "", true, "SOUND_MENU"},

    // --- events ---
    Signature{"event_whenflagclicked", S::Hat, "when green flag clicked"},
    Signature{"event_whenkeypressed", S::Hat, "when {KEY_OPTION:mf} key pressed"},
    Signature{"event_whenthisspriteclicked", S::Hat, "when this sprite clicked"},
    Signature{"event_whenstageclicked", S::Hat, "when stage clicked"},
    Signature{"event_whenbackdropswitchesto", S::Hat, "when backdrop switches to {BACKDROP:mf}"},
    Signature{"event_whengreaterthan", S::Hat, "when {WHENGREATERTHANMENU:mf} > {VALUE:n}"},
    Signature{"event_whenbroadcastreceived", S::Hat, "when I receive {BROADCAST_OPTION:mf}"},
    Signature{"event_broadcast", S::Stack, "broadcast {BROADCAST_INPUT:mr}"},
    Signature{"event_broadcastandwait", S::Stack, "broadcast {BROADCAST_INPUT:mr} and wait"},

    // --- control ---
    Signature{"control_wait", S::Stack, "wait {DURATION:n} seconds"},
    Signature{"control_repeat", S::CBlock, "repeat {TIMES:n}"},
    Signature{"control_forever", S::CBlock, "forever"},
    Signature{"control_if", S::CBlock, "if {CONDITION:b} then"},
    Signature{"control_if_else", S::CBlock, "if {CONDITION:b} then"},
    Signature{"control_wait_until", S::Stack, "wait until {CONDITION:b}"},
    Signature{"control_repeat_until", S::CBlock, "repeat until {CONDITION:b}"},
    Signature{"control_stop", S::Cap, "stop {STOP_OPTION:mf}"},
    Signature{"control_start_as_clone", S::Hat, "when I start as a clone"},
    Signature{"control_create_clone_of", S::Stack, "create clone of {CLONE_OPTION:mr}"},
    Signature{"control_delete_this_clone", S::Cap, "delete this clone"},
    Signature{"control_create_clone_of_menu", S::Reporter, "", true, "CLONE_OPTION"},

    // --- sensing ---
    Signature{"sensing_touchingobject", S::Boolean, "touching {TOUCHINGOBJECTMENU:mr} ?"},
    Signature{"sensing_touchingcolor", S::Boolean, "touching color {COLOR:c} ?"},
    Signature{"sensing_coloristouchingcolor", S::Boolean, "color {COLOR:c} is touching {COLOR2:c} ?"},
    Signature{"sensing_distanceto", S::Reporter, "distance to {DISTANCETOMENU:mr}"},
    Signature{"sensing_askandwait", S::Stack, "ask {QUESTION:s} and wait"},
    Signature{"sensing_answer", S::Reporter, "answer"},
    Signature{"sensing_keypressed", S::Boolean, "key {KEY_OPTION:mr} pressed?"},
    Signature{"sensing_mousedown", S::Boolean, "mouse down?"},
    Signature{"sensing_mousex", S::Reporter, "mouse x"},
    Signature{"sensing_mousey", S::Reporter, "mouse y"},
    Signature{"sensing_setdragmode", S::Stack, "set drag mode {DRAG_MODE:mf}"},
    Signature{"sensing_loudness", S::Reporter, "loudness"},
    Signature{"sensing_timer", S::Reporter, "timer"},
    Signature{"sensing_resettimer", S::Stack, "reset timer"},
    Signature{"sensing_of", S::Reporter, "{PROPERTY:mf} of {OBJECT:mr}"},
    Signature{"sensing_current", S::Reporter, "current {CURRENTMENU:mf}"},
    Signature{"sensing_dayssince2000", S::Reporter, "days since 2000"},
    Signature{"sensing_username", S::Reporter, "username"},
    Signature{"sensing_touchingobjectmenu", S::Reporter, "", true, "TOUCHINGOBJECTMENU"},
    Signature{"sensing_distancetomenu", S::Reporter, "", true, "DISTANCETOMENU"},
    Signature{"sensing_keyoptions", S::Reporter, "", true, "KEY_OPTION"},
    Signature{"sensing_of_object_menu", S::Reporter, "", true, "OBJECT"},

    // --- operators ---
    Signature{"operator_add", S::Reporter, "{NUM1:n} + {NUM2:n}"},
    Signature{"operator_subtract", S::Reporter, "{NUM1:n} - {NUM2:n}"},
    Signature{"operator_multiply", S::Reporter, "{NUM1:n} * {NUM2:n}"},
    Signature{"operator_divide", S::Reporter, "{NUM1:n} / {NUM2:n}"},
    Signature{"operator_random", S::Reporter, "pick random {FROM:n} to {TO:n}"},
    Signature{"operator_gt", S::Boolean, "{OPERAND1:cmp} > {OPERAND2:cmp}"},
    Signature{"operator_lt", S::Boolean, "{OPERAND1:cmp} < {OPERAND2:cmp}"},
    Signature{"operator_equals", S::Boolean, "{OPERAND1:cmp} = {OPERAND2:cmp}"},
    Signature{"operator_and", S::Boolean, "{OPERAND1:b} and {OPERAND2:b}"},
    Signature{"operator_or", S::Boolean, "{OPERAND1:b} or {OPERAND2:b}"},
    Signature{"operator_not", S::Boolean, "not {OPERAND:b}"},
    Signature{"operator_join", S::Reporter, "join {STRING1:s} {STRING2:s}"},
    Signature{"operator_letter_of", S::Reporter, "letter {LETTER:n} of {STRING:s}"},
    Signature{"operator_length", S::Reporter, "length of {STRING:s}"},
    Signature{"operator_contains", S::Boolean, "{STRING1:s} contains {STRING2:s}?"},
    Signature{"operator_mod", S::Reporter, "{NUM1:n} mod {NUM2:n}"},
    Signature{"operator_round", S::Reporter, "round {NUM:n}"},
    Signature{"operator_mathop", S::Reporter, "{OPERATOR:mf} of {NUM:n}"},

    // --- variables / lists ---
    Signature{"data_variable", S::Reporter, "{VARIABLE:rf}"},
    Signature{"data_setvariableto", S::Stack, "set {VARIABLE:mf} to {VALUE:s}"},
    Signature{"data_changevariableby", S::Stack, "change {VARIABLE:mf} by {VALUE:n}"},
    Signature{"data_showvariable", S::Stack, "show variable {VARIABLE:mf}"},
    Signature{"data_hidevariable", S::Stack, "hide variable {VARIABLE:mf}"},
    Signature{"data_listcontents", S::Reporter, "{LIST:rf}"},
    Signature{"data_addtolist", S::Stack, "add {ITEM:s} to {LIST:mf}"},
    Signature{"data_deleteoflist", S::Stack, "delete {INDEX:n} of {LIST:mf}"},
    Signature{"data_deletealloflist", S::Stack, "delete all of {LIST:mf}"},
    Signature{"data_insertatlist", S::Stack, "insert {ITEM:s} at {INDEX:n} of {LIST:mf}"},
    Signature{"data_replaceitemoflist", S::Stack, "replace item {INDEX:n} of {LIST:mf} with {ITEM:s}"},
    Signature{"data_itemoflist", S::Reporter, "item {INDEX:n} of {LIST:mf}"},
    Signature{"data_itemnumoflist", S::Reporter, "item # of {ITEM:s} in {LIST:mf}"},
    Signature{"data_lengthoflist", S::Reporter, "length of {LIST:mf}"},
    Signature{"data_listcontainsitem", S::Boolean, "{LIST:mf} contains {ITEM:s}?"},
    Signature{"data_showlist", S::Stack, "show list {LIST:mf}"},
    Signature{"data_hidelist", S::Stack, "hide list {LIST:mf}"},

    // --- custom blocks; definition/prototype/call are rendered specially ---
    Signature{"procedures_definition", S::Hat, ""},
    Signature{"procedures_prototype", S::Reporter, ""},
    Signature{"procedures_call", S::Stack, ""},
    Signature{"argument_reporter_string_number", S::Reporter, "{VALUE:rf}"},
    Signature{"argument_reporter_boolean", S::Boolean, "{VALUE:rf}"},

    // --- pen extension ---
    Signature{"pen_clear", S::Stack, "erase all"},
    Signature{"pen_stamp", S::Stack, "stamp"},
    Signature{"pen_penDown", S::Stack, "pen down"},
    Signature{"pen_penUp", S::Stack, "pen up"},
    Signature{"pen_setPenColorToColor", S::Stack, "set pen color to {COLOR:c}"},
    Signature{"pen_changePenColorParamBy", S::Stack, "change pen {COLOR_PARAM:mr} by {VALUE:n}"},
    Signature{"pen_setPenColorParamTo", S::Stack, "set pen {COLOR_PARAM:mr} to {VALUE:n}"},
    Signature{"pen_changePenSizeBy", S::Stack, "change pen size by {SIZE:n}"},
    Signature{"pen_setPenSizeTo", S::Stack, "set pen size to {SIZE:n}"},
    Signature{"pen_setPenShadeToNumber", S::Stack, "set pen shade to {SHADE:n}"},
    Signature{"pen_changePenShadeBy", S::Stack, "change pen shade by {SHADE:n}"},
    Signature{"pen_setPenHueToNumber", S::Stack, "set pen color to {HUE:n}"},
    Signature{"pen_changePenHueBy", S::Stack, "change pen color by {HUE:n}"},
    Signature{"pen_menu_colorParam", S::Reporter, "", true, "colorParam"},

    // --- music extension ---
    Signature{"music_playDrumForBeats", S::Stack, "play drum {DRUM:mr} for {BEATS:n} beats"},
    Signature{"music_restForBeats", S::Stack, "rest for {BEATS:n} beats"},
    Signature{"music_playNoteForBeats", S::Stack, "play note {NOTE:n} for {BEATS:n} beats"},
    Signature{"music_setInstrument", S::Stack, "set instrument to {INSTRUMENT:mr}"},
    Signature{"music_setTempo", S::Stack, "set tempo to {TEMPO:n}"},
    Signature{"music_changeTempo", S::Stack, "change tempo by {TEMPO:n}"},
    Signature{"music_getTempo", S::Reporter, "tempo"},
    Signature{"music_menu_DRUM", S::Reporter, "", true, "DRUM"},
    Signature{"music_menu_INSTRUMENT", S::Reporter, "", true, "INSTRUMENT"},
    Signature{"note", S::Reporter, "", true, "NOTE"},

    // --- text-to-speech extension ---
    Signature{"text2speech_speakAndWait", S::Stack, "speak {WORDS:s}"},
    Signature{"text2speech_setVoice", S::Stack, "set voice to {VOICE:mr}"},
    Signature{"text2speech_setLanguage", S::Stack, "set language to {LANGUAGE:mr}"},
    Signature{"text2speech_menu_voices", S::Reporter, "", true, "voices"},
    Signature{"text2speech_menu_languages", S::Reporter, "", true, "languages"},
};
// clang-format on

const std::unordered_map<std::string_view, const Signature*>& registry() {
  static const auto* map = [] {
    auto* m = new std::unordered_map<std::string_view, const Signature*>();
    for (const auto& sig : kSignatures) m->emplace(sig.opcode, &sig);
    return m;
  }();
  return *map;
}

}  // namespace

std::optional<Signature> find_signature(std::string_view opcode) {
  auto it = registry().find(opcode);
  if (it == registry().end()) return std::nullopt;
  return *it->second;
}

BlockShape shape_of(std::string_view opcode, bool* known) {
  auto sig = find_signature(opcode);
  if (known != nullptr) *known = sig.has_value();
  return sig ? sig->shape : BlockShape::Stack;
}

std::string palette_of(std::string_view opcode) {
  auto pos = opcode.find('_');
  if (pos == std::string_view::npos) return std::string(opcode);
  return std::string(opcode.substr(0, pos));
}

std::string menu_display_value(std::string_view opcode, std::string_view field,
                               std::string_view value) {
  if (value == "_random_") return "random position";
  if (value == "_mouse_") return "mouse-pointer";
  if (value == "_edge_") return "edge";
  if (value == "_myself_") return "myself";
  if (value == "_stage_") return "Stage";

  auto lower = [](std::string_view v) {
    std::string out(v);
    for (char& c : out)
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  };

  if (field == "EFFECT") {
    if (opcode.starts_with("sound_") && value == "PAN") return "pan left/right";
    return lower(value);
  }
  if (field == "WHENGREATERTHANMENU") return lower(value);
  if (field == "CURRENTMENU") {
    if (value == "DAYOFWEEK") return "day of week";
    return lower(value);
  }
  return std::string(value);
}

}  // namespace stereoscan::blocks
