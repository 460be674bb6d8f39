#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace stereoscan::blocks {

enum class BlockShape { Hat, Stack, Reporter, Boolean, CBlock, Cap };

// Slot kinds drive the bracket style used when printing an input:
//   Number  -> (…)        Text    -> […]       Bool -> <…>
//   MenuRound -> (… v)    MenuSquare (field) -> [… v]
//   Color   -> [#rrggbb]  Compare -> (…) for numeric literals, […] otherwise
//   NameRound -> (name) for variable/argument fields
enum class SlotKind { Number, Text, Bool, MenuRound, MenuSquare, Color, Compare, NameRound };

struct Signature {
  std::string_view opcode;
  BlockShape shape;
  // Template with placeholders "{NAME:k}" where k encodes the SlotKind:
  // n, s, b, mr, mf, c, cmp, rf. Substacks are not part of the template.
  std::string_view text;
  bool is_menu = false;          // shadow dropdown block
  std::string_view menu_field;   // field carrying the menu value
};

// Signature for a known opcode, or nullopt for unknown/extension opcodes.
std::optional<Signature> find_signature(std::string_view opcode);

// Shape lookup that defaults unknown opcodes to Stack.
BlockShape shape_of(std::string_view opcode, bool* known = nullptr);

// Palette prefix ("motion", "looks", …) of an opcode.
std::string palette_of(std::string_view opcode);

// Dropdown values that sb3 stores in internal form ("_mouse_", "COLOR", …)
// but scratchblocks prints readably ("mouse-pointer", "color", …).
std::string menu_display_value(std::string_view opcode, std::string_view field,
                               std::string_view value);

}  // namespace stereoscan::blocks
