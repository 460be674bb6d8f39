#pragma once

#include <string>
#include <vector>

#include "stereoscan/scratch_ir.hpp"

namespace stereoscan::text {

struct ScriptText {
  std::string target_name;
  std::vector<std::string> lines;
  std::size_t script_index = 0;

  std::string joined() const;
};

// One ScriptText per script root of the target, in iter_scripts order.
// Never fails: unknown opcodes render as "... // unknown: <opcode>".
std::vector<ScriptText> emit_target(const ir::Target& target);

// Whole-project text: "== stage ==" / "== sprite: <name> ==" sections,
// stage first, then sprites in project order, scripts separated by one
// blank line.
std::string emit_project(const ir::Project& project);

}  // namespace stereoscan::text
