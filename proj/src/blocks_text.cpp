#include "stereoscan/blocks_text.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace stereoscan::text {

namespace {

using blocks::BlockShape;
using blocks::SlotKind;
using ir::Block;
using ir::Input;
using ir::Target;

constexpr int kIndentWidth = 4;

bool is_numeric_literal(const std::string& s) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  std::strtod(begin, &end);
  return end == begin + s.size();
}

std::string escape_within(const std::string& text, char closer) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '\\' || c == closer) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string wrap(SlotKind kind, const std::string& value) {
  switch (kind) {
    case SlotKind::Number:
      return "(" + escape_within(value, ')') + ")";
    case SlotKind::Text:
      return "[" + escape_within(value, ']') + "]";
    case SlotKind::Bool:
      return "<" + escape_within(value, '>') + ">";
    case SlotKind::MenuRound:
      return value.empty() ? "()" : "(" + value + " v)";
    case SlotKind::MenuSquare:
      return "[" + value + " v]";
    case SlotKind::Color:
      return "[" + escape_within(value, ']') + "]";
    case SlotKind::Compare:
      return is_numeric_literal(value) ? "(" + escape_within(value, ')') + ")"
                                       : "[" + escape_within(value, ']') + "]";
    case SlotKind::NameRound:
      return value;  // brackets come from the owning expression
  }
  return value;
}

std::string empty_slot(SlotKind kind) {
  switch (kind) {
    case SlotKind::Bool: return "<>";
    case SlotKind::Text: return "[]";
    case SlotKind::MenuSquare: return "[ v]";
    default: return "()";
  }
}

SlotKind slot_kind_from_code(std::string_view code) {
  if (code == "n") return SlotKind::Number;
  if (code == "s") return SlotKind::Text;
  if (code == "b") return SlotKind::Bool;
  if (code == "mr") return SlotKind::MenuRound;
  if (code == "mf") return SlotKind::MenuSquare;
  if (code == "c") return SlotKind::Color;
  if (code == "cmp") return SlotKind::Compare;
  return SlotKind::NameRound;  // "rf"
}

class Emitter {
 public:
  explicit Emitter(const Target& target) : target_(target) {}

  std::vector<std::string> emit_script(const std::string& root_id) {
    lines_.clear();
    emit_chain(root_id, 0);
    return std::move(lines_);
  }

 private:
  const Block* find(const std::string& id) const {
    auto it = target_.blocks.find(id);
    return it == target_.blocks.end() ? nullptr : &it->second;
  }

  void emit_chain(const std::string& first_id, int depth) {
    const Block* block = find(first_id);
    while (block != nullptr) {
      emit_block(*block, depth);
      block = block->next ? find(*block->next) : nullptr;
    }
  }

  void add_line(int depth, const std::string& text) {
    lines_.push_back(std::string(static_cast<std::size_t>(depth) * kIndentWidth, ' ') + text);
  }

  void emit_block(const Block& block, int depth) {
    if (block.opcode == "procedures_definition") {
      add_line(depth, "define " + prototype_text(block));
      return;
    }
    if (block.opcode == "procedures_call") {
      add_line(depth, call_text(block));
      return;
    }
    auto sig = blocks::find_signature(block.opcode);
    if (!sig || !block.known_opcode) {
      add_line(depth, "... // unknown: " + block.opcode);
      return;
    }
    if (sig->shape == BlockShape::Reporter || sig->shape == BlockShape::Boolean) {
      // Free-floating reporter dragged into the workspace.
      add_line(depth, render_expression(block, SlotKind::Number));
      return;
    }
    add_line(depth, fill_template(block, sig->text));
    if (sig->shape == BlockShape::CBlock) {
      emit_substack(block, "SUBSTACK", depth);
      if (block.opcode == "control_if_else") {
        add_line(depth, "else");
        emit_substack(block, "SUBSTACK2", depth);
      }
      add_line(depth, "end");
    }
  }

  void emit_substack(const Block& block, const std::string& name, int depth) {
    auto it = block.inputs.find(name);
    if (it == block.inputs.end() || it->second.kind != Input::Kind::Block) return;
    emit_chain(it->second.ref_id, depth + 1);
  }

  std::string fill_template(const Block& block, std::string_view tmpl) const {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
      if (tmpl[pos] != '{') {
        out.push_back(tmpl[pos++]);
        continue;
      }
      std::size_t close = tmpl.find('}', pos);
      std::size_t colon = tmpl.find(':', pos);
      std::string name(tmpl.substr(pos + 1, colon - pos - 1));
      SlotKind kind = slot_kind_from_code(tmpl.substr(colon + 1, close - colon - 1));
      out += render_slot(block, name, kind);
      pos = close + 1;
    }
    return out;
  }

  std::string render_slot(const Block& block, const std::string& name, SlotKind kind) const {
    if (kind == SlotKind::MenuSquare || kind == SlotKind::NameRound) {
      auto it = block.fields.find(name);
      if (it == block.fields.end()) return empty_slot(kind);
      std::string value = blocks::menu_display_value(block.opcode, name, it->second.value);
      return wrap(kind, value);
    }
    auto it = block.inputs.find(name);
    if (it == block.inputs.end()) return empty_slot(kind);
    return render_input(it->second, kind);
  }

  std::string render_input(const Input& input, SlotKind kind) const {
    switch (input.kind) {
      case Input::Kind::Empty:
        return empty_slot(kind);
      case Input::Kind::Literal:
        if (input.text.empty() && kind != SlotKind::Text) return empty_slot(kind);
        return wrap(kind, input.text);
      case Input::Kind::Broadcast:
        return wrap(SlotKind::MenuRound, input.text);
      case Input::Kind::Variable:
      case Input::Kind::List:
        return "(" + escape_within(input.text, ')') + ")";
      case Input::Kind::Block:
        break;
    }
    const Block* ref = find(input.ref_id);
    if (ref == nullptr) return empty_slot(kind);
    return render_expression(*ref, kind);
  }

  // Menu shadows collapse to their field value; other referenced blocks
  // render as bracketed expressions regardless of the slot they sit in.
  std::string render_expression(const Block& block, SlotKind slot) const {
    auto sig = blocks::find_signature(block.opcode);
    if (sig && sig->is_menu) {
      auto it = block.fields.find(std::string(sig->menu_field));
      std::string raw = it == block.fields.end() ? "" : it->second.value;
      std::string value = blocks::menu_display_value(block.opcode, sig->menu_field, raw);
      if (slot == SlotKind::Number) return wrap(SlotKind::Number, value);
      return wrap(SlotKind::MenuRound, value);
    }
    if (block.shadow && !sig && block.fields.size() == 1) {
      // Unknown extension menu: single-field shadow carries the value.
      return wrap(SlotKind::MenuRound, block.fields.begin()->second.value);
    }
    if (!sig) return "(... // unknown: " + block.opcode + ")";
    std::string inner = fill_template(block, sig->text);
    if (sig->shape == BlockShape::Boolean) return "<" + inner + ">";
    return "(" + inner + ")";
  }

  std::string prototype_text(const Block& definition) const {
    auto it = definition.inputs.find("custom_block");
    const Block* proto =
        (it != definition.inputs.end() && it->second.kind == Input::Kind::Block)
            ? find(it->second.ref_id)
            : nullptr;
    if (proto == nullptr) return "...";
    std::size_t arg_index = 0;
    return expand_proccode(proto->proccode, [&](char type) {
      std::string name = arg_index < proto->argument_names.size()
                             ? proto->argument_names[arg_index]
                             : "arg" + std::to_string(arg_index + 1);
      ++arg_index;
      if (type == 'b') return "<" + escape_within(name, '>') + ">";
      return "(" + escape_within(name, ')') + ")";
    });
  }

  std::string call_text(const Block& call) const {
    std::size_t arg_index = 0;
    return expand_proccode(call.proccode, [&](char type) {
      std::string slot_value;
      if (arg_index < call.argument_ids.size()) {
        auto it = call.inputs.find(call.argument_ids[arg_index]);
        if (it != call.inputs.end()) {
          SlotKind kind = type == 'b' ? SlotKind::Bool : SlotKind::Compare;
          slot_value = render_input(it->second, kind);
        }
      }
      ++arg_index;
      if (!slot_value.empty()) return slot_value;
      return std::string(type == 'b' ? "<>" : "()");
    });
  }

  template <typename Fn>
  static std::string expand_proccode(const std::string& proccode, Fn&& render_arg) {
    std::string out;
    for (std::size_t i = 0; i < proccode.size(); ++i) {
      if (proccode[i] == '%' && i + 1 < proccode.size()) {
        char c = proccode[i + 1];
        if (c == 's' || c == 'n' || c == 'b') {
          out += render_arg(c);
          ++i;
          continue;
        }
        if (c == '%') {
          out.push_back('%');
          ++i;
          continue;
        }
      }
      out.push_back(proccode[i]);
    }
    return out;
  }

  const Target& target_;
  std::vector<std::string> lines_;
};

}  // namespace

std::string ScriptText::joined() const {
  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out.push_back('\n');
  }
  return out;
}

std::vector<ScriptText> emit_target(const ir::Target& target) {
  std::vector<ScriptText> scripts;
  Emitter emitter(target);
  std::size_t index = 0;
  for (const std::string& root : ir::iter_scripts(target)) {
    ScriptText script;
    script.target_name = target.name;
    script.script_index = index++;
    script.lines = emitter.emit_script(root);
    scripts.push_back(std::move(script));
  }
  return scripts;
}

std::string emit_project(const ir::Project& project) {
  std::ostringstream out;
  bool first_section = true;
  auto emit_section = [&](const ir::Target& target) {
    if (!first_section) out << "\n";
    first_section = false;
    out << (target.is_stage ? "== stage ==" : "== sprite: " + target.name + " ==") << "\n";
    for (const ScriptText& script : emit_target(target)) {
      out << "\n";
      for (const std::string& line : script.lines) out << line << "\n";
    }
  };
  emit_section(project.stage);
  for (const ir::Target& sprite : project.sprites) emit_section(sprite);
  return out.str();
}

}  // namespace stereoscan::text
