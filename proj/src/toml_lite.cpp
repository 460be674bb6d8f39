#include "stereoscan/toml_lite.hpp"

#include <cstdlib>

#include "stereoscan/util.hpp"

namespace stereoscan::toml {

namespace {

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

}  // namespace

Table Table::parse(std::string_view text) {
  Table table;
  std::string section;
  std::size_t line_no = 0;
  for (const std::string& raw_line : util::split_lines(text)) {
    ++line_no;
    std::string line = util::trim(strip_comment(raw_line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("toml: unterminated table header at line " +
                                 std::to_string(line_no));
      section = util::trim(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("toml: expected key = value at line " + std::to_string(line_no));
    std::string key = util::trim(line.substr(0, eq));
    std::string value = util::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error("toml: empty key or value at line " + std::to_string(line_no));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    std::string dotted = section.empty() ? key : section + "." + key;
    table.values_[dotted] = value;
  }
  return table;
}

Table Table::parse_file(const std::string& path) { return parse(util::read_file(path)); }

bool Table::has(const std::string& dotted_key) const { return values_.count(dotted_key) > 0; }

double Table::get_double(const std::string& dotted_key, double fallback) const {
  auto it = values_.find(dotted_key);
  if (it == values_.end()) return fallback;
  char* end = nullptr;
  double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str()) return fallback;
  return v;
}

long long Table::get_int(const std::string& dotted_key, long long fallback) const {
  auto it = values_.find(dotted_key);
  if (it == values_.end()) return fallback;
  char* end = nullptr;
  long long v = std::strtoll(it->second.c_str(), &end, 10);
  if (end == it->second.c_str()) return fallback;
  return v;
}

bool Table::get_bool(const std::string& dotted_key, bool fallback) const {
  auto it = values_.find(dotted_key);
  if (it == values_.end()) return fallback;
  if (it->second == "true") return true;
  if (it->second == "false") return false;
  return fallback;
}

std::string Table::get_string(const std::string& dotted_key, const std::string& fallback) const {
  auto it = values_.find(dotted_key);
  return it == values_.end() ? fallback : it->second;
}

}  // namespace stereoscan::toml
