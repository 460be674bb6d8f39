#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stereoscan::toml {

// Flat TOML subset: [tables], key = value with string/number/boolean values,
// '#' comments. Enough for detector threshold files; nested tables and
// arrays are out of scope.
class Table {
 public:
  static Table parse(std::string_view text);       // throws std::runtime_error
  static Table parse_file(const std::string& path);

  bool has(const std::string& dotted_key) const;
  double get_double(const std::string& dotted_key, double fallback) const;
  long long get_int(const std::string& dotted_key, long long fallback) const;
  bool get_bool(const std::string& dotted_key, bool fallback) const;
  std::string get_string(const std::string& dotted_key, const std::string& fallback) const;

  const std::map<std::string, std::string>& raw() const { return values_; }

 private:
  std::map<std::string, std::string> values_;  // "section.key" -> raw value text
};

}  // namespace stereoscan::toml
