#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zitterdyn {

/// Flat configuration: `key = value` lines grouped under `[section]` headers.
/// Keys before the first header live in section "". `#` and `;` start comments.
class RunConfig {
 public:
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, const std::string& value);

  /// Canonical text form: sections and keys in sorted order.
  std::string dump() const;
  const std::map<std::string, std::map<std::string, std::string>>& sections() const { return data_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

double parse_double(const std::string& text, const std::string& what);
long parse_int(const std::string& text, const std::string& what);
std::vector<double> parse_double_list(const std::string& text, const std::string& what);

}  // namespace zitterdyn
