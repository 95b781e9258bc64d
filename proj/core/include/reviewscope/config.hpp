#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace reviewscope {

/// Parsed `key = value` file. Blank lines and lines starting with '#' are
/// ignored; keys keep file order. A repeated key keeps its last value.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in);
  static KeyValueFile load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  /// Directory of the loaded file; relative paths inside are resolved against it.
  const std::filesystem::path& base_dir() const { return base_dir_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::filesystem::path base_dir_;
};

bool parse_bool(const std::string& key, const std::string& value);
long long parse_integer(const std::string& key, const std::string& value);
double parse_real(const std::string& key, const std::string& value);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Splits on runs of ASCII whitespace.
std::vector<std::string> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string read_file(const std::filesystem::path& path);

}  // namespace reviewscope
