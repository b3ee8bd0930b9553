#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace strokepath {

/// Line-oriented `key = value` configuration. Blank lines and lines starting
/// with '#' are ignored; later duplicates of a key are rejected.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, const std::string& source = "<input>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool contains(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  const std::string& get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  /// Comma- or whitespace-separated list of numbers.
  std::vector<double> get_doubles(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::string> entries_;
};

namespace text {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Whole-string parse; nullopt on trailing garbage or non-numbers.
std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);

std::string_view trim(std::string_view s);

/// Splits on `sep`, trimming each field.
std::vector<std::string_view> split(std::string_view s, char sep);

/// Splits on commas and/or whitespace, dropping empty fields.
std::vector<std::string_view> split_list(std::string_view s);

}  // namespace text

}  // namespace strokepath
