#include "strokepath/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <system_error>

#include "strokepath/error.hpp"

namespace strokepath {

namespace text {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) {
    throw Error(ErrorCode::invalid_input, "cannot format number");
  }
  return std::string(buf.data(), end);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(s.substr(start)));
      break;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  constexpr std::string_view seps = ", \t\r\n";
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto first = s.find_first_not_of(seps, pos);
    if (first == std::string_view::npos) {
      break;
    }
    const auto last = s.find_first_of(seps, first);
    const auto end = last == std::string_view::npos ? s.size() : last;
    out.push_back(s.substr(first, end - first));
    pos = end;
  }
  return out;
}

}  // namespace text

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source) {
  KeyValueConfig cfg;
  cfg.source_ = source;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::config, source + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(text::trim(body.substr(0, eq)));
    const std::string value(text::trim(body.substr(eq + 1)));
    if (key.empty()) {
      throw Error(ErrorCode::config, source + ":" + std::to_string(line_no) + ": empty key");
    }
    if (!cfg.entries_.emplace(key, value).second) {
      throw Error(ErrorCode::config, source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  }
  return parse(in, path.string());
}

bool KeyValueConfig::contains(const std::string& key) const { return entries_.count(key) != 0; }

void KeyValueConfig::set(const std::string& key, const std::string& value) { entries_[key] = value; }

const std::string& KeyValueConfig::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw Error(ErrorCode::config, source_ + ": missing key '" + key + "'");
  }
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const auto value = text::parse_double(get_string(key));
  if (!value || !std::isfinite(*value)) {
    throw Error(ErrorCode::config, source_ + ": key '" + key + "' is not a finite number");
  }
  return *value;
}

double KeyValueConfig::get_double_or(const std::string& key, double fallback) const {
  return contains(key) ? get_double(key) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const {
  const auto value = text::parse_int(get_string(key));
  if (!value) {
    throw Error(ErrorCode::config, source_ + ": key '" + key + "' is not an integer");
  }
  return *value;
}

std::int64_t KeyValueConfig::get_int_or(const std::string& key, std::int64_t fallback) const {
  return contains(key) ? get_int(key) : fallback;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto field : text::split_list(get_string(key))) {
    const auto value = text::parse_double(field);
    if (!value || !std::isfinite(*value)) {
      throw Error(ErrorCode::config, source_ + ": key '" + key + "' has a non-numeric entry");
    }
    out.push_back(*value);
  }
  return out;
}

}  // namespace strokepath
