#ifndef TWOSPIN_CONFIG_HPP
#define TWOSPIN_CONFIG_HPP

// Flat "key = value" configuration: one pair per line, '#' comments,
// blank lines ignored. Later entries override earlier ones.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "twospin/error.hpp"

namespace twospin::config {

using KeyValues = std::map<std::string, std::string>;

inline std::string trim(std::string s) {
  const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

/// Splits "key=value"; throws DomainError on a missing '=' or empty key.
inline std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw DomainError("expected key=value, got '" + text + "'");
  auto key = trim(text.substr(0, eq));
  if (key.empty()) throw DomainError("empty key in '" + text + "'");
  return {key, trim(text.substr(eq + 1))};
}

inline KeyValues parse(std::istream& in) {
  KeyValues kv;
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    line = trim(line);
    if (line.empty()) continue;
    auto [k, v] = split_assignment(line);
    kv[k] = v;
  }
  return kv;
}

inline KeyValues parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  return parse(in);
}

/// Throws DomainError naming the offending key and listing the valid ones.
inline void require_known(const KeyValues& kv, const std::vector<std::string>& valid) {
  for (const auto& [k, v] : kv) {
    if (std::find(valid.begin(), valid.end(), k) != valid.end()) continue;
    std::string msg = "unknown key '" + k + "'; valid keys:";
    for (const auto& name : valid) msg += " " + name;
    throw DomainError(msg);
  }
}

inline double to_double(const std::string& key, const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw DomainError("key '" + key + "': not a number: '" + text + "'");
  return v;
}

inline long to_long(const std::string& key, const std::string& text) {
  long v = 0;
  const auto* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw DomainError("key '" + key + "': not an integer: '" + text + "'");
  return v;
}

inline bool to_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw DomainError("key '" + key + "': not a boolean: '" + text + "'");
}

/// Comma-separated list of numbers, or "start:stop:count" for an evenly
/// spaced grid including both ends.
inline std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (std::count(text.begin(), text.end(), ':') == 2) {
    std::istringstream ss(text);
    std::string a, b, n;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, n);
    const double lo = to_double(key, trim(a)), hi = to_double(key, trim(b));
    const long count = to_long(key, trim(n));
    if (count < 1) throw DomainError("key '" + key + "': grid count must be >= 1");
    for (long i = 0; i < count; ++i)
      out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
  }
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  if (out.empty()) throw DomainError("key '" + key + "': empty list");
  return out;
}

} // namespace twospin::config

#endif // TWOSPIN_CONFIG_HPP
