#include "ingarch/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ingarch {

namespace {

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t");
  return s.substr(from, to - from + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* type) {
  throw std::runtime_error("config key '" + key + "': cannot parse '" + value + "' as " + type);
}

}  // namespace

KeyValues KeyValues::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str());
}

KeyValues KeyValues::from_string(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_number) + ": expected key = value");
    const std::string key = trim(trimmed.substr(0, eq));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(line_number) + ": empty key");
    kv.values_[key] = trim(trimmed.substr(eq + 1));
  }
  return kv;
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValues::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  double value = 0.0;
  const auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), value);
  if (res.ec != std::errc{} || res.ptr != it->second.data() + it->second.size())
    bad(key, it->second, "a real number");
  return value;
}

double KeyValues::require_double(const std::string& key) const {
  if (!has(key)) throw std::runtime_error("config key '" + key + "' is required");
  return get_double(key, 0.0);
}

long KeyValues::get_long(const std::string& key, long fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  long value = 0;
  const auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), value);
  if (res.ec != std::errc{} || res.ptr != it->second.data() + it->second.size())
    bad(key, it->second, "an integer");
  return value;
}

std::uint64_t KeyValues::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::uint64_t value = 0;
  const auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), value);
  if (res.ec != std::errc{} || res.ptr != it->second.data() + it->second.size())
    bad(key, it->second, "an unsigned integer");
  return value;
}

std::vector<double> KeyValues::get_doubles(const std::string& key) const {
  std::vector<double> out;
  const auto it = values_.find(key);
  if (it == values_.end()) return out;
  std::istringstream in(it->second);
  std::string field;
  while (std::getline(in, field, ',')) {
    const std::string token = trim(field);
    double value = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
      bad(key, token, "a real number");
    out.push_back(value);
  }
  return out;
}

std::vector<std::string> KeyValues::get_strings(const std::string& key) const {
  std::vector<std::string> out;
  const auto it = values_.find(key);
  if (it == values_.end()) return out;
  std::istringstream in(it->second);
  std::string field;
  while (std::getline(in, field, ',')) {
    const std::string token = trim(field);
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

std::vector<std::size_t> KeyValues::get_sizes(const std::string& key) const {
  std::vector<std::size_t> out;
  for (double v : get_doubles(key)) {
    if (v < 0.0) bad(key, std::to_string(v), "a nonnegative integer");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace ingarch
