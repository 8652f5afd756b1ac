#include "settings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "plsga/error.hpp"

namespace plsga::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string_view to_string(Source s) noexcept {
  switch (s) {
    case Source::default_value:
      return "default";
    case Source::config_file:
      return "config";
    case Source::flag:
      return "flag";
  }
  return "unknown";
}

void Settings::declare(std::string key, std::string default_value, std::string help) {
  if (contains(key)) {
    throw ConfigError("setting '" + key + "' declared twice");
  }
  tunables_.push_back({std::move(key), std::move(default_value), std::move(help), Source::default_value});
}

bool Settings::contains(std::string_view key) const noexcept {
  return std::any_of(tunables_.begin(), tunables_.end(), [&](const Tunable& t) { return t.key == key; });
}

const Tunable& Settings::at(std::string_view key) const {
  for (const Tunable& t : tunables_) {
    if (t.key == key) return t;
  }
  throw ConfigError("unknown setting '" + std::string(key) + "'");
}

Tunable& Settings::find(std::string_view key) {
  return const_cast<Tunable&>(std::as_const(*this).at(key));
}

void Settings::apply_config_text(std::string_view text, std::string_view origin) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + "expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(where + "missing key before '='");
    if (!contains(key)) throw ConfigError(where + "unknown key '" + key + "'");
    Tunable& t = find(key);
    t.value = value;
    t.source = Source::config_file;
    if (end == text.size()) break;
  }
}

void Settings::apply_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(buf.str(), path.string());
}

void Settings::set_flag(std::string_view key, std::string value) {
  Tunable& t = find(key);
  t.value = std::move(value);
  t.source = Source::flag;
}

void Settings::bad_value(std::string_view key, std::string_view expected) const {
  const Tunable& t = at(key);
  throw ConfigError(std::string(key) + " (from " + std::string(to_string(t.source)) + "): expected " +
                    std::string(expected) + ", got '" + t.value + "'");
}

std::uint64_t Settings::u64(std::string_view key) const {
  const std::string& v = text(key);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, "a non-negative integer");
  return out;
}

std::size_t Settings::count(std::string_view key) const { return static_cast<std::size_t>(u64(key)); }

double Settings::real(std::string_view key) const {
  const std::string& v = text(key);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, "a number");
  return out;
}

bool Settings::toggle(std::string_view key) const {
  const std::string& v = text(key);
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  bad_value(key, "on or off");
}

}  // namespace plsga::cli
