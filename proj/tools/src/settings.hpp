#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace plsga::cli {

enum class Source { default_value, config_file, flag };

std::string_view to_string(Source s) noexcept;

struct Tunable {
  std::string key;
  std::string value;
  std::string help;
  Source source = Source::default_value;
};

/// Named string-valued settings resolved from defaults, a `key = value` config
/// file and command-line flags, in increasing precedence.
class Settings {
 public:
  void declare(std::string key, std::string default_value, std::string help);

  bool contains(std::string_view key) const noexcept;
  const std::vector<Tunable>& all() const noexcept { return tunables_; }
  const Tunable& at(std::string_view key) const;

  /// Lines are `key = value`; blank lines and lines starting with '#' are
  /// skipped. Errors name the origin and line.
  void apply_config_text(std::string_view text, std::string_view origin);
  void apply_config_file(const std::filesystem::path& path);
  void set_flag(std::string_view key, std::string value);

  const std::string& text(std::string_view key) const { return at(key).value; }
  std::size_t count(std::string_view key) const;
  std::uint64_t u64(std::string_view key) const;
  double real(std::string_view key) const;
  /// on/off, true/false, yes/no, 1/0.
  bool toggle(std::string_view key) const;

 private:
  Tunable& find(std::string_view key);
  [[noreturn]] void bad_value(std::string_view key, std::string_view expected) const;

  std::vector<Tunable> tunables_;
};

}  // namespace plsga::cli
