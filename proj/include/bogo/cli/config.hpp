#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bogo::cli {

enum class ValueType { integer, real, text, int_list, real_list, boolean };

struct OptionSpec {
  std::string key;
  ValueType type;
  std::string default_value;
  std::string help;
};

// Options valid for every subcommand (format, output, seed, threads).
const std::vector<OptionSpec>& global_options();
const std::vector<std::string>& subcommand_names();
// Throws ValidationError for an unknown subcommand.
const std::vector<OptionSpec>& subcommand_options(std::string_view subcommand);

// Flat `key = value` lines. Lines before any `[section]` header form the
// global area; `#` and `;` start comment lines.
struct ConfigEntry {
  std::string value;
  int line = 0;
};
struct ConfigFile {
  std::string origin;
  std::map<std::string, std::map<std::string, ConfigEntry>> sections;  // "" is the global area
};

ConfigFile parse_config_text(std::string_view text, std::string_view origin);
ConfigFile load_config(const std::string& path);

// Fully resolved, typed parameter table. Precedence: defaults < config file
// global area < config file [subcommand] section < command-line flags.
class RunConfig {
 public:
  std::string subcommand;
  // Global keys first, then the subcommand's keys, each in schema order.
  std::vector<std::pair<std::string, std::string>> values;

  const std::string& raw(std::string_view key) const;
  std::int64_t integer(std::string_view key) const;
  double real(std::string_view key) const;
  std::string text(std::string_view key) const { return raw(key); }
  bool boolean(std::string_view key) const;
  std::vector<std::int64_t> int_list(std::string_view key) const;
  std::vector<double> real_list(std::string_view key) const;
  std::uint64_t seed() const;
};

// Validates every value against its type and names the offending key on
// failure. File keys unknown to the schema are rejected with their line.
RunConfig resolve_config(std::string_view subcommand, const ConfigFile* file,
                         const std::map<std::string, std::string>& flags);

}  // namespace bogo::cli
