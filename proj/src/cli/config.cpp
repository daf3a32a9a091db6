#include "bogo/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "bogo/error.hpp"

namespace bogo::cli {

namespace {

using VT = ValueType;

const std::map<std::string, std::vector<OptionSpec>, std::less<>>& schemas() {
  static const std::map<std::string, std::vector<OptionSpec>, std::less<>> s = {
      {"verify-commutators",
       {{"modes", VT::integer, "2", "modes per field"},
        {"trials", VT::integer, "200", "random symmetric generators to test"},
        {"strength", VT::real, "0.3", "coefficient range [-s, s]"},
        {"tolerance", VT::real, "1e-12", "largest acceptable relative commutator"},
        {"fock-pairs", VT::integer, "0", "random operator pairs cross-checked in Fock space"},
        {"fock-cutoff", VT::integer, "4", "cutoff of the Fock cross-check"},
        {"fock-tolerance", VT::real, "1e-8", "tolerance of the Fock cross-check"}}},
      {"protocol-run",
       {{"alphabet", VT::int_list, "0,1,2,3,4", "eigenvalues to send"},
        {"labels", VT::real_list, "1", "mode labels (wavevectors)"},
        {"weights", VT::real_list, "", "mode weights rho(k); empty for uniform"},
        {"family", VT::text, "symmetric", "identity | symmetric | asymmetric | expanding"},
        {"ensemble", VT::integer, "100", "number of random channels"},
        {"strength", VT::real, "0.3", "random coefficient range"},
        {"cutoff", VT::integer, "0", "occupation cutoff per slot, 0 for automatic"},
        {"leakage-budget", VT::real, "1e-6", "largest acceptable truncation leakage per trial"},
        {"extra-pairs", VT::integer, "0", "extra Schwinger pairs in the eigenstate profile"},
        {"decay", VT::real, "0.5", "amplitude ratio between successive profile pairs"},
        {"k", VT::real, "1", "expanding family: wavevector"},
        {"mass", VT::real, "1", "expanding family: field mass"},
        {"epsilon", VT::real, "1", "expanding family: expansion amplitude"},
        {"sigma", VT::real, "1", "expanding family: expansion rate"},
        {"tolerance", VT::real, "1e-12", "Krylov error budget per evolution"}}},
      {"channel-expanding",
       {{"k", VT::real_list, "0.25,0.5,1,2", "wavevectors"},
        {"mass", VT::real_list, "1", "field masses"},
        {"epsilon", VT::real_list, "1", "expansion amplitudes"},
        {"sigma", VT::real, "1", "expansion rate"},
        {"ode-tolerance", VT::real, "1e-13", "mode-equation integrator tolerance"},
        {"agreement", VT::real, "1e-6", "closed form vs oracle and channel vs map tolerance"},
        {"canonical-tolerance", VT::real, "1e-8", "tolerance on |alpha|^2 - |beta|^2 - 1"}}},
      {"channel-rindler",
       {{"acceleration", VT::real, "1", "proper acceleration a (c = 1)"},
        {"k-window", VT::real_list, "0.001,100,8001", "Rindler frequency window: min,max,count"},
        {"k-spacing", VT::text, "linear", "linear | log"},
        {"l-samples", VT::real_list, "0.5,1,2,4,8", "Minkowski wavevectors for the constraint matrices"},
        {"off-diagonal-tolerance", VT::real, "0.05", "relative bound on first-constraint off-diagonals"},
        {"second-tolerance", VT::real, "0.01", "relative bound on the second constraint"},
        {"split-k-window", VT::real_list, "0.05,5,64", "Rindler window of the regional split: min,max,count"},
        {"split-l-window", VT::real_list, "0.1,10,16", "log-spaced Minkowski window of the split: min,max,count"},
        {"lambda", VT::int_list, "1,2,3", "eigenvalues of the grid states"},
        {"grid-width", VT::real, "5", "Gaussian width of the grid states"},
        {"grid-spacing", VT::real, "0.05", "grid spacing"},
        {"split-tolerance", VT::real, "0.02", "relative bound on <L_I> - lambda W"}}},
      {"eigenstate-grid-check",
       {{"lambda", VT::int_list, "0,1,2,3", "eigenvalues to check"},
        {"width", VT::real, "5", "Gaussian width"},
        {"spacing", VT::real, "0.05", "grid spacing h"},
        {"extent-widths", VT::real, "6", "half-extent in Gaussian widths"},
        {"exclusion", VT::real, "0.5", "excluded disk radius around the origin, in widths"},
        {"refine", VT::boolean, "true", "also evaluate at h/2 and report the ratio"},
        {"tolerance", VT::real, "1e-3", "largest acceptable residual at h"}}},
      {"spectrum-check",
       {{"channels", VT::integer, "20", "random channels"},
        {"family", VT::text, "symmetric", "symmetric | asymmetric | identity"},
        {"strength", VT::real, "0.3", "random coefficient range"},
        {"labels", VT::real_list, "1", "mode labels"},
        {"cutoff", VT::integer, "5", "report cutoff (closed sector n + n~ <= cutoff)"},
        {"working-cutoff", VT::integer, "100", "cutoff of the evolved states"},
        {"tolerance", VT::real, "1e-8", "largest acceptable eigenvalue difference"},
        {"krylov-tolerance", VT::real, "1e-13", "Krylov error budget per evolution"}}},
  };
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  if constexpr (std::is_floating_point_v<T>) {
    if (*first == '+') ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<bool> parse_bool(std::string_view s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  return std::nullopt;
}

std::string_view type_name(ValueType t) {
  switch (t) {
    case VT::integer: return "an integer";
    case VT::real: return "a number";
    case VT::text: return "text";
    case VT::int_list: return "a comma-separated list of integers";
    case VT::real_list: return "a comma-separated list of numbers";
    case VT::boolean: return "true or false";
  }
  return "a value";
}

bool valid_value(ValueType t, std::string_view v) {
  switch (t) {
    case VT::integer: {
      std::int64_t x;
      return parse_number(v, x);
    }
    case VT::real: {
      double x;
      return parse_number(v, x) && std::isfinite(x);
    }
    case VT::text: return true;
    case VT::int_list:
      for (const std::string& item : split_list(v)) {
        std::int64_t x;
        if (!parse_number(item, x)) return false;
      }
      return true;
    case VT::real_list:
      for (const std::string& item : split_list(v)) {
        double x;
        if (!parse_number(item, x) || !std::isfinite(x)) return false;
      }
      return true;
    case VT::boolean: return parse_bool(v).has_value();
  }
  return false;
}

const OptionSpec* find_option(const std::vector<OptionSpec>& specs, std::string_view key) {
  for (const OptionSpec& s : specs)
    if (s.key == key) return &s;
  return nullptr;
}

}  // namespace

const std::vector<OptionSpec>& global_options() {
  static const std::vector<OptionSpec> g = {
      {"format", VT::text, "csv", "csv | json"},
      {"output", VT::text, "-", "output path, - for stdout"},
      {"seed", VT::integer, "7", "run seed (nonnegative)"},
      {"threads", VT::integer, "0", "worker threads, 0 for all cores"},
  };
  return g;
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"verify-commutators", "protocol-run",          "channel-expanding",
                                                 "channel-rindler",    "eigenstate-grid-check", "spectrum-check"};
  return names;
}

const std::vector<OptionSpec>& subcommand_options(std::string_view subcommand) {
  const auto it = schemas().find(subcommand);
  if (it == schemas().end()) throw ValidationError(fmt::format("unknown subcommand '{}'", subcommand));
  return it->second;
}

ConfigFile parse_config_text(std::string_view text, std::string_view origin) {
  ConfigFile file;
  file.origin = std::string(origin);
  file.sections[""];
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ValidationError(fmt::format("{}:{}: malformed section header", origin, number));
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (!schemas().contains(section))
        throw ValidationError(fmt::format("{}:{}: unknown section [{}]", origin, number, section));
      file.sections[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ValidationError(fmt::format("{}:{}: expected 'key = value'", origin, number));
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ValidationError(fmt::format("{}:{}: empty key", origin, number));
    auto& entries = file.sections[section];
    if (entries.contains(key))
      throw ValidationError(fmt::format("{}:{}: key '{}' set twice (first on line {})", origin, number, key,
                                        entries[key].line));
    // Section keys are checked here; the global area is checked against the
    // running subcommand in resolve_config.
    if (!section.empty() && !find_option(global_options(), key) && !find_option(subcommand_options(section), key))
      throw ValidationError(fmt::format("{}:{}: unknown key '{}' in [{}]", origin, number, key, section));
    entries[key] = {value, number};
  }
  return file;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot read config file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

const std::string& RunConfig::raw(std::string_view key) const {
  for (const auto& [k, v] : values)
    if (k == key) return v;
  throw ValidationError(fmt::format("no configuration key '{}'", key));
}

std::int64_t RunConfig::integer(std::string_view key) const {
  std::int64_t x = 0;
  if (!parse_number(raw(key), x)) throw ValidationError(fmt::format("key '{}': expected an integer", key));
  return x;
}

double RunConfig::real(std::string_view key) const {
  double x = 0.0;
  if (!parse_number(raw(key), x)) throw ValidationError(fmt::format("key '{}': expected a number", key));
  return x;
}

bool RunConfig::boolean(std::string_view key) const {
  const auto b = parse_bool(raw(key));
  if (!b) throw ValidationError(fmt::format("key '{}': expected true or false", key));
  return *b;
}

std::vector<std::int64_t> RunConfig::int_list(std::string_view key) const {
  std::vector<std::int64_t> out;
  for (const std::string& item : split_list(raw(key))) {
    std::int64_t x = 0;
    if (!parse_number(item, x)) throw ValidationError(fmt::format("key '{}': '{}' is not an integer", key, item));
    out.push_back(x);
  }
  return out;
}

std::vector<double> RunConfig::real_list(std::string_view key) const {
  std::vector<double> out;
  for (const std::string& item : split_list(raw(key))) {
    double x = 0.0;
    if (!parse_number(item, x)) throw ValidationError(fmt::format("key '{}': '{}' is not a number", key, item));
    out.push_back(x);
  }
  return out;
}

std::uint64_t RunConfig::seed() const {
  std::uint64_t x = 0;
  if (!parse_number(raw("seed"), x)) throw ValidationError("key 'seed': expected a nonnegative integer");
  return x;
}

RunConfig resolve_config(std::string_view subcommand, const ConfigFile* file,
                         const std::map<std::string, std::string>& flags) {
  const std::vector<OptionSpec>& sub = subcommand_options(subcommand);
  std::vector<const OptionSpec*> all;
  for (const OptionSpec& s : global_options()) all.push_back(&s);
  for (const OptionSpec& s : sub) all.push_back(&s);

  if (file) {
    for (const auto& [key, entry] : file->sections.at(""))
      if (!find_option(global_options(), key) && !find_option(sub, key))
        throw ValidationError(fmt::format("{}:{}: unknown key '{}' for {}", file->origin, entry.line, key, subcommand));
  }
  for (const auto& [key, value] : flags)
    if (!find_option(global_options(), key) && !find_option(sub, key))
      throw ValidationError(fmt::format("unknown option '--{}' for {}", key, subcommand));

  RunConfig cfg;
  cfg.subcommand = std::string(subcommand);
  for (const OptionSpec* spec : all) {
    std::string value = spec->default_value;
    std::string where = "default";
    if (file) {
      for (const std::string& section : {std::string(), std::string(subcommand)}) {
        const auto sec = file->sections.find(section);
        if (sec == file->sections.end()) continue;
        if (const auto e = sec->second.find(spec->key); e != sec->second.end()) {
          value = e->second.value;
          where = fmt::format("{}:{}", file->origin, e->second.line);
        }
      }
    }
    if (const auto f = flags.find(spec->key); f != flags.end()) {
      value = f->second;
      where = "command line";
    }
    if (!valid_value(spec->type, value))
      throw ValidationError(fmt::format("key '{}' ({}): expected {}, got '{}'", spec->key, where, type_name(spec->type), value));
    cfg.values.emplace_back(spec->key, value);
  }
  (void)cfg.seed();
  return cfg;
}

}  // namespace bogo::cli
