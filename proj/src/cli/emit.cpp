#include "bogo/cli/emit.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <ostream>

#include "bogo/error.hpp"
#include "bogo/simd/kernels.hpp"

#ifndef BOGO_VERSION
#define BOGO_VERSION "0.0.0"
#endif

namespace bogo::cli {

Table protocol_table(const ProtocolResult& result) {
  Table t;
  t.columns = {"trial", "lambda_sent", "expectation", "decoded", "residual", "variance", "leakage", "channel_id", "seed"};
  for (const TrialRecord& r : result.records)
    t.rows.push_back({static_cast<std::uint64_t>(r.trial), static_cast<std::int64_t>(r.lambda_sent), r.expectation,
                      static_cast<std::int64_t>(r.decoded), r.residual, r.variance, r.leakage,
                      static_cast<std::uint64_t>(r.channel_id), r.seed});
  t.summary = {{"trials", static_cast<std::uint64_t>(result.records.size())},
               {"valid_trials", static_cast<std::uint64_t>(result.valid_trials)},
               {"invalid_trials", static_cast<std::uint64_t>(result.invalid_trials)},
               {"correct_trials", static_cast<std::uint64_t>(result.correct_trials)},
               {"success_rate", result.success_rate},
               {"worst_residual", result.worst_residual},
               {"max_leakage", result.max_leakage}};
  return t;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

namespace {

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_real(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string out = "\"";
          for (char ch : v) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
          return out + "\"";
        } else return fmt::format("{}", v);
      },
      c);
}

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) out += fmt::format("\\u{:04x}", static_cast<int>(ch));
        else out += ch;
    }
  }
  return out + "\"";
}

std::string json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return std::isfinite(v) ? format_real(v) : "null";
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::string>) return json_string(v);
        else return fmt::format("{}", v);
      },
      c);
}

std::string config_json(const RunConfig& config, std::string_view indent) {
  std::string out = "{";
  for (std::size_t i = 0; i < config.values.size(); ++i) {
    out += fmt::format("{}\n{}  {}: {}", i ? "," : "", indent, json_string(config.values[i].first),
                       json_string(config.values[i].second));
  }
  return out + fmt::format("\n{}}}", indent);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  out << content;
  out.flush();
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += "\n";
  }
  return out;
}

std::string provenance_json(const RunConfig& config) {
  return fmt::format(
      "{{\n  \"tool\": \"bogochannel\",\n  \"version\": {},\n  \"subcommand\": {},\n  \"seed\": {},\n"
      "  \"kernels\": {},\n  \"config\": {}\n}}\n",
      json_string(BOGO_VERSION), json_string(config.subcommand), config.seed(),
      json_string(simd::isa_name(simd::active_isa())), config_json(config, "  "));
}

std::string to_json(const Table& table, const RunConfig& config) {
  std::string out = "{\n";
  out += fmt::format(
      "  \"provenance\": {{\n    \"tool\": \"bogochannel\",\n    \"version\": {},\n    \"subcommand\": {},\n"
      "    \"seed\": {},\n    \"kernels\": {}\n  }},\n",
      json_string(BOGO_VERSION), json_string(config.subcommand), config.seed(),
      json_string(simd::isa_name(simd::active_isa())));
  out += "  \"config\": " + config_json(config, "  ") + ",\n";
  out += "  \"records\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += r ? ",\n    {" : "\n    {";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      out += fmt::format("{}{}: {}", i ? ", " : "", json_string(table.columns[i]), json_cell(table.rows[r][i]));
    out += "}";
  }
  out += table.rows.empty() ? "],\n" : "\n  ],\n";
  out += "  \"summary\": {";
  for (std::size_t i = 0; i < table.summary.size(); ++i)
    out += fmt::format("{}\n    {}: {}", i ? "," : "", json_string(table.summary[i].first), json_cell(table.summary[i].second));
  out += table.summary.empty() ? "}\n}\n" : "\n  }\n}\n";
  return out;
}

void emit(const Table& table, const RunConfig& config, std::ostream& stdout_stream) {
  const std::string format = config.text("format");
  const std::string path = config.text("output");
  std::string body;
  if (format == "csv") body = to_csv(table);
  else if (format == "json") body = to_json(table, config);
  else throw ValidationError(fmt::format("key 'format': expected csv or json, got '{}'", format));

  if (path == "-") {
    stdout_stream << body;
    stdout_stream.flush();
    return;
  }
  write_file(path, body);
  if (format == "csv") write_file(path + ".provenance.json", provenance_json(config));
}

}  // namespace bogo::cli
