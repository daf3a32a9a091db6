#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bogo/cli/config.hpp"
#include "bogo/protocol.hpp"

namespace bogo::cli {

using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string, bool>;

// Rows of one result set plus scalar summary entries.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
};

// Fixed protocol header: trial, lambda_sent, expectation, decoded, residual,
// variance, leakage, channel_id, seed.
Table protocol_table(const ProtocolResult& result);

// 17 significant digits, enough to round-trip every double.
std::string format_real(double x);

std::string to_csv(const Table& table);
// {"provenance": ..., "config": ..., "records": [...], "summary": {...}}
std::string to_json(const Table& table, const RunConfig& config);
std::string provenance_json(const RunConfig& config);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes to `config.text("output")` ("-" is stdout) in the configured format.
// A CSV written to a file gets a `<path>.provenance.json` sidecar.
void emit(const Table& table, const RunConfig& config, std::ostream& stdout_stream);

}  // namespace bogo::cli
