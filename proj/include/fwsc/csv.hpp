#pragma once

// Minimal RFC 4180 reading and writing, plus the numeric format shared by
// every CSV the harness emits.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fwsc::csv {

using Row = std::vector<std::string>;

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Joins fields with commas and terminates the record with CRLF.
std::string format_row(const Row& fields);

/// Scientific notation, 17 significant digits ("1.2345678901234567E-05").
std::string format_number(double value);

/// Parses a whole document. Accepts LF or CRLF line breaks. Throws
/// std::runtime_error on an unterminated quote.
std::vector<Row> parse(std::string_view text);

struct Table {
  Row header;
  std::vector<Row> rows;

  /// Index of a header column; throws std::runtime_error if absent.
  std::size_t column(std::string_view name) const;
};

/// Reads a file with a header row. Every record must have the header's width.
Table read_table(const std::filesystem::path& path);

}  // namespace fwsc::csv
