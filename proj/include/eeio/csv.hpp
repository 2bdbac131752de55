#pragma once

#include <string>
#include <vector>

#include "eeio/errors.hpp"

namespace eeio::csv {

/// One parsed data line with its 1-based line number in the source file.
struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// A parsed CSV file: schema tags from the leading "#eeio-schema v1" comment
/// line plus all non-comment rows (including the header row).
struct File {
  std::string path;
  std::vector<std::string> schema_tags;  // tokens after the version marker
  std::vector<Row> rows;

  bool has_tag(const std::string& tag) const;
  /// Value of a "key=value" schema tag, or "" when absent.
  std::string tag_value(const std::string& key) const;
};

/// Reads and tokenizes a CSV file. Fields are comma-separated; quoted fields
/// may contain commas and doubled quotes. The first line must be the schema
/// comment "#eeio-schema v1" (optionally followed by tags). Encoding is
/// UTF-8 with "." as decimal point.
File read_file(const std::string& path);

std::string quote_field(const std::string& field);
std::string join_row(const std::vector<std::string>& fields);

/// Parses a finite double; throws NonNumericCell naming file/line on failure
/// (including "nan"/"inf" text, which is rejected).
double parse_number(const std::string& text, const std::string& path,
                    std::size_t line);

}  // namespace eeio::csv
