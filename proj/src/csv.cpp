#include "eeio/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace eeio::csv {

namespace {

constexpr const char* kSchemaMarker = "#eeio-schema";
constexpr const char* kSchemaVersion = "v1";

std::vector<std::string> split_fields(const std::string& line,
                                      const std::string& path, std::size_t lineno) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      if (!current.empty()) {
        throw Error(ErrorCode::MalformedHeader,
                    path + ":" + std::to_string(lineno) + ": stray quote");
      }
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted) {
    throw Error(ErrorCode::MalformedHeader,
                path + ":" + std::to_string(lineno) + ": unterminated quote");
  }
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace

bool File::has_tag(const std::string& tag) const {
  for (const auto& t : schema_tags) {
    if (t == tag) return true;
  }
  return false;
}

std::string File::tag_value(const std::string& key) const {
  const std::string prefix = key + "=";
  for (const auto& t : schema_tags) {
    if (t.starts_with(prefix)) return t.substr(prefix.size());
  }
  return {};
}

File read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::MissingFile, "cannot open '" + path + "'");
  }
  File file;
  file.path = path;

  std::string line;
  std::size_t lineno = 0;
  bool saw_schema = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      std::istringstream ss(line);
      std::string marker, version;
      ss >> marker >> version;
      if (marker != kSchemaMarker) {
        throw Error(ErrorCode::SchemaVersionMismatch,
                    path + ":1: expected leading '" + std::string(kSchemaMarker) +
                        " " + kSchemaVersion + "' comment line");
      }
      if (version != kSchemaVersion) {
        throw Error(ErrorCode::SchemaVersionMismatch,
                    path + ":1: unsupported schema version '" + version + "'");
      }
      std::string tag;
      while (ss >> tag) file.schema_tags.push_back(tag);
      saw_schema = true;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    file.rows.push_back(Row{lineno, split_fields(line, path, lineno)});
  }
  if (!saw_schema) {
    throw Error(ErrorCode::SchemaVersionMismatch, path + ": empty file");
  }
  return file;
}

std::string quote_field(const std::string& field) {
  bool needs_quotes = field.find_first_of(",\"\n") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += quote_field(fields[i]);
  }
  return out;
}

double parse_number(const std::string& text, const std::string& path,
                    std::size_t line) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin != end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end != begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorCode::NonNumericCell,
                path + ":" + std::to_string(line) + ": cell '" + text +
                    "' is not a finite number");
  }
  return value;
}

}  // namespace eeio::csv
