#include "qbound/table.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "qbound/errors.hpp"

namespace qbound::ingest {
namespace {

std::optional<std::int64_t> parse_integer(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_real(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string_view strip(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

}  // namespace

std::string_view to_string(ColumnType type) noexcept {
  switch (type) {
    case ColumnType::Integer: return "integer";
    case ColumnType::Real: return "real";
    case ColumnType::Text: return "text";
  }
  return "text";
}

ColumnType parse_column_type(std::string_view text) {
  if (text == "integer" || text == "int") return ColumnType::Integer;
  if (text == "real" || text == "double") return ColumnType::Real;
  if (text == "text" || text == "string") return ColumnType::Text;
  throw UsageError("unknown column type '" + std::string(text) + "'");
}

TableData::TableData(std::vector<Column> columns, std::uint64_t rows)
    : columns_(std::move(columns)), rows_(rows) {}

std::optional<std::size_t> TableData::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> split_csv_line(std::string_view line, char delimiter) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && strip(field).empty()) {
      field.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == delimiter) {
      fields.push_back(was_quoted ? field : std::string(strip(field)));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field");
  fields.push_back(was_quoted ? field : std::string(strip(field)));
  return fields;
}

TableData parse_table(std::istream& in, const LoadOptions& options) {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> cells;  // per column
  std::vector<std::size_t> line_of_row;
  std::string line;
  std::size_t line_number = 0;
  bool have_width = false;

  while (std::getline(in, line)) {
    ++line_number;
    if (strip(line).empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(line, options.delimiter);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_number) + ": " + e.what());
    }
    if (!have_width) {
      have_width = true;
      cells.resize(fields.size());
      if (options.header) {
        names = std::move(fields);
        continue;
      }
      for (std::size_t i = 0; i < fields.size(); ++i) names.push_back("c" + std::to_string(i + 1));
    }
    if (fields.size() != names.size()) {
      throw ParseError("line " + std::to_string(line_number) + ": expected " +
                       std::to_string(names.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) cells[i].push_back(std::move(fields[i]));
    line_of_row.push_back(line_number);
  }
  if (!have_width) throw ParseError("empty input: no header or rows");
  for (const auto& [name, type] : options.type_hints) {
    bool found = false;
    for (const auto& n : names) found = found || n == name;
    if (!found) throw UsageError("type hint for unknown column '" + name + "'");
  }

  const std::uint64_t rows = line_of_row.size();
  std::vector<Column> columns(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    Column& column = columns[c];
    column.name = names[c];
    const auto hint = options.type_hints.find(column.name);
    const std::optional<ColumnType> forced =
        hint == options.type_hints.end() ? std::nullopt : std::optional(hint->second);
    std::vector<std::string>& raw = cells[c];

    auto fail = [&](std::size_t row, const char* what) {
      throw ParseError("line " + std::to_string(line_of_row[row]) + ", column '" + column.name +
                       "': " + what);
    };

    if (forced != ColumnType::Text) {
      bool all_integer = forced != ColumnType::Real;
      bool all_real = true;
      for (std::size_t r = 0; r < raw.size() && (all_integer || all_real); ++r) {
        if (all_integer && !parse_integer(raw[r])) all_integer = false;
        if (!parse_real(raw[r])) {
          all_real = false;
          if (forced) fail(r, raw[r].empty() ? "empty value in numeric column"
                                             : "value is not numeric");
        }
      }
      if (forced == ColumnType::Integer && !all_integer) {
        for (std::size_t r = 0; r < raw.size(); ++r) {
          if (!parse_integer(raw[r])) fail(r, "value is not an integer");
        }
      }
      if (all_integer && !raw.empty()) {
        column.type = ColumnType::Integer;
        column.integers.reserve(raw.size());
        for (const auto& v : raw) column.integers.push_back(*parse_integer(v));
        continue;
      }
      if (all_real && (!raw.empty() || forced)) {
        column.type = forced.value_or(ColumnType::Real);
        if (column.type == ColumnType::Integer) continue;  // empty table, integer hint
        column.reals.reserve(raw.size());
        for (const auto& v : raw) column.reals.push_back(*parse_real(v));
        continue;
      }
    }
    column.type = ColumnType::Text;
    column.texts = std::move(raw);
  }
  return TableData(std::move(columns), rows);
}

TableData load_table(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_table(in, options);
}

}  // namespace qbound::ingest
