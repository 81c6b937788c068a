#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qbound::ingest {

enum class ColumnType { Integer, Real, Text };

std::string_view to_string(ColumnType type) noexcept;
ColumnType parse_column_type(std::string_view text);

// Column-oriented storage; exactly one of the value vectors is populated,
// matching `type`.
struct Column {
  std::string name;
  ColumnType type = ColumnType::Text;
  std::vector<std::int64_t> integers;
  std::vector<double> reals;
  std::vector<std::string> texts;
};

class TableData {
 public:
  TableData() = default;
  TableData(std::vector<Column> columns, std::uint64_t rows);

  std::uint64_t rows() const noexcept { return rows_; }
  std::size_t column_count() const noexcept { return columns_.size(); }
  const std::vector<Column>& columns() const noexcept { return columns_; }
  const Column& column(std::size_t index) const { return columns_.at(index); }
  std::optional<std::size_t> find_column(std::string_view name) const;

 private:
  std::vector<Column> columns_;
  std::uint64_t rows_ = 0;
};

struct LoadOptions {
  char delimiter = ',';
  bool header = true;  // without a header columns are named c1, c2, ...
  // A numeric hint turns "cannot parse" and blank cells into errors instead
  // of degrading the column to text.
  std::map<std::string, ColumnType, std::less<>> type_hints;
};

// Throws IoError if the file cannot be opened, ParseError on malformed input.
TableData load_table(const std::filesystem::path& path, const LoadOptions& options = {});
TableData parse_table(std::istream& in, const LoadOptions& options = {});

// Splits one CSV record. Double-quoted fields may contain the delimiter and
// "" escapes; embedded newlines are not supported.
std::vector<std::string> split_csv_line(std::string_view line, char delimiter);

}  // namespace qbound::ingest
