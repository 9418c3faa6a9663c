#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "adcminer/error.hpp"

namespace adcminer {

enum class ColumnType { String, Numeric };

inline std::string_view to_string(ColumnType t) {
  return t == ColumnType::Numeric ? "numeric" : "string";
}

struct ColumnInfo {
  std::string name;
  ColumnType type = ColumnType::String;

  friend bool operator==(const ColumnInfo&, const ColumnInfo&) = default;
};

/// Parses a cell as a finite decimal number. The whole cell must be consumed.
inline std::optional<double> parse_finite_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;  // from_chars rejects a leading plus
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

/// Shortest round-trip decimal rendering of a double.
inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

/// An immutable relation D with typed, column-major storage. Numeric cells
/// are stored as doubles; string cells as codes into a dataset-wide
/// dictionary so that equality across columns is a code comparison.
class Dataset {
 public:
  static constexpr std::int32_t kNullCode = -1;

  Dataset() = default;

  /// Builds a dataset from raw cells, inferring column types. A cell that is
  /// std::nullopt is null. A column is Numeric iff every non-null cell parses
  /// as a finite number.
  static Dataset from_cells(std::vector<std::string> names,
                            const std::vector<std::vector<std::optional<std::string>>>& rows) {
    Dataset d;
    const std::size_t k = names.size();
    d.columns_.resize(k);
    d.numbers_.resize(k);
    d.codes_.resize(k);
    d.null_.resize(k);
    d.rows_ = rows.size();
    for (std::size_t c = 0; c < k; ++c) {
      d.columns_[c].name = std::move(names[c]);
      bool numeric = true;
      for (const auto& row : rows) {
        if (row.size() != k) throw DataError("row width does not match column count");
        if (row[c] && !parse_finite_number(*row[c])) {
          numeric = false;
          break;
        }
      }
      d.columns_[c].type = numeric ? ColumnType::Numeric : ColumnType::String;
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (d.columns_[c].type == ColumnType::Numeric) {
        auto& col = d.numbers_[c];
        col.reserve(rows.size());
        d.null_[c].assign(rows.size(), 0);
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (rows[r][c]) {
            col.push_back(*parse_finite_number(*rows[r][c]));
          } else {
            col.push_back(0.0);
            d.null_[c][r] = 1;
          }
        }
      } else {
        auto& col = d.codes_[c];
        col.reserve(rows.size());
        for (const auto& row : rows) col.push_back(row[c] ? d.intern(*row[c]) : kNullCode);
      }
    }
    return d;
  }

  std::size_t row_count() const { return rows_; }
  std::size_t column_count() const { return columns_.size(); }
  const std::vector<ColumnInfo>& columns() const { return columns_; }
  const ColumnInfo& column(std::size_t c) const { return columns_[c]; }

  /// Column index by name, or nullopt.
  std::optional<std::size_t> find_column(std::string_view name) const {
    for (std::size_t c = 0; c < columns_.size(); ++c)
      if (columns_[c].name == name) return c;
    return std::nullopt;
  }

  bool is_null(std::size_t row, std::size_t col) const {
    if (columns_[col].type == ColumnType::Numeric) return null_[col][row] != 0;
    return codes_[col][row] == kNullCode;
  }

  double number(std::size_t row, std::size_t col) const { return numbers_[col][row]; }
  std::int32_t string_code(std::size_t row, std::size_t col) const { return codes_[col][row]; }
  const std::string& string_value(std::size_t row, std::size_t col) const {
    return dictionary_[static_cast<std::size_t>(codes_[col][row])];
  }

  const std::vector<double>& numeric_column(std::size_t col) const { return numbers_[col]; }
  const std::vector<std::uint8_t>& null_mask(std::size_t col) const { return null_[col]; }
  const std::vector<std::int32_t>& code_column(std::size_t col) const { return codes_[col]; }

  /// Text of a cell as it would be written back to CSV (nullopt for null).
  std::optional<std::string> cell_text(std::size_t row, std::size_t col) const {
    if (is_null(row, col)) return std::nullopt;
    if (columns_[col].type == ColumnType::Numeric) return format_number(number(row, col));
    return string_value(row, col);
  }

  /// A new dataset with the given rows, in the given order. Column types are
  /// kept from this dataset rather than re-inferred.
  Dataset select_rows(const std::vector<std::size_t>& rows) const {
    Dataset d;
    d.columns_ = columns_;
    d.dictionary_ = dictionary_;
    d.dictionary_index_ = dictionary_index_;
    d.rows_ = rows.size();
    const std::size_t k = columns_.size();
    d.numbers_.resize(k);
    d.codes_.resize(k);
    d.null_.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
      if (columns_[c].type == ColumnType::Numeric) {
        for (std::size_t r : rows) {
          d.numbers_[c].push_back(numbers_[c][r]);
          d.null_[c].push_back(null_[c][r]);
        }
      } else {
        for (std::size_t r : rows) d.codes_[c].push_back(codes_[c][r]);
      }
    }
    return d;
  }

  /// Cell-wise equality: same schema, same values, same null positions.
  friend bool operator==(const Dataset& a, const Dataset& b) {
    if (a.columns_ != b.columns_ || a.rows_ != b.rows_) return false;
    for (std::size_t c = 0; c < a.columns_.size(); ++c)
      for (std::size_t r = 0; r < a.rows_; ++r)
        if (a.cell_text(r, c) != b.cell_text(r, c)) return false;
    return true;
  }

 private:
  std::int32_t intern(const std::string& s) {
    auto [it, inserted] =
        dictionary_index_.try_emplace(s, static_cast<std::int32_t>(dictionary_.size()));
    if (inserted) dictionary_.push_back(s);
    return it->second;
  }

  std::vector<ColumnInfo> columns_;
  std::size_t rows_ = 0;
  std::vector<std::vector<double>> numbers_;
  std::vector<std::vector<std::uint8_t>> null_;
  std::vector<std::vector<std::int32_t>> codes_;
  std::vector<std::string> dictionary_;
  std::unordered_map<std::string, std::int32_t> dictionary_index_;
};

struct CsvOptions {
  bool has_header = true;
  std::string null_token;
};

namespace detail {

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// RFC-4180 record splitter. Blank lines are skipped.
inline std::vector<CsvRecord> split_csv(std::string_view text) {
  std::vector<CsvRecord> records;
  std::size_t i = 0;
  std::size_t line = 1;
  const std::size_t n = text.size();
  while (i < n) {
    if (text[i] == '\n' || text[i] == '\r') {
      if (text[i] == '\n') ++line;
      ++i;
      continue;
    }
    CsvRecord rec;
    rec.line = line;
    std::string field;
    bool done = false;
    while (!done) {
      field.clear();
      if (i < n && text[i] == '"') {
        ++i;
        for (;;) {
          if (i >= n) throw DataError("unterminated quoted field starting on line " + std::to_string(rec.line));
          const char ch = text[i];
          if (ch == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              field.push_back('"');
              i += 2;
            } else {
              ++i;
              break;
            }
          } else {
            if (ch == '\n') ++line;
            field.push_back(ch);
            ++i;
          }
        }
        if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
          throw DataError("unexpected character after closing quote on line " + std::to_string(line));
      } else {
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') field.push_back(text[i++]);
      }
      rec.fields.push_back(field);
      if (i < n && text[i] == ',') {
        ++i;
      } else {
        done = true;
        if (i < n && text[i] == '\r') ++i;
        if (i < n && text[i] == '\n') {
          ++i;
          ++line;
        }
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

inline bool needs_quoting(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

inline void write_field(std::ostream& out, std::string_view s) {
  if (!needs_quoting(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char ch : s) {
    if (ch == '"') out << '"';
    out << ch;
  }
  out << '"';
}

}  // namespace detail

/// Parses CSV text into a Dataset. Ragged rows raise DataError naming the
/// zero-based data row index.
inline Dataset parse_csv(std::string_view text, const CsvOptions& opts = {}) {
  auto records = detail::split_csv(text);
  std::vector<std::string> names;
  std::size_t first = 0;
  if (opts.has_header) {
    if (!records.empty()) {
      names = std::move(records[0].fields);
      first = 1;
    }
  } else if (!records.empty()) {
    for (std::size_t c = 0; c < records[0].fields.size(); ++c) names.push_back("c" + std::to_string(c));
  }
  std::vector<std::vector<std::optional<std::string>>> rows;
  rows.reserve(records.size() - first);
  for (std::size_t r = first; r < records.size(); ++r) {
    auto& rec = records[r];
    if (rec.fields.size() != names.size()) {
      throw DataError("row " + std::to_string(r - first) + " (line " + std::to_string(rec.line) + ") has " +
                      std::to_string(rec.fields.size()) + " fields, expected " + std::to_string(names.size()));
    }
    std::vector<std::optional<std::string>> row;
    row.reserve(rec.fields.size());
    for (auto& f : rec.fields) {
      if (f == opts.null_token) {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(std::move(f));
      }
    }
    rows.push_back(std::move(row));
  }
  return Dataset::from_cells(std::move(names), rows);
}

inline Dataset load_csv(const std::string& path, const CsvOptions& opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw DataError("read failure on input file: " + path);
  return parse_csv(buf.str(), opts);
}

/// Serializes a dataset as CSV with a header row. Nulls are written as
/// null_token; numbers in shortest round-trip form.
inline std::string to_csv(const Dataset& d, std::string_view null_token = "") {
  std::ostringstream out;
  for (std::size_t c = 0; c < d.column_count(); ++c) {
    if (c) out << ',';
    detail::write_field(out, d.column(c).name);
  }
  out << '\n';
  for (std::size_t r = 0; r < d.row_count(); ++r) {
    for (std::size_t c = 0; c < d.column_count(); ++c) {
      if (c) out << ',';
      auto text = d.cell_text(r, c);
      detail::write_field(out, text ? std::string_view(*text) : null_token);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace adcminer
