#include "depq/table.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace depq {

namespace {

std::uint64_t next_table_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t");
  return text.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

class CsvReader {
 public:
  CsvReader(std::string text, char delimiter) : text_(std::move(text)), delim_(delimiter) {
    if (text_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
  }

  /// Returns false at end of input. Completely empty lines are skipped.
  bool next(Record& record, std::size_t data_row) {
    record.fields.clear();
    while (pos_ < text_.size()) {
      if (text_[pos_] == '\n') {
        ++pos_;
        ++line_;
      } else if (text_[pos_] == '\r') {
        consume_newline();
      } else {
        break;
      }
    }
    if (pos_ >= text_.size()) return false;
    record.line = line_;

    std::string field;
    while (true) {
      field.clear();
      if (pos_ < text_.size() && text_[pos_] == '"') {
        ++pos_;
        bool closed = false;
        while (pos_ < text_.size()) {
          const char c = text_[pos_];
          if (c == '"') {
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
              field.push_back('"');
              pos_ += 2;
              continue;
            }
            ++pos_;
            closed = true;
            break;
          }
          if (c == '\n') ++line_;
          if (c == '\r' && !(pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n')) ++line_;
          field.push_back(c);
          ++pos_;
        }
        if (!closed) {
          throw ParseError(location(data_row, record) + "unterminated quoted field", data_row, record.line,
                           record.fields.size() + 1);
        }
        if (pos_ < text_.size() && text_[pos_] != delim_ && text_[pos_] != '\n' && text_[pos_] != '\r') {
          throw ParseError(location(data_row, record) + "unexpected character after closing quote", data_row,
                           record.line, record.fields.size() + 1);
        }
      } else {
        while (pos_ < text_.size()) {
          const char c = text_[pos_];
          if (c == delim_ || c == '\n' || c == '\r') break;
          if (c == '"') {
            throw ParseError(location(data_row, record) + "quote character inside unquoted field", data_row,
                             record.line, record.fields.size() + 1);
          }
          field.push_back(c);
          ++pos_;
        }
      }
      record.fields.push_back(field);
      if (pos_ >= text_.size()) break;
      if (text_[pos_] == delim_) {
        ++pos_;
        continue;
      }
      consume_newline();
      break;
    }
    return true;
  }

 private:
  void consume_newline() {
    if (text_[pos_] == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') ++pos_;
    ++pos_;
    ++line_;
  }

  static std::string location(std::size_t data_row, const Record& record) {
    std::string out = "line " + std::to_string(record.line);
    if (data_row > 0) out += " (row " + std::to_string(data_row) + ")";
    out += ", field " + std::to_string(record.fields.size() + 1) + ": ";
    return out;
  }

  std::string text_;
  char delim_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

void write_field(std::ostream& out, std::string_view value, char delimiter) {
  const bool needs_quotes = value.find_first_of(std::string{delimiter} + "\"\r\n") != std::string_view::npos;
  if (!needs_quotes) {
    out << value;
    return;
  }
  out << '"';
  for (char c : value) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::Categorical ? "categorical" : "continuous";
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // folds -0
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

// ---------------------------------------------------------------------------
// Column

Column Column::categorical(std::string name, std::vector<std::string> cells) {
  Column col;
  col.name_ = std::move(name);
  col.kind_ = ColumnKind::Categorical;
  col.cells_ = std::move(cells);

  col.dictionary_ = col.cells_;
  std::sort(col.dictionary_.begin(), col.dictionary_.end());
  col.dictionary_.erase(std::unique(col.dictionary_.begin(), col.dictionary_.end()), col.dictionary_.end());

  col.codes_.reserve(col.cells_.size());
  for (const auto& cell : col.cells_) {
    const auto it = std::lower_bound(col.dictionary_.begin(), col.dictionary_.end(), cell);
    col.codes_.push_back(static_cast<std::uint32_t>(it - col.dictionary_.begin()));
  }
  return col;
}

Column Column::continuous(std::string name, std::vector<std::string> cells) {
  Column col;
  col.name_ = std::move(name);
  col.kind_ = ColumnKind::Continuous;
  col.cells_ = std::move(cells);
  col.numeric_.reserve(col.cells_.size());
  for (const auto& cell : col.cells_) {
    const auto value = cell == kNaCategory ? std::nullopt : parse_number(cell);
    col.numeric_.push_back(value.value_or(std::numeric_limits<double>::quiet_NaN()));
  }
  return col;
}

Column Column::renamed(std::string name) const {
  Column copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

// ---------------------------------------------------------------------------
// Table

Table::Table(std::string name, std::vector<Column> columns)
    : name_(std::move(name)), columns_(std::move(columns)), id_(next_table_id()) {
  n_rows_ = columns_.empty() ? 0 : columns_.front().size();
  std::unordered_set<std::string> seen;
  for (const auto& col : columns_) {
    if (col.size() != n_rows_) {
      throw InvalidArgument("column '" + col.name() + "' has " + std::to_string(col.size()) + " values, expected " +
                            std::to_string(n_rows_));
    }
    if (!seen.insert(col.name()).second) throw InvalidArgument("duplicate column name '" + col.name() + "'");
  }
}

Table Table::from_rows(std::string name, std::vector<std::string> header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<std::string>> cells(header.size());
  for (auto& c : cells) c.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw InvalidArgument("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                            " values, expected " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < header.size(); ++c) cells[c].push_back(rows[r][c]);
  }
  std::vector<Column> columns;
  columns.reserve(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    columns.push_back(Column::categorical(std::move(header[c]), std::move(cells[c])));
  }
  return Table(std::move(name), std::move(columns));
}

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name() == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::column_index(std::string_view name) const {
  if (auto index = find_column(name)) return *index;
  throw InvalidSelection("unknown column '" + std::string(name) + "'");
}

std::vector<std::string> Table::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const auto& col : columns_) names.push_back(col.name());
  return names;
}

std::vector<std::size_t> Table::categorical_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].is_categorical()) out.push_back(i);
  }
  return out;
}

std::vector<std::string_view> Table::row(std::size_t index) const {
  if (index >= n_rows_) throw InvalidArgument("row index out of range");
  std::vector<std::string_view> out;
  out.reserve(columns_.size());
  for (const auto& col : columns_) out.emplace_back(col.cells()[index]);
  return out;
}

Table Table::with_column(std::size_t index, Column column) const {
  auto columns = columns_;
  columns.at(index) = std::move(column);
  return Table(name_, std::move(columns));
}

Table Table::with_name(std::string name) const { return Table(std::move(name), columns_); }

// ---------------------------------------------------------------------------
// CSV

Table parse_csv(std::istream& input, std::string name, const CsvOptions& options, Warnings* warnings) {
  std::string text{std::istreambuf_iterator<char>(input), std::istreambuf_iterator<char>()};
  if (input.bad()) throw IoError("failed reading '" + name + "'");
  if (options.delimiter == '"' || options.delimiter == '\n' || options.delimiter == '\r') {
    throw InvalidArgument("invalid CSV delimiter");
  }

  CsvReader reader(std::move(text), options.delimiter);
  const std::unordered_set<std::string> na(options.na_tokens.begin(), options.na_tokens.end());

  Record record;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> cells;
  std::size_t width = 0;
  std::size_t data_row = 0;
  bool have_width = false;

  if (options.has_header) {
    if (!reader.next(record, 0)) throw EmptyInput("'" + name + "' is empty (no header row)");
    header = record.fields;
    width = header.size();
    have_width = true;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (!seen.insert(header[i]).second) {
        throw ParseError("line " + std::to_string(record.line) + ": duplicate column name '" + header[i] + "'", 0,
                         record.line, i + 1);
      }
    }
    cells.resize(width);
  }

  while (reader.next(record, data_row + 1)) {
    ++data_row;
    if (!have_width) {
      width = record.fields.size();
      have_width = true;
      cells.resize(width);
      for (std::size_t i = 0; i < width; ++i) header.push_back("c" + std::to_string(i));
    }
    if (record.fields.size() != width) {
      throw ParseError("line " + std::to_string(record.line) + " (row " + std::to_string(data_row) + "): expected " +
                           std::to_string(width) + " fields, found " + std::to_string(record.fields.size()),
                       data_row, record.line, std::min(record.fields.size(), width) + 1);
    }
    for (std::size_t c = 0; c < width; ++c) {
      auto& field = record.fields[c];
      cells[c].push_back(na.contains(field) ? std::string(kNaCategory) : std::move(field));
    }
  }

  if (data_row == 0) {
    if (!options.allow_empty) throw EmptyInput("'" + name + "' has no data rows");
    if (warnings) warnings->push_back("'" + name + "' has no data rows");
  }

  std::vector<Column> columns;
  columns.reserve(width);
  for (std::size_t c = 0; c < width; ++c) {
    columns.push_back(Column::categorical(std::move(header[c]), std::move(cells[c])));
  }
  return Table(std::move(name), std::move(columns));
}

Table load_csv(const std::filesystem::path& path, const CsvOptions& options, Warnings* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_csv(in, path.stem().string(), options, warnings);
}

void write_csv(std::ostream& output, const Table& table, char delimiter) {
  for (std::size_t c = 0; c < table.n_columns(); ++c) {
    if (c > 0) output << delimiter;
    write_field(output, table.column(c).name(), delimiter);
  }
  output << '\n';
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    for (std::size_t c = 0; c < table.n_columns(); ++c) {
      if (c > 0) output << delimiter;
      const auto& cell = table.column(c).cells()[r];
      if (cell != kNaCategory) write_field(output, cell, delimiter);
    }
    output << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const Table& table, char delimiter) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_csv(out, table, delimiter);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Typing and binning

Table infer_kinds(const Table& table, const KindOptions& options) {
  std::vector<Column> columns;
  columns.reserve(table.n_columns());
  for (const auto& col : table.columns()) {
    std::size_t non_na = 0;
    std::size_t numeric = 0;
    std::unordered_set<std::string_view> distinct;
    for (const auto& cell : col.cells()) {
      if (cell == kNaCategory) continue;
      ++non_na;
      if (parse_number(cell)) ++numeric;
      distinct.insert(cell);
    }
    const bool is_continuous = non_na > 0 &&
                               static_cast<double>(numeric) >= options.numeric_fraction * static_cast<double>(non_na) &&
                               distinct.size() > options.cardinality_threshold;
    columns.push_back(is_continuous ? Column::continuous(col.name(), col.cells())
                                    : Column::categorical(col.name(), col.cells()));
  }
  return Table(table.name(), std::move(columns));
}

Table as_categorical(const Table& table, std::size_t column) {
  const auto& col = table.column(column);
  if (col.is_categorical()) return table;
  return table.with_column(column, Column::categorical(col.name(), col.cells()));
}

BinEdges equal_width_edges(const Table& table, std::size_t column, std::size_t n_bins, Warnings* warnings) {
  const auto& col = table.column(column);
  if (col.is_categorical()) throw InvalidArgument("column '" + col.name() + "' is not continuous");
  if (n_bins < 2) throw InvalidArgument("discretize needs at least 2 bins, got " + std::to_string(n_bins));

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : col.numeric()) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  BinEdges out;
  if (lo > hi) {
    out.degenerate = true;
    if (warnings) warnings->push_back("column '" + col.name() + "' has no finite values; binned as missing");
    return out;
  }
  if (lo == hi) {
    out.degenerate = true;
    out.edges = {lo, hi};
    if (warnings) warnings->push_back("column '" + col.name() + "' has a degenerate range; using a single bin");
    return out;
  }
  out.edges.reserve(n_bins + 1);
  const double width = hi - lo;
  for (std::size_t k = 0; k < n_bins; ++k) {
    out.edges.push_back(lo + width * static_cast<double>(k) / static_cast<double>(n_bins));
  }
  out.edges.push_back(hi);
  return out;
}

Table discretize(const Table& table, std::size_t column, const BinEdges& edges) {
  const auto& col = table.column(column);
  if (col.is_categorical()) throw InvalidArgument("column '" + col.name() + "' is not continuous");
  if (!edges.degenerate && edges.edges.size() < 3) throw InvalidArgument("bin edges must describe at least 2 bins");

  std::vector<std::string> labels;
  if (edges.edges.size() >= 2) {
    const std::size_t bins = edges.edges.size() - 1;
    for (std::size_t k = 0; k < bins; ++k) {
      const bool last = k + 1 == bins;
      labels.push_back("[" + format_number(edges.edges[k]) + "," + format_number(edges.edges[k + 1]) +
                       (last ? "]" : ")"));
    }
  }

  std::vector<std::string> cells;
  cells.reserve(col.size());
  for (double v : col.numeric()) {
    if (std::isnan(v) || labels.empty()) {
      cells.emplace_back(kNaCategory);
      continue;
    }
    // Interior edges only: index of the first interior edge strictly above v.
    const auto first = edges.edges.begin() + 1;
    const auto last = edges.edges.end() - 1;
    const auto bin = static_cast<std::size_t>(std::upper_bound(first, last, v) - first);
    cells.push_back(labels[bin]);
  }
  return table.with_column(column, Column::categorical(col.name(), std::move(cells)));
}

Table discretize(const Table& table, std::size_t column, std::size_t n_bins, Warnings* warnings) {
  return discretize(table, column, equal_width_edges(table, column, n_bins, warnings));
}

// ---------------------------------------------------------------------------
// Selections and relations

ColumnSelection::ColumnSelection(std::initializer_list<std::size_t> indices)
    : ColumnSelection(std::vector<std::size_t>(indices)) {}

ColumnSelection::ColumnSelection(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) throw InvalidSelection("column selection must not be empty");
  auto sorted = indices_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidSelection("column selection contains a duplicate index");
  }
}

void ColumnSelection::validate(const Table& table) const {
  for (auto index : indices_) {
    if (index >= table.n_columns()) {
      throw InvalidSelection("column index " + std::to_string(index) + " out of range (table has " +
                             std::to_string(table.n_columns()) + " columns)");
    }
    if (!table.column(index).is_categorical()) throw ContinuousColumnError(table.column(index).name());
  }
}

std::string ColumnSelection::label(const Table& table) const {
  std::vector<std::string> names;
  for (auto index : indices_) names.push_back(table.column(index).name());
  return join(names, ",");
}

bool PairRelation::contains(std::size_t a_index, std::size_t b_index) const {
  return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(a_index, b_index));
}

TupleIds tuple_ids(const Table& table, const ColumnSelection& selection) {
  selection.validate(table);
  const std::size_t n = table.n_rows();
  TupleIds out;
  out.ids.resize(n);

  {
    const auto& codes = table.column(selection.indices().front()).codes();
    std::vector<std::int64_t> remap(table.column(selection.indices().front()).dictionary().size(), -1);
    for (std::size_t r = 0; r < n; ++r) {
      auto& slot = remap[codes[r]];
      if (slot < 0) slot = static_cast<std::int64_t>(out.distinct++);
      out.ids[r] = static_cast<std::uint32_t>(slot);
    }
  }

  for (std::size_t s = 1; s < selection.size(); ++s) {
    const auto& col = table.column(selection.indices()[s]);
    const auto& codes = col.codes();
    const std::uint64_t radix = col.dictionary().size();
    std::unordered_map<std::uint64_t, std::uint32_t> dense;
    dense.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      const std::uint64_t key = static_cast<std::uint64_t>(out.ids[r]) * radix + codes[r];
      const auto [it, inserted] = dense.try_emplace(key, static_cast<std::uint32_t>(dense.size()));
      out.ids[r] = it->second;
    }
    out.distinct = dense.size();
  }
  return out;
}

namespace {

// Builds the sorted tuple set and the id -> sorted-position map.
std::pair<TupleSet, std::vector<std::size_t>> materialize(const Table& table, const ColumnSelection& selection,
                                                          const TupleIds& ids) {
  std::vector<std::size_t> representative(ids.distinct, 0);
  std::vector<bool> seen(ids.distinct, false);
  for (std::size_t r = 0; r < ids.ids.size(); ++r) {
    if (!seen[ids.ids[r]]) {
      seen[ids.ids[r]] = true;
      representative[ids.ids[r]] = r;
    }
  }
  std::vector<std::pair<ValueTuple, std::size_t>> keyed;
  keyed.reserve(ids.distinct);
  for (std::size_t id = 0; id < ids.distinct; ++id) {
    ValueTuple tuple;
    for (auto c : selection.indices()) tuple.push_back(table.column(c).cells()[representative[id]]);
    keyed.emplace_back(std::move(tuple), id);
  }
  std::sort(keyed.begin(), keyed.end());

  TupleSet set;
  std::vector<std::size_t> position(ids.distinct);
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    position[keyed[i].second] = i;
    set.tuples.push_back(std::move(keyed[i].first));
  }
  return {std::move(set), std::move(position)};
}

}  // namespace

PairRelation relation(const Table& table, const ColumnSelection& a, const ColumnSelection& b) {
  const auto ids_a = tuple_ids(table, a);
  const auto ids_b = tuple_ids(table, b);
  auto [set_a, pos_a] = materialize(table, a, ids_a);
  auto [set_b, pos_b] = materialize(table, b, ids_b);

  PairRelation out;
  out.pairs.reserve(table.n_rows());
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    out.pairs.emplace_back(pos_a[ids_a.ids[r]], pos_b[ids_b.ids[r]]);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  out.pairs.erase(std::unique(out.pairs.begin(), out.pairs.end()), out.pairs.end());
  out.a = std::move(set_a);
  out.b = std::move(set_b);
  return out;
}

std::vector<std::string> present_values(const Table& table, std::size_t column) {
  const auto& cells = table.column(column).cells();
  std::set<std::string> values(cells.begin(), cells.end());
  return {values.begin(), values.end()};
}

}  // namespace depq
