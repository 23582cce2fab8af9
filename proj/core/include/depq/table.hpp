#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depq/error.hpp"

namespace depq {

/// Dictionary entry used for missing cells.
inline constexpr std::string_view kNaCategory = "⟨NA⟩";

enum class ColumnKind { Categorical, Continuous };

std::string_view to_string(ColumnKind kind);

/// One column of a table. Raw cell text is always retained so the column can
/// be re-typed; categorical columns additionally carry a sorted dictionary
/// and per-row codes, continuous columns carry parsed numbers (NaN for NA).
class Column {
 public:
  static Column categorical(std::string name, std::vector<std::string> cells);
  static Column continuous(std::string name, std::vector<std::string> cells);

  const std::string& name() const noexcept { return name_; }
  ColumnKind kind() const noexcept { return kind_; }
  bool is_categorical() const noexcept { return kind_ == ColumnKind::Categorical; }
  std::size_t size() const noexcept { return cells_.size(); }

  const std::vector<std::string>& cells() const noexcept { return cells_; }
  const std::string& cell(std::size_t row) const { return cells_.at(row); }
  bool is_na(std::size_t row) const { return cells_.at(row) == kNaCategory; }

  /// Categorical only (empty otherwise).
  const std::vector<std::uint32_t>& codes() const noexcept { return codes_; }
  const std::vector<std::string>& dictionary() const noexcept { return dictionary_; }

  /// Continuous only (empty otherwise).
  const std::vector<double>& numeric() const noexcept { return numeric_; }

  Column renamed(std::string name) const;

 private:
  Column() = default;

  std::string name_;
  ColumnKind kind_ = ColumnKind::Categorical;
  std::vector<std::string> cells_;
  std::vector<std::uint32_t> codes_;
  std::vector<std::string> dictionary_;
  std::vector<double> numeric_;
};

/// Immutable, dictionary-encoded dataset. Every transformation returns a new
/// Table; instances are safe to share read-only across threads.
class Table {
 public:
  Table(std::string name, std::vector<Column> columns);

  /// Convenience for fixtures: every column categorical, cells equal to
  /// kNaCategory are treated as missing.
  static Table from_rows(std::string name, std::vector<std::string> header,
                         const std::vector<std::vector<std::string>>& rows);

  const std::string& name() const noexcept { return name_; }
  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_columns() const noexcept { return columns_.size(); }
  const std::vector<Column>& columns() const noexcept { return columns_; }
  const Column& column(std::size_t index) const { return columns_.at(index); }

  std::optional<std::size_t> find_column(std::string_view name) const;
  std::size_t column_index(std::string_view name) const;
  std::vector<std::string> column_names() const;
  std::vector<std::size_t> categorical_columns() const;

  std::vector<std::string_view> row(std::size_t index) const;

  /// Identity shared by copies of this table, distinct for every constructed table.
  std::uint64_t id() const noexcept { return id_; }

  Table with_column(std::size_t index, Column column) const;
  Table with_name(std::string name) const;

 private:
  std::string name_;
  std::size_t n_rows_ = 0;
  std::vector<Column> columns_;
  std::uint64_t id_ = 0;
};

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
  std::vector<std::string> na_tokens = {"", "NA", "NaN", "null"};
  /// When false a file without data rows raises EmptyInput; when true it
  /// loads with a warning.
  bool allow_empty = false;
};

/// Parses RFC-4180 CSV. All columns come back categorical; call infer_kinds
/// to detect continuous ones.
Table parse_csv(std::istream& input, std::string name, const CsvOptions& options = {},
                Warnings* warnings = nullptr);
Table load_csv(const std::filesystem::path& path, const CsvOptions& options = {},
               Warnings* warnings = nullptr);

/// Writes raw cells back out; missing cells become empty fields.
void write_csv(std::ostream& output, const Table& table, char delimiter = ',');
void save_csv(const std::filesystem::path& path, const Table& table, char delimiter = ',');

struct KindOptions {
  std::size_t cardinality_threshold = 20;
  double numeric_fraction = 0.99;
};

Table infer_kinds(const Table& table, const KindOptions& options = {});

/// Forces a column back to categorical using its raw cell text.
Table as_categorical(const Table& table, std::size_t column);

/// Equal-width bin edges over a continuous column; `edges.size() == n_bins + 1`.
struct BinEdges {
  std::vector<double> edges;
  bool degenerate = false;
};

BinEdges equal_width_edges(const Table& table, std::size_t column, std::size_t n_bins,
                           Warnings* warnings = nullptr);

/// Replaces a continuous column with categorical "[lo,hi)" bins (last bin
/// closed). Values outside the edges clamp to the first or last bin.
Table discretize(const Table& table, std::size_t column, const BinEdges& edges);
Table discretize(const Table& table, std::size_t column, std::size_t n_bins, Warnings* warnings = nullptr);

/// Ordered, duplicate-free tuple of column indices.
class ColumnSelection {
 public:
  ColumnSelection(std::initializer_list<std::size_t> indices);
  explicit ColumnSelection(std::vector<std::size_t> indices);
  static ColumnSelection single(std::size_t index) { return ColumnSelection({index}); }

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool is_single() const noexcept { return indices_.size() == 1; }

  /// Range and kind checks against a table; throws InvalidSelection or
  /// ContinuousColumnError.
  void validate(const Table& table) const;
  std::string label(const Table& table) const;

  friend bool operator==(const ColumnSelection&, const ColumnSelection&) = default;

 private:
  std::vector<std::size_t> indices_;
};

using ValueTuple = std::vector<std::string>;

/// Distinct value tuples of a selection, sorted lexicographically.
struct TupleSet {
  std::vector<ValueTuple> tuples;
  std::size_t cardinality() const noexcept { return tuples.size(); }
};

/// Distinct co-occurring (a, b) pairs, stored as indices into the A and B
/// tuple sets and sorted.
struct PairRelation {
  TupleSet a;
  TupleSet b;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t pair_count() const noexcept { return pairs.size(); }
  bool contains(std::size_t a_index, std::size_t b_index) const;
};

/// Per-row dense ids for a selection's value tuples, numbered by first occurrence.
struct TupleIds {
  std::vector<std::uint32_t> ids;
  std::size_t distinct = 0;
};

TupleIds tuple_ids(const Table& table, const ColumnSelection& selection);

PairRelation relation(const Table& table, const ColumnSelection& a, const ColumnSelection& b);

/// Distinct values present in a column (dictionary entries actually used).
std::vector<std::string> present_values(const Table& table, std::size_t column);

std::string format_number(double value);

}  // namespace depq
