#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "depq/table.hpp"

namespace depq {

/// Rows grouped by equal value tuples on `attrs`, with singleton groups
/// dropped. Classes hold ascending row indices and are ordered by first row.
class StrippedPartition {
 public:
  StrippedPartition(std::uint64_t table_id, std::size_t n_rows, std::vector<std::size_t> attrs,
                    std::vector<std::vector<std::uint32_t>> classes);

  const std::vector<std::size_t>& attrs() const noexcept { return attrs_; }
  const std::vector<std::vector<std::uint32_t>>& classes() const noexcept { return classes_; }
  std::size_t n_rows() const noexcept { return n_rows_; }
  std::uint64_t table_id() const noexcept { return table_id_; }

  /// Class count with stripped singletons included.
  std::size_t n_classes_unstripped() const noexcept { return n_rows_ - stripped_rows_ + classes_.size(); }

  friend bool operator==(const StrippedPartition& a, const StrippedPartition& b) {
    return a.n_rows_ == b.n_rows_ && a.attrs_ == b.attrs_ && a.classes_ == b.classes_;
  }

 private:
  std::uint64_t table_id_;
  std::size_t n_rows_;
  std::vector<std::size_t> attrs_;
  std::vector<std::vector<std::uint32_t>> classes_;
  std::size_t stripped_rows_ = 0;  // rows covered by stored classes
};

StrippedPartition partition(const Table& table, const std::vector<std::size_t>& attrs);

/// Partition product; equals the partition of the attribute union.
StrippedPartition refine(const StrippedPartition& p, const StrippedPartition& q);

bool fd_holds(const Table& table, const std::vector<std::size_t>& lhs, std::size_t rhs);

struct FunctionalDependency {
  std::vector<std::string> lhs;  // sorted column names
  std::string rhs;
  /// lhs determines every analyzed column.
  bool lhs_is_key = false;

  /// "A,B -> C"
  std::string to_string() const;

  friend bool operator==(const FunctionalDependency& a, const FunctionalDependency& b) {
    return a.lhs == b.lhs && a.rhs == b.rhs;
  }
  friend bool operator<(const FunctionalDependency& a, const FunctionalDependency& b) {
    return a.to_string() < b.to_string();
  }
};

FunctionalDependency make_fd(std::vector<std::string> lhs, std::string rhs);

struct FDSet {
  std::string table;
  std::vector<std::string> columns;  // analyzed columns, table order
  std::size_t max_lhs = 0;
  /// Sorted by canonical rendering.
  std::vector<FunctionalDependency> fds;

  std::size_t size() const noexcept { return fds.size(); }
  bool contains(const FunctionalDependency& fd) const;
  std::size_t key_count() const;
};

inline constexpr std::size_t kDefaultMaxLhs = 3;

/// Level-wise search for all minimal, non-trivial FDs with |lhs| <= max_lhs
/// among the given categorical columns.
FDSet discover_fds(const Table& table, const std::vector<std::size_t>& columns, std::size_t max_lhs = kDefaultMaxLhs);

/// One FD per line, sorted.
void write_fds_text(std::ostream& out, const FDSet& set);
std::string fds_to_json(const FDSet& set, std::string_view generated_at);

}  // namespace depq
