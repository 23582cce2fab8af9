#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "depq/rational.hpp"
#include "depq/table.hpp"

namespace depq {

enum class DependencyClass { Functional, Logical, Independent };

std::string_view to_string(DependencyClass cls);

/// Q-score of an ordered pair of selections: the share of non-forced value
/// combinations of B that actually co-occur with the values of A.
///
///   Q = (P - |A|) / (|A| * (|B| - 1))   if |A| >= 1 and |B| > 1
///   Q = 0                               otherwise
///
/// where P counts distinct co-occurring (a, b) tuples.
struct QScore {
  ColumnSelection a;
  ColumnSelection b;
  Rational value;
  std::size_t card_a = 0;
  std::size_t card_b = 0;
  std::size_t pair_count = 0;

  std::string decimal() const { return value.to_decimal(6); }
};

/// Exact classification; no tolerance is applied.
DependencyClass classify(const Rational& q) noexcept;
inline DependencyClass classify(const QScore& q) noexcept { return classify(q.value); }

/// Q from raw counts, including both degenerate cases.
Rational q_from_counts(std::size_t card_a, std::size_t card_b, std::size_t pair_count);

QScore q_score(const Table& table, const ColumnSelection& a, const ColumnSelection& b);
QScore q_score(const Table& table, std::size_t a, std::size_t b);

/// Per-value breakdown of the summed form: for every a, |D(a)| and
/// G(a) = (|D(a)| - 1) / (|B| - 1); s0 is the sum of G, s1 = s0 / |A|.
struct SummationTrace {
  struct Term {
    ValueTuple a;
    std::vector<ValueTuple> co_occurring;  // D(a), sorted
    Rational g;
  };
  std::vector<Term> terms;
  std::size_t card_b = 0;
  Rational s0;
  Rational s1;
};

/// Evaluates the per-value sum directly from raw cell text. Requires |B| > 1.
SummationTrace q_summation_trace(const Table& table, const ColumnSelection& a, const ColumnSelection& b);
QScore q_score_by_summation(const Table& table, const ColumnSelection& a, const ColumnSelection& b);

struct ExclusionSet {
  ColumnSelection a;
  ColumnSelection b;
  std::size_t card_a = 0;
  std::size_t card_b = 0;
  /// Value combinations in A x B never observed together, sorted.
  std::vector<std::pair<ValueTuple, ValueTuple>> excluded;
};

ExclusionSet exclusion_set(const Table& table, const ColumnSelection& a, const ColumnSelection& b);

/// All ordered pairs of distinct single columns, row-major in column order.
class QMatrix {
 public:
  QMatrix(std::string dataset, std::vector<std::size_t> columns, std::vector<std::string> names,
          std::vector<QScore> entries);

  const std::string& dataset() const noexcept { return dataset_; }
  const std::vector<std::size_t>& columns() const noexcept { return columns_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<QScore>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Lookup by table column indices; throws InvalidSelection for unknown or equal columns.
  const QScore& at(std::size_t a, std::size_t b) const;
  const QScore& at(std::string_view a, std::string_view b) const;

 private:
  std::size_t position(std::size_t a, std::size_t b) const;

  std::string dataset_;
  std::vector<std::size_t> columns_;
  std::vector<std::string> names_;
  std::vector<QScore> entries_;
};

/// `threads == 0` uses the hardware concurrency. Results do not depend on it.
QMatrix q_matrix(const Table& table, const std::vector<std::size_t>& columns, unsigned threads = 0);

/// Bins [0], (0,0.1], (0.1,0.2], ..., (0.8,0.9], (0.9,1), [1].
struct QHistogram {
  static constexpr std::size_t kBins = 12;
  static const std::array<std::string_view, kBins>& labels();
  std::array<std::size_t, kBins> counts{};
};

std::size_t histogram_bin(const Rational& q);
QHistogram q_histogram(const QMatrix& matrix);

void write_qmatrix_csv(std::ostream& out, const QMatrix& matrix);
void write_histogram_csv(std::ostream& out, const QHistogram& histogram);
/// Versioned JSON document with the matrix and its histogram.
std::string qmatrix_to_json(const QMatrix& matrix, std::string_view generated_at);

}  // namespace depq
