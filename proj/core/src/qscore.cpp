#include "depq/qscore.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <thread>

#include "csv_out.hpp"
#include "json.hpp"

namespace depq {

namespace {

void check_pair(const Table& table, const ColumnSelection& a, const ColumnSelection& b) {
  a.validate(table);
  b.validate(table);
  if (a.is_single() && b.is_single() && a == b) {
    throw InvalidSelection("self-pair '" + a.label(table) + "' is not a valid Q-score pair");
  }
}

// Distinct (id_a, id_b) pairs. Dense bitmap when the product space is small.
std::size_t count_pairs(const TupleIds& a, const TupleIds& b) {
  const std::size_t n = a.ids.size();
  const std::uint64_t space = static_cast<std::uint64_t>(a.distinct) * b.distinct;
  if (space <= (std::uint64_t{1} << 24)) {
    std::vector<bool> seen(space, false);
    std::size_t count = 0;
    for (std::size_t r = 0; r < n; ++r) {
      const std::uint64_t key = static_cast<std::uint64_t>(a.ids[r]) * b.distinct + b.ids[r];
      if (!seen[key]) {
        seen[key] = true;
        ++count;
      }
    }
    return count;
  }
  std::vector<std::uint64_t> keys(n);
  for (std::size_t r = 0; r < n; ++r) keys[r] = (static_cast<std::uint64_t>(a.ids[r]) << 32) | b.ids[r];
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

ValueTuple row_tuple(const Table& table, const ColumnSelection& selection, std::size_t row) {
  ValueTuple tuple;
  tuple.reserve(selection.size());
  for (auto c : selection.indices()) tuple.push_back(table.column(c).cells()[row]);
  return tuple;
}

}  // namespace

std::string_view to_string(DependencyClass cls) {
  switch (cls) {
    case DependencyClass::Functional:
      return "functional";
    case DependencyClass::Logical:
      return "logical";
    case DependencyClass::Independent:
      return "independent";
  }
  return "unknown";
}

DependencyClass classify(const Rational& q) noexcept {
  if (q.is_zero()) return DependencyClass::Functional;
  if (q.is_one()) return DependencyClass::Independent;
  return DependencyClass::Logical;
}

Rational q_from_counts(std::size_t card_a, std::size_t card_b, std::size_t pair_count) {
  if (card_a == 0 || card_b <= 1) return Rational(0);
  return Rational(static_cast<std::int64_t>(pair_count) - static_cast<std::int64_t>(card_a),
                  static_cast<std::int64_t>(card_a) * static_cast<std::int64_t>(card_b - 1));
}

QScore q_score(const Table& table, const ColumnSelection& a, const ColumnSelection& b) {
  check_pair(table, a, b);
  const auto ids_a = tuple_ids(table, a);
  const auto ids_b = tuple_ids(table, b);
  const std::size_t pairs = count_pairs(ids_a, ids_b);
  return QScore{a, b, q_from_counts(ids_a.distinct, ids_b.distinct, pairs), ids_a.distinct, ids_b.distinct, pairs};
}

QScore q_score(const Table& table, std::size_t a, std::size_t b) {
  return q_score(table, ColumnSelection::single(a), ColumnSelection::single(b));
}

SummationTrace q_summation_trace(const Table& table, const ColumnSelection& a, const ColumnSelection& b) {
  check_pair(table, a, b);
  std::map<ValueTuple, std::set<ValueTuple>> co_occurring;
  std::set<ValueTuple> b_values;
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    auto tb = row_tuple(table, b, r);
    co_occurring[row_tuple(table, a, r)].insert(tb);
    b_values.insert(std::move(tb));
  }
  if (b_values.size() <= 1) {
    throw InvalidArgument("summed Q form needs |B| > 1 for '" + b.label(table) + "'");
  }

  SummationTrace trace;
  trace.card_b = b_values.size();
  const auto b_minus_one = static_cast<std::int64_t>(b_values.size() - 1);
  for (auto& [value, d] : co_occurring) {
    Rational g(static_cast<std::int64_t>(d.size()) - 1, b_minus_one);
    trace.s0 += g;
    trace.terms.push_back({value, {d.begin(), d.end()}, g});
  }
  trace.s1 = trace.s0 / Rational(static_cast<std::int64_t>(co_occurring.size()));
  return trace;
}

QScore q_score_by_summation(const Table& table, const ColumnSelection& a, const ColumnSelection& b) {
  const auto trace = q_summation_trace(table, a, b);
  std::size_t pairs = 0;
  for (const auto& term : trace.terms) pairs += term.co_occurring.size();
  return QScore{a, b, trace.s1, trace.terms.size(), trace.card_b, pairs};
}

ExclusionSet exclusion_set(const Table& table, const ColumnSelection& a, const ColumnSelection& b) {
  check_pair(table, a, b);
  const auto rel = relation(table, a, b);
  ExclusionSet out{a, b, rel.a.cardinality(), rel.b.cardinality(), {}};
  // rel.pairs is sorted, so a merge walk over A x B finds the gaps.
  std::size_t next = 0;
  for (std::size_t i = 0; i < rel.a.cardinality(); ++i) {
    for (std::size_t j = 0; j < rel.b.cardinality(); ++j) {
      if (next < rel.pairs.size() && rel.pairs[next] == std::make_pair(i, j)) {
        ++next;
        continue;
      }
      out.excluded.emplace_back(rel.a.tuples[i], rel.b.tuples[j]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// QMatrix

QMatrix::QMatrix(std::string dataset, std::vector<std::size_t> columns, std::vector<std::string> names,
                 std::vector<QScore> entries)
    : dataset_(std::move(dataset)),
      columns_(std::move(columns)),
      names_(std::move(names)),
      entries_(std::move(entries)) {
  const std::size_t k = columns_.size();
  if (names_.size() != k || entries_.size() != k * k - k) {
    throw InvalidArgument("QMatrix needs k*k-k entries for k columns");
  }
}

std::size_t QMatrix::position(std::size_t a, std::size_t b) const {
  const auto ia = std::find(columns_.begin(), columns_.end(), a);
  const auto ib = std::find(columns_.begin(), columns_.end(), b);
  if (ia == columns_.end() || ib == columns_.end() || a == b) {
    throw InvalidSelection("pair (" + std::to_string(a) + ", " + std::to_string(b) + ") is not in the Q-matrix");
  }
  const auto i = static_cast<std::size_t>(ia - columns_.begin());
  const auto j = static_cast<std::size_t>(ib - columns_.begin());
  const std::size_t k = columns_.size();
  return i * (k - 1) + (j < i ? j : j - 1);
}

const QScore& QMatrix::at(std::size_t a, std::size_t b) const { return entries_[position(a, b)]; }

const QScore& QMatrix::at(std::string_view a, std::string_view b) const {
  const auto ia = std::find(names_.begin(), names_.end(), a);
  const auto ib = std::find(names_.begin(), names_.end(), b);
  if (ia == names_.end() || ib == names_.end()) {
    throw InvalidSelection("pair (" + std::string(a) + ", " + std::string(b) + ") is not in the Q-matrix");
  }
  return at(columns_[static_cast<std::size_t>(ia - names_.begin())],
            columns_[static_cast<std::size_t>(ib - names_.begin())]);
}

QMatrix q_matrix(const Table& table, const std::vector<std::size_t>& columns, unsigned threads) {
  if (columns.size() < 2) {
    throw TooFewColumns("Q-matrix needs at least 2 categorical columns, got " + std::to_string(columns.size()));
  }
  ColumnSelection(columns).validate(table);  // also rejects duplicates

  const std::size_t k = columns.size();
  std::vector<TupleIds> ids;
  ids.reserve(k);
  for (auto c : columns) ids.push_back(tuple_ids(table, ColumnSelection::single(c)));

  std::vector<std::pair<std::size_t, std::size_t>> work;
  work.reserve(k * k - k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) work.emplace_back(i, j);
    }
  }

  std::vector<std::optional<QScore>> slots(work.size());
  auto evaluate = [&](std::size_t w) {
    const auto [i, j] = work[w];
    const std::size_t pairs = count_pairs(ids[i], ids[j]);
    slots[w] = QScore{ColumnSelection::single(columns[i]), ColumnSelection::single(columns[j]),
                      q_from_counts(ids[i].distinct, ids[j].distinct, pairs), ids[i].distinct, ids[j].distinct,
                      pairs};
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, work.size()));
  if (threads <= 1) {
    for (std::size_t w = 0; w < work.size(); ++w) evaluate(w);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t w = cursor.fetch_add(1); w < work.size(); w = cursor.fetch_add(1)) evaluate(w);
      });
    }
  }

  std::vector<QScore> entries;
  entries.reserve(slots.size());
  for (auto& slot : slots) entries.push_back(std::move(*slot));
  std::vector<std::string> names;
  for (auto c : columns) names.push_back(table.column(c).name());
  return QMatrix(table.name(), columns, std::move(names), std::move(entries));
}

// ---------------------------------------------------------------------------
// Histogram

const std::array<std::string_view, QHistogram::kBins>& QHistogram::labels() {
  static const std::array<std::string_view, kBins> kLabels = {
      "[0]",         "(0,0.1]",     "(0.1,0.2]", "(0.2,0.3]", "(0.3,0.4]", "(0.4,0.5]",
      "(0.5,0.6]",   "(0.6,0.7]",   "(0.7,0.8]", "(0.8,0.9]", "(0.9,1)",   "[1]"};
  return kLabels;
}

std::size_t histogram_bin(const Rational& q) {
  if (q.is_zero()) return 0;
  if (q.is_one()) return QHistogram::kBins - 1;
  for (std::int64_t tenth = 1; tenth <= 9; ++tenth) {
    if (q <= Rational(tenth, 10)) return static_cast<std::size_t>(tenth);
  }
  return 10;
}

QHistogram q_histogram(const QMatrix& matrix) {
  QHistogram h;
  for (const auto& entry : matrix.entries()) ++h.counts[histogram_bin(entry.value)];
  return h;
}

// ---------------------------------------------------------------------------
// Serialization

void write_qmatrix_csv(std::ostream& out, const QMatrix& matrix) {
  detail::CsvWriter csv(out);
  csv.row({"a", "b", "q_numerator", "q_denominator", "q_decimal", "class", "card_a", "card_b", "pair_count"});
  const auto& names = matrix.names();
  const std::size_t k = names.size();
  std::size_t w = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const auto& e = matrix.entries()[w++];
      csv.row({names[i], names[j], std::to_string(e.value.numerator()), std::to_string(e.value.denominator()),
               e.decimal(), std::string(to_string(classify(e))), std::to_string(e.card_a), std::to_string(e.card_b),
               std::to_string(e.pair_count)});
    }
  }
}

void write_histogram_csv(std::ostream& out, const QHistogram& histogram) {
  detail::CsvWriter csv(out);
  csv.row({"bin", "count"});
  for (std::size_t i = 0; i < QHistogram::kBins; ++i) {
    csv.row({std::string(QHistogram::labels()[i]), std::to_string(histogram.counts[i])});
  }
}

std::string qmatrix_to_json(const QMatrix& matrix, std::string_view generated_at) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "qmatrix";
  doc["generated_at"] = generated_at;
  doc["dataset"] = matrix.dataset();
  doc["columns"] = matrix.names();

  const auto& names = matrix.names();
  const std::size_t k = names.size();
  ordered_json entries = ordered_json::array();
  std::size_t w = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const auto& e = matrix.entries()[w++];
      entries.push_back(ordered_json{{"a", names[i]},
                                     {"b", names[j]},
                                     {"q_numerator", e.value.numerator()},
                                     {"q_denominator", e.value.denominator()},
                                     {"q_decimal", e.decimal()},
                                     {"class", to_string(classify(e))},
                                     {"card_a", e.card_a},
                                     {"card_b", e.card_b},
                                     {"pair_count", e.pair_count}});
    }
  }
  doc["entries"] = std::move(entries);

  const auto histogram = q_histogram(matrix);
  ordered_json bins = ordered_json::array();
  for (std::size_t i = 0; i < QHistogram::kBins; ++i) {
    bins.push_back(ordered_json{{"bin", QHistogram::labels()[i]}, {"count", histogram.counts[i]}});
  }
  doc["histogram"] = std::move(bins);
  return doc.dump(2) + "\n";
}

}  // namespace depq
