#pragma once

// Brute-force reference implementations used only by tests. They work on raw
// cell text and follow the definitions literally, sharing no code path with
// the library's dictionary codes, tuple ids or partitions.

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "depq/table.hpp"

namespace depq::testing {

using Tuple = std::vector<std::string>;

inline Tuple tuple_at(const Table& t, const std::vector<std::size_t>& cols, std::size_t row) {
  Tuple out;
  for (auto c : cols) out.push_back(t.column(c).cells()[row]);
  return out;
}

struct BruteCounts {
  std::size_t card_a = 0;
  std::size_t card_b = 0;
  std::size_t pairs = 0;
  std::set<std::pair<Tuple, Tuple>> relation;
  std::set<Tuple> a;
  std::set<Tuple> b;
};

inline BruteCounts brute_counts(const Table& t, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  BruteCounts out;
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    auto ta = tuple_at(t, a, r);
    auto tb = tuple_at(t, b, r);
    out.a.insert(ta);
    out.b.insert(tb);
    out.relation.emplace(std::move(ta), std::move(tb));
  }
  out.card_a = out.a.size();
  out.card_b = out.b.size();
  out.pairs = out.relation.size();
  return out;
}

/// Q as (numerator, denominator) before reduction; (0, 1) for the special cases.
inline std::pair<long long, long long> brute_q(const Table& t, const std::vector<std::size_t>& a,
                                               const std::vector<std::size_t>& b) {
  const auto c = brute_counts(t, a, b);
  if (c.card_a == 0 || c.card_b <= 1) return {0, 1};
  return {static_cast<long long>(c.pairs) - static_cast<long long>(c.card_a),
          static_cast<long long>(c.card_a) * static_cast<long long>(c.card_b - 1)};
}

/// Literal pairwise FD check: equal lhs tuples imply equal rhs values.
inline bool brute_fd_holds(const Table& t, const std::vector<std::size_t>& lhs, std::size_t rhs) {
  for (std::size_t i1 = 0; i1 < t.n_rows(); ++i1) {
    for (std::size_t i2 = i1 + 1; i2 < t.n_rows(); ++i2) {
      if (tuple_at(t, lhs, i1) == tuple_at(t, lhs, i2) && t.column(rhs).cells()[i1] != t.column(rhs).cells()[i2]) {
        return false;
      }
    }
  }
  return true;
}

inline std::vector<std::vector<std::size_t>> subsets_up_to(const std::vector<std::size_t>& items, std::size_t max_size) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t m = items.size();
  for (unsigned long mask = 1; mask < (1ul << m); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1ul << i)) s.push_back(items[i]);
    }
    if (s.size() <= max_size) out.push_back(std::move(s));
  }
  return out;
}

/// Every minimal non-trivial FD with |lhs| <= max_lhs, rendered "A,B -> C"
/// with sorted lhs names.
inline std::set<std::string> brute_minimal_fds(const Table& t, const std::vector<std::size_t>& columns,
                                               std::size_t max_lhs) {
  std::set<std::string> out;
  for (const auto& lhs : subsets_up_to(columns, max_lhs)) {
    for (auto rhs : columns) {
      bool in_lhs = false;
      for (auto c : lhs) in_lhs |= c == rhs;
      if (in_lhs || !brute_fd_holds(t, lhs, rhs)) continue;
      bool minimal = true;
      for (const auto& sub : subsets_up_to(lhs, lhs.size() - 1)) {
        if (brute_fd_holds(t, sub, rhs)) {
          minimal = false;
          break;
        }
      }
      if (!minimal) continue;
      std::vector<std::string> names;
      for (auto c : lhs) names.push_back(t.column(c).name());
      std::sort(names.begin(), names.end());
      std::string text;
      for (std::size_t i = 0; i < names.size(); ++i) text += (i ? "," : "") + names[i];
      out.insert(text + " -> " + t.column(rhs).name());
    }
  }
  return out;
}

}  // namespace depq::testing
