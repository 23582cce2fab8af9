#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

#include "depq/table.hpp"

namespace depq {

/// Portable seeded generator for all baselines.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard (the 10000th draw from the default seed 5489 is
/// 9981545732273789042). Bounded draws use rejection sampling on the raw
/// 64-bit output instead of std::uniform_int_distribution, whose algorithm is
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

enum class BaselineMethod { BootstrapRows, IndependentColumns, NoisySwap };

std::string_view to_string(BaselineMethod method);
/// Accepts "bootstrap", "independent", "noisy-swap".
BaselineMethod parse_baseline_method(std::string_view name);

struct BaselineSpec {
  BaselineMethod method = BaselineMethod::BootstrapRows;
  std::uint64_t seed = 0;
  std::size_t n_rows = 0;
  double swap_fraction = 0.0;

  void validate() const;
};

/// Synthesizes a table with the real table's schema from raw cells.
///
/// BootstrapRows: each output row r copies real row below(n_real).
/// IndependentColumns: column by column, each cell copies the same column of
///   real row below(n_real).
/// NoisySwap: BootstrapRows, then ceil(swap_fraction * n_rows) times pick a
///   row r1 = below(n), a column c = below(m) and a different row
///   r2 (below(n - 1), skipping r1) and swap their cells in column c.
///
/// The output keeps the input's column kinds (re-derived from raw cells).
Table generate(const Table& real, const BaselineSpec& spec);

}  // namespace depq
