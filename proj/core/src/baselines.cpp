#include "depq/baselines.hpp"

#include <cmath>
#include <utility>

namespace depq {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("Rng::below needs a positive bound");
  // Values below `threshold` would bias the modulo; 2^64 mod bound of them.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

std::string_view to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::BootstrapRows:
      return "bootstrap";
    case BaselineMethod::IndependentColumns:
      return "independent";
    case BaselineMethod::NoisySwap:
      return "noisy-swap";
  }
  return "unknown";
}

BaselineMethod parse_baseline_method(std::string_view name) {
  if (name == "bootstrap") return BaselineMethod::BootstrapRows;
  if (name == "independent") return BaselineMethod::IndependentColumns;
  if (name == "noisy-swap") return BaselineMethod::NoisySwap;
  throw InvalidArgument("unknown baseline method '" + std::string(name) +
                        "' (expected bootstrap, independent or noisy-swap)");
}

void BaselineSpec::validate() const {
  if (n_rows < 1) throw InvalidArgument("baseline needs at least one output row");
  if (!(swap_fraction >= 0.0 && swap_fraction <= 1.0)) {
    throw InvalidArgument("swap fraction must lie in [0, 1]");
  }
}

namespace {

Column rebuild(const Column& like, std::vector<std::string> cells) {
  return like.is_categorical() ? Column::categorical(like.name(), std::move(cells))
                               : Column::continuous(like.name(), std::move(cells));
}

}  // namespace

Table generate(const Table& real, const BaselineSpec& spec) {
  spec.validate();
  if (real.n_rows() == 0) throw EmptyInput("cannot synthesize from '" + real.name() + "': it has no rows");

  const std::size_t m = real.n_columns();
  const std::uint64_t n_real = real.n_rows();
  Rng rng(spec.seed);
  std::vector<std::vector<std::string>> cells(m, std::vector<std::string>(spec.n_rows));

  if (spec.method == BaselineMethod::IndependentColumns) {
    for (std::size_t c = 0; c < m; ++c) {
      const auto& source = real.column(c).cells();
      for (std::size_t r = 0; r < spec.n_rows; ++r) cells[c][r] = source[rng.below(n_real)];
    }
  } else {
    for (std::size_t r = 0; r < spec.n_rows; ++r) {
      const auto pick = rng.below(n_real);
      for (std::size_t c = 0; c < m; ++c) cells[c][r] = real.column(c).cells()[pick];
    }
  }

  if (spec.method == BaselineMethod::NoisySwap && m > 0 && spec.n_rows > 1) {
    const auto swaps =
        static_cast<std::size_t>(std::ceil(spec.swap_fraction * static_cast<double>(spec.n_rows)));
    for (std::size_t s = 0; s < swaps; ++s) {
      const auto r1 = rng.below(spec.n_rows);
      const auto c = rng.below(m);
      auto r2 = rng.below(spec.n_rows - 1);
      if (r2 >= r1) ++r2;
      std::swap(cells[c][r1], cells[c][r2]);
    }
  }

  std::vector<Column> columns;
  columns.reserve(m);
  for (std::size_t c = 0; c < m; ++c) columns.push_back(rebuild(real.column(c), std::move(cells[c])));
  return Table(real.name() + "_" + std::string(to_string(spec.method)), std::move(columns));
}

}  // namespace depq
