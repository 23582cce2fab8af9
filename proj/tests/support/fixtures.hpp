#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "depq/table.hpp"

#ifndef DEPQ_FIXTURE_DIR
#error "DEPQ_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace depq::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(DEPQ_FIXTURE_DIR) / name;
}

/// Clinical example: Disease and Examiner determine each other, Gender and
/// Pregnant are only logically dependent (no pregnant male).
inline Table table1() {
  return Table::from_rows("table1", {"Disease", "Examiner", "Pregnant", "Gender"},
                          {{"Heart failure", "Cardiologist", "No", "M"},
                           {"Tuberculosis", "Pulmonologist", "Yes", "F"},
                           {"Heart failure", "Cardiologist", "No", "M"},
                           {"Heart failure", "Cardiologist", "No", "F"}});
}

inline constexpr std::size_t kTable1Disease = 0;
inline constexpr std::size_t kTable1Examiner = 1;
inline constexpr std::size_t kTable1Pregnant = 2;
inline constexpr std::size_t kTable1Gender = 3;

/// Conditional probability tables of a 4-class feature "B" (rows) against a
/// 3-class feature "A" (columns), for real and synthetic data.
inline constexpr std::array<std::array<double, 3>, 4> kRealProbabilities = {{
    {0.95, 0.04, 0.00},
    {0.93, 0.05, 0.01},
    {0.89, 0.08, 0.01},
    {0.72, 0.16, 0.10},
}};
inline constexpr std::array<std::array<double, 3>, 4> kSyntheticProbabilities = {{
    {1.00, 0.00, 0.00},
    {0.90, 0.05, 0.01},
    {0.80, 0.08, 0.03},
    {0.59, 0.33, 0.07},
}};

/// One row per cell with strictly positive probability. Columns: B, A.
inline Table presence_table(const std::array<std::array<double, 3>, 4>& probabilities, std::string name) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t b = 0; b < probabilities.size(); ++b) {
    for (std::size_t a = 0; a < probabilities[b].size(); ++a) {
      if (probabilities[b][a] > 0.0) rows.push_back({"class " + std::to_string(b), "class " + std::to_string(a)});
    }
  }
  return Table::from_rows(std::move(name), {"B", "A"}, rows);
}

}  // namespace depq::testing
