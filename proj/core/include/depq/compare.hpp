#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depq/fd.hpp"
#include "depq/qscore.hpp"
#include "depq/table.hpp"

namespace depq {

struct VennCounts {
  std::vector<FunctionalDependency> real_only;
  std::vector<FunctionalDependency> shared;
  std::vector<FunctionalDependency> synthetic_only;
};

/// Compares FD sets by (lhs names, rhs name). Both sets must have been mined
/// over the same column names with the same max_lhs.
VennCounts venn_fd(const FDSet& real, const FDSet& synthetic);

enum class PreservationMode {
  /// Every value combination excluded in the real table must stay excluded.
  Exclusion,
  /// Q-scores within epsilon and the synthetic pair still logical.
  QEpsilon,
};

std::string_view to_string(PreservationMode mode);

enum class PairStatus {
  Preserved,
  /// A real-excluded combination occurs in the synthetic table.
  Violated,
  /// No violation, but a real category of either column is missing.
  Collapsed,
  /// QEpsilon only: no violation or collapse, yet Q drifted past epsilon or
  /// the synthetic pair is no longer logical.
  Diverged,
  /// The real pair is not a logical dependency.
  NotApplicable,
};

std::string_view to_string(PairStatus status);

struct PairVerdict {
  std::string a;
  std::string b;
  QScore q_real;
  QScore q_synth;
  DependencyClass class_real;
  DependencyClass class_synth;
  PairStatus status;
  /// Real-excluded (a, b) value pairs observed in the synthetic table.
  std::vector<std::pair<std::string, std::string>> violations;
};

struct ScatterPoint {
  std::string a;
  std::string b;
  Rational q_real;
  Rational q_synth;
};

struct CompareOptions {
  PreservationMode mode = PreservationMode::Exclusion;
  double epsilon = 0.05;
  std::size_t max_lhs = kDefaultMaxLhs;
  /// Analyzed column names; empty means every categorical column of the real table.
  std::vector<std::string> columns;
};

struct PreservationReport {
  std::string real_name;
  std::string synthetic_name;
  std::size_t real_rows = 0;
  std::size_t synthetic_rows = 0;
  std::vector<std::string> columns;
  PreservationMode mode = PreservationMode::Exclusion;
  double epsilon = 0.05;
  std::size_t max_lhs = kDefaultMaxLhs;

  std::vector<PairVerdict> verdicts;
  std::vector<ScatterPoint> scatter;
  FDSet real_fds;
  FDSet synthetic_fds;
  VennCounts venn;

  std::size_t logical_pairs() const;
  std::size_t count(PairStatus status) const;
  /// Preserved share of real logical pairs in [0, 1]; nullopt when there are none.
  std::optional<Rational> ld_preserved_fraction() const;
};

/// Resolved column indices shared by a real and a synthetic table.
struct AlignedColumns {
  std::vector<std::string> names;
  std::vector<std::size_t> real;
  std::vector<std::size_t> synthetic;
  Table synthetic_table;  // synthetic input with analyzed columns forced categorical
};

/// Throws SchemaMismatch listing the names found in only one table.
void require_same_columns(const Table& real, const Table& synthetic);

/// Throws SchemaMismatch when the column name sets differ.
AlignedColumns align_columns(const Table& real, const Table& synthetic, const std::vector<std::string>& columns = {});

std::vector<ScatterPoint> scatter_points(const Table& real, const Table& synthetic,
                                         const std::vector<std::string>& columns = {});

PreservationReport ld_preservation(const Table& real, const Table& synthetic, const CompareOptions& options = {});

/// "LD preserved: X% (p of q pairs); FD shared: s/r"
std::string summary_line(const PreservationReport& report);

struct ReportFormats {
  bool json = true;
  bool csv = true;
  bool svg = true;
};

/// Parses "json,csv,svg" style lists; throws InvalidArgument on unknown names.
ReportFormats parse_formats(std::string_view list);

std::string report_to_json(const PreservationReport& report, std::string_view generated_at);
void write_scatter_csv(std::ostream& out, const PreservationReport& report);
std::string scatter_svg(const PreservationReport& report);
std::string venn_svg(const VennCounts& venn);

/// Writes report.json, scatter.csv, scatter.svg and venn.svg as selected.
/// Files are rendered in memory first; nothing is written if rendering fails.
std::vector<std::filesystem::path> render_report(const PreservationReport& report, const ReportFormats& formats,
                                                 const std::filesystem::path& out_dir, std::string_view generated_at);

}  // namespace depq
