#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "depq/compare.hpp"
#include "depq/table.hpp"

namespace depq::cli {

/// Invalid invocation detected before any data is touched; exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Profile, Compare, Baseline };

struct DiscretizeRequest {
  std::string column;
  std::size_t bins = 0;
};

struct RunConfig {
  Command command = Command::Profile;
  std::vector<std::filesystem::path> inputs;

  std::vector<std::string> columns;
  std::vector<std::string> exclude;
  std::size_t max_lhs = kDefaultMaxLhs;
  KindOptions kinds;
  std::vector<DiscretizeRequest> discretize;
  CsvOptions csv;

  PreservationMode mode = PreservationMode::Exclusion;
  double epsilon = 0.05;

  std::string method = "bootstrap";
  std::uint64_t seed = 0;
  std::optional<std::size_t> rows;
  double fraction = 0.0;

  std::string formats;  // empty: per-command default
  std::filesystem::path out_dir = "depq-out";
  bool fixed_timestamp = false;
  unsigned threads = 0;

  /// Throws ConfigError.
  void validate() const;
};

/// Parses argv into a RunConfig. Returns nullopt after printing help.
/// Throws ConfigError for any invalid invocation.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// "COL:BINS"
DiscretizeRequest parse_discretize(const std::string& text);

std::string timestamp(bool fixed);

/// Each returns the process exit status; errors are reported on `err`.
int run_profile(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_compare(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_baseline(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full entry point: parse, dispatch, map errors to exit codes
/// (0 success, 1 data/module error, 2 configuration error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace depq::cli
