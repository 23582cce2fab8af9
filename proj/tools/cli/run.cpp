#include "run.hpp"

#include <charconv>
#include <ctime>
#include <exception>
#include <ostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "depq/baselines.hpp"
#include "depq/fd.hpp"
#include "depq/io.hpp"
#include "depq/qscore.hpp"

namespace depq::cli {

namespace {

constexpr const char* kProfileFormats = "json,csv";
constexpr const char* kCompareFormats = "json,csv,svg";

void log_warnings(const Warnings& warnings) {
  for (const auto& w : warnings) spdlog::warn("{}", w);
}

ReportFormats formats_for(const RunConfig& config, const char* fallback) {
  try {
    return parse_formats(config.formats.empty() ? fallback : config.formats);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

CsvOptions csv_options(const RunConfig& config) {
  auto options = config.csv;
  options.allow_empty = false;
  return options;
}

std::size_t named_column(const Table& table, const std::string& name, const char* flag) {
  if (auto index = table.find_column(name)) return *index;
  throw ConfigError(std::string(flag) + ": unknown column '" + name + "' in '" + table.name() + "'");
}

Table as_continuous(const Table& table, std::size_t column) {
  const auto& col = table.column(column);
  if (!col.is_categorical()) return table;
  return table.with_column(column, Column::continuous(col.name(), col.cells()));
}

/// Loads and types one input; binning uses `edges_from` when given so that
/// real and synthetic tables share bin labels.
Table prepare(const RunConfig& config, const std::filesystem::path& path, const Table* edges_from) {
  Warnings warnings;
  spdlog::info("loading {}", path.string());
  auto table = load_csv(path, csv_options(config), &warnings);
  table = infer_kinds(table, config.kinds);
  for (const auto& request : config.discretize) {
    const auto index = named_column(table, request.column, "--discretize");
    if (edges_from) {
      const auto source = named_column(*edges_from, request.column, "--discretize");
      const auto edges = equal_width_edges(*edges_from, source, request.bins);
      table = discretize(as_continuous(table, index), index, edges);
    } else {
      table = discretize(table, index, request.bins, &warnings);
    }
  }
  log_warnings(warnings);
  return table;
}

/// Raw (pre-binning) real table for bin edges in compare.
Table load_typed(const RunConfig& config, const std::filesystem::path& path) {
  return infer_kinds(load_csv(path, csv_options(config)), config.kinds);
}

std::vector<std::size_t> resolve_columns(const Table& table, const RunConfig& config) {
  std::vector<std::size_t> excluded;
  for (const auto& name : config.exclude) excluded.push_back(named_column(table, name, "--exclude"));
  auto is_excluded = [&](std::size_t c) { return std::find(excluded.begin(), excluded.end(), c) != excluded.end(); };

  std::vector<std::size_t> out;
  if (!config.columns.empty()) {
    for (const auto& name : config.columns) {
      const auto c = named_column(table, name, "--columns");
      if (is_excluded(c)) continue;
      if (!table.column(c).is_categorical()) throw ContinuousColumnError(name);
      out.push_back(c);
    }
  } else {
    for (auto c : table.categorical_columns()) {
      if (!is_excluded(c)) out.push_back(c);
    }
  }
  if (out.size() < 2) {
    throw TooFewColumns("'" + table.name() + "' has " + std::to_string(out.size()) +
                        " analyzable categorical column(s); at least 2 are needed");
  }
  return out;
}

void prepare_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

std::size_t parse_count(const std::string& text, const std::string& what) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError("invalid " + what + " '" + text + "'");
  return value;
}

}  // namespace

DiscretizeRequest parse_discretize(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw ConfigError("--discretize expects COL:BINS, got '" + text + "'");
  }
  DiscretizeRequest request{text.substr(0, colon), parse_count(text.substr(colon + 1), "bin count")};
  if (request.bins < 2) throw ConfigError("--discretize " + text + ": at least 2 bins are required");
  return request;
}

void RunConfig::validate() const {
  const std::size_t expected_inputs = command == Command::Compare ? 2 : 1;
  if (inputs.size() != expected_inputs) {
    throw ConfigError("expected " + std::to_string(expected_inputs) + " input file(s)");
  }
  if (command != Command::Baseline) {
    if (!columns.empty()) {
      std::size_t kept = 0;
      for (const auto& name : columns) {
        if (std::find(exclude.begin(), exclude.end(), name) == exclude.end()) ++kept;
      }
      if (kept < 2) throw ConfigError("--columns must name at least 2 columns to analyze");
    }
    if (max_lhs < 1) throw ConfigError("--max-lhs must be at least 1");
    if (!(kinds.numeric_fraction >= 0.0 && kinds.numeric_fraction <= 1.0)) {
      throw ConfigError("--numeric-fraction must lie in [0, 1]");
    }
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("--epsilon must lie in [0, 1]");
    try {
      parse_formats(formats.empty() ? kCompareFormats : formats);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  } else {
    try {
      parse_baseline_method(method);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw ConfigError("--fraction must lie in [0, 1]");
    if (rows && *rows < 1) throw ConfigError("--rows must be at least 1");
  }
}

std::string timestamp(bool fixed) {
  if (fixed) return "1970-01-01T00:00:00Z";
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig config;
  std::vector<std::string> inputs;
  std::vector<std::string> discretize;
  std::string mode = "exclusion";
  std::string delimiter = ",";

  CLI::App app{"depq: functional and logical dependency profiling for tabular data"};
  app.require_subcommand(1);

  auto* profile = app.add_subcommand("profile", "Q-score matrix, histogram and minimal FDs of one dataset");
  auto* compare = app.add_subcommand("compare", "dependency preservation of a synthetic dataset against a real one");
  auto* baseline = app.add_subcommand("baseline", "write a deterministic synthetic baseline of a dataset");

  for (auto* sub : {profile, compare}) {
    sub->add_option("--columns", config.columns, "columns to analyze (comma separated)")->delimiter(',');
    sub->add_option("--exclude", config.exclude, "columns to skip (comma separated)")->delimiter(',');
    sub->add_option("--max-lhs", config.max_lhs, "largest FD left-hand side")->capture_default_str();
    sub->add_option("--discretize", discretize, "bin a continuous column, COL:BINS (repeatable)");
    sub->add_option("--cardinality-threshold", config.kinds.cardinality_threshold,
                    "numeric columns with more distinct values are continuous")
        ->capture_default_str();
    sub->add_option("--numeric-fraction", config.kinds.numeric_fraction,
                    "share of numeric cells for a column to count as numeric")
        ->capture_default_str();
    sub->add_option("--format", config.formats, "output formats: json,csv,svg");
    sub->add_option("--threads", config.threads, "worker threads for pair scoring (0 = all cores)");
  }
  for (auto* sub : {profile, compare, baseline}) {
    sub->add_option("--out", config.out_dir, "output directory")->capture_default_str();
    sub->add_option("--delimiter", delimiter, "CSV field delimiter")->capture_default_str();
    sub->add_option("--na", config.csv.na_tokens, "tokens read as missing (comma separated)")->delimiter(',');
    sub->add_flag("--fixed-timestamp", config.fixed_timestamp, "stamp reports with a fixed epoch timestamp");
  }
  profile->add_option("input", inputs, "dataset CSV")->required()->expected(1);
  compare->add_option("inputs", inputs, "real and synthetic CSV")->required()->expected(2);
  compare->add_option("--mode", mode, "preservation criterion")
      ->check(CLI::IsMember({"exclusion", "qscore"}))
      ->capture_default_str();
  compare->add_option("--epsilon", config.epsilon, "Q tolerance for --mode qscore")->capture_default_str();
  baseline->add_option("input", inputs, "real dataset CSV")->required()->expected(1);
  baseline->add_option("--method", config.method, "bootstrap, independent or noisy-swap")->capture_default_str();
  baseline->add_option("--seed", config.seed, "generator seed")->capture_default_str();
  baseline->add_option("--rows", config.rows, "output rows (default: same as input)");
  baseline->add_option("--fraction", config.fraction, "swap fraction for noisy-swap")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  if (profile->parsed()) config.command = Command::Profile;
  if (compare->parsed()) config.command = Command::Compare;
  if (baseline->parsed()) config.command = Command::Baseline;

  for (const auto& input : inputs) config.inputs.emplace_back(input);
  for (const auto& item : discretize) config.discretize.push_back(parse_discretize(item));
  config.mode = mode == "qscore" ? PreservationMode::QEpsilon : PreservationMode::Exclusion;
  if (delimiter.size() != 1) throw ConfigError("--delimiter must be a single character");
  config.csv.delimiter = delimiter.front();

  config.validate();
  return config;
}

int run_profile(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    const auto formats = formats_for(config, kProfileFormats);
    const auto table = prepare(config, config.inputs.front(), nullptr);
    const auto columns = resolve_columns(table, config);

    spdlog::info("scoring {} ordered pairs", columns.size() * (columns.size() - 1));
    const auto matrix = q_matrix(table, columns, config.threads);
    spdlog::info("mining FDs up to lhs size {}", config.max_lhs);
    const auto fds = discover_fds(table, columns, config.max_lhs);
    const auto histogram = q_histogram(matrix);
    const auto stamp = timestamp(config.fixed_timestamp);

    FileContents files;
    if (formats.json) {
      files.emplace_back(config.out_dir / "qscores.json", qmatrix_to_json(matrix, stamp));
      files.emplace_back(config.out_dir / "fds.json", fds_to_json(fds, stamp));
    }
    if (formats.csv) {
      std::ostringstream q_csv;
      std::ostringstream h_csv;
      std::ostringstream fd_text;
      write_qmatrix_csv(q_csv, matrix);
      write_histogram_csv(h_csv, histogram);
      write_fds_text(fd_text, fds);
      files.emplace_back(config.out_dir / "qscores.csv", q_csv.str());
      files.emplace_back(config.out_dir / "histogram.csv", h_csv.str());
      files.emplace_back(config.out_dir / "fds.txt", fd_text.str());
    }
    prepare_out_dir(config.out_dir);
    write_files(files);

    std::size_t by_class[3] = {0, 0, 0};
    for (const auto& e : matrix.entries()) ++by_class[static_cast<int>(classify(e))];
    out << table.name() << ": " << matrix.size() << " Q-scores over " << columns.size() << " columns (functional "
        << by_class[0] << ", logical " << by_class[1] << ", independent " << by_class[2] << "); " << fds.size()
        << " minimal FDs (max_lhs " << config.max_lhs << ", keys " << fds.key_count() << ")\n";
    return 0;
  });
}

int run_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    const auto formats = formats_for(config, kCompareFormats);
    const auto real = prepare(config, config.inputs[0], nullptr);
    const auto raw_real = config.discretize.empty() ? real : load_typed(config, config.inputs[0]);
    const auto synthetic = prepare(config, config.inputs[1], &raw_real);
    require_same_columns(real, synthetic);

    CompareOptions options;
    options.mode = config.mode;
    options.epsilon = config.epsilon;
    options.max_lhs = config.max_lhs;
    for (auto c : resolve_columns(real, config)) options.columns.push_back(real.column(c).name());

    const auto report = ld_preservation(real, synthetic, options);
    prepare_out_dir(config.out_dir);
    render_report(report, formats, config.out_dir, timestamp(config.fixed_timestamp));
    out << summary_line(report) << '\n';
    return 0;
  });
}

int run_baseline(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    const auto real = load_csv(config.inputs.front(), csv_options(config));
    BaselineSpec spec;
    spec.method = parse_baseline_method(config.method);
    spec.seed = config.seed;
    spec.n_rows = config.rows.value_or(real.n_rows());
    spec.swap_fraction = config.fraction;
    const auto synthetic = generate(real, spec);

    std::ostringstream csv;
    write_csv(csv, synthetic, config.csv.delimiter);
    const auto path = config.out_dir / (config.inputs.front().stem().string() + "." +
                                        std::string(to_string(spec.method)) + ".seed" + std::to_string(spec.seed) +
                                        ".csv");
    prepare_out_dir(config.out_dir);
    write_files({{path, csv.str()}});
    out << "baseline: method=" << to_string(spec.method) << " seed=" << spec.seed << " rows=" << synthetic.n_rows()
        << " -> " << path.string() << '\n';
    return 0;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  const int status = guarded(err, [&] {
    config = parse_args(argc, argv, out);
    return 0;
  });
  if (status != 0 || !config) return status;
  switch (config->command) {
    case Command::Profile:
      return run_profile(*config, out, err);
    case Command::Compare:
      return run_compare(*config, out, err);
    case Command::Baseline:
      return run_baseline(*config, out, err);
  }
  return 2;
}

}  // namespace depq::cli
