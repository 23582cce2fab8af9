#include "depq/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "csv_out.hpp"
#include "depq/io.hpp"
#include "json.hpp"

namespace depq {

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> fd_texts(const std::vector<FunctionalDependency>& fds) {
  std::vector<std::string> out;
  for (const auto& fd : fds) out.push_back(fd.to_string());
  return out;
}

nlohmann::ordered_json q_json(const QScore& q) {
  return {{"numerator", q.value.numerator()},
          {"denominator", q.value.denominator()},
          {"decimal", q.decimal()},
          {"card_a", q.card_a},
          {"card_b", q.card_b},
          {"pair_count", q.pair_count}};
}

}  // namespace

std::string_view to_string(PreservationMode mode) {
  return mode == PreservationMode::Exclusion ? "exclusion" : "qscore";
}

std::string_view to_string(PairStatus status) {
  switch (status) {
    case PairStatus::Preserved:
      return "preserved";
    case PairStatus::Violated:
      return "violated";
    case PairStatus::Collapsed:
      return "collapsed";
    case PairStatus::Diverged:
      return "diverged";
    case PairStatus::NotApplicable:
      return "not_applicable";
  }
  return "unknown";
}

VennCounts venn_fd(const FDSet& real, const FDSet& synthetic) {
  if (real.max_lhs != synthetic.max_lhs) {
    throw ConfigMismatch("FD sets mined with different max_lhs (" + std::to_string(real.max_lhs) + " vs " +
                         std::to_string(synthetic.max_lhs) + ")");
  }
  auto a = real.columns;
  auto b = synthetic.columns;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw ConfigMismatch("FD sets mined over different columns");

  VennCounts out;
  std::set_difference(real.fds.begin(), real.fds.end(), synthetic.fds.begin(), synthetic.fds.end(),
                      std::back_inserter(out.real_only));
  std::set_intersection(real.fds.begin(), real.fds.end(), synthetic.fds.begin(), synthetic.fds.end(),
                        std::back_inserter(out.shared));
  std::set_difference(synthetic.fds.begin(), synthetic.fds.end(), real.fds.begin(), real.fds.end(),
                      std::back_inserter(out.synthetic_only));
  return out;
}

std::size_t PreservationReport::logical_pairs() const {
  return static_cast<std::size_t>(std::count_if(verdicts.begin(), verdicts.end(), [](const auto& v) {
    return v.class_real == DependencyClass::Logical;
  }));
}

std::size_t PreservationReport::count(PairStatus status) const {
  return static_cast<std::size_t>(
      std::count_if(verdicts.begin(), verdicts.end(), [&](const auto& v) { return v.status == status; }));
}

std::optional<Rational> PreservationReport::ld_preserved_fraction() const {
  const auto total = logical_pairs();
  if (total == 0) return std::nullopt;
  return Rational(static_cast<std::int64_t>(count(PairStatus::Preserved)), static_cast<std::int64_t>(total));
}

void require_same_columns(const Table& real, const Table& synthetic) {
  auto real_names = real.column_names();
  auto synth_names = synthetic.column_names();
  std::sort(real_names.begin(), real_names.end());
  std::sort(synth_names.begin(), synth_names.end());
  std::vector<std::string> differing;
  std::set_symmetric_difference(real_names.begin(), real_names.end(), synth_names.begin(), synth_names.end(),
                                std::back_inserter(differing));
  if (!differing.empty()) {
    std::string list;
    for (const auto& name : differing) list += (list.empty() ? "" : ", ") + name;
    throw SchemaMismatch("column names differ between '" + real.name() + "' and '" + synthetic.name() + "': " + list,
                         differing);
  }
}

AlignedColumns align_columns(const Table& real, const Table& synthetic, const std::vector<std::string>& columns) {
  require_same_columns(real, synthetic);
  AlignedColumns out{{}, {}, {}, synthetic};
  if (columns.empty()) {
    for (auto c : real.categorical_columns()) out.names.push_back(real.column(c).name());
  } else {
    out.names = columns;
  }
  for (const auto& name : out.names) {
    const auto r = real.column_index(name);
    if (!real.column(r).is_categorical()) throw ContinuousColumnError(name);
    const auto s = out.synthetic_table.column_index(name);
    out.synthetic_table = as_categorical(out.synthetic_table, s);
    out.real.push_back(r);
    out.synthetic.push_back(s);
  }
  if (out.names.size() < 2) {
    throw TooFewColumns("comparison needs at least 2 shared categorical columns, got " +
                        std::to_string(out.names.size()));
  }
  return out;
}

std::vector<ScatterPoint> scatter_points(const Table& real, const Table& synthetic,
                                         const std::vector<std::string>& columns) {
  const auto aligned = align_columns(real, synthetic, columns);
  const auto qr = q_matrix(real, aligned.real);
  const auto qs = q_matrix(aligned.synthetic_table, aligned.synthetic);
  std::vector<ScatterPoint> out;
  for (std::size_t i = 0; i < aligned.names.size(); ++i) {
    for (std::size_t j = 0; j < aligned.names.size(); ++j) {
      if (i == j) continue;
      out.push_back({aligned.names[i], aligned.names[j], qr.at(aligned.real[i], aligned.real[j]).value,
                     qs.at(aligned.synthetic[i], aligned.synthetic[j]).value});
    }
  }
  return out;
}

PreservationReport ld_preservation(const Table& real, const Table& synthetic, const CompareOptions& options) {
  if (!(options.epsilon >= 0.0)) throw InvalidArgument("epsilon must be non-negative");
  const auto aligned = align_columns(real, synthetic, options.columns);
  const Table& synth = aligned.synthetic_table;

  PreservationReport report;
  report.real_name = real.name();
  report.synthetic_name = synthetic.name();
  report.real_rows = real.n_rows();
  report.synthetic_rows = synthetic.n_rows();
  report.columns = aligned.names;
  report.mode = options.mode;
  report.epsilon = options.epsilon;
  report.max_lhs = options.max_lhs;

  const auto qr = q_matrix(real, aligned.real);
  const auto qs = q_matrix(synth, aligned.synthetic);

  std::vector<std::vector<std::string>> real_values;
  std::vector<std::vector<std::string>> synth_values;
  for (std::size_t i = 0; i < aligned.names.size(); ++i) {
    real_values.push_back(present_values(real, aligned.real[i]));
    synth_values.push_back(present_values(synth, aligned.synthetic[i]));
  }
  auto lost_category = [&](std::size_t i) {
    return !std::includes(synth_values[i].begin(), synth_values[i].end(), real_values[i].begin(),
                          real_values[i].end());
  };

  for (std::size_t i = 0; i < aligned.names.size(); ++i) {
    for (std::size_t j = 0; j < aligned.names.size(); ++j) {
      if (i == j) continue;
      const auto& q_real = qr.at(aligned.real[i], aligned.real[j]);
      const auto& q_synth = qs.at(aligned.synthetic[i], aligned.synthetic[j]);
      PairVerdict v{aligned.names[i], aligned.names[j], q_real, q_synth, classify(q_real), classify(q_synth),
                    PairStatus::NotApplicable, {}};
      report.scatter.push_back({v.a, v.b, q_real.value, q_synth.value});

      if (v.class_real == DependencyClass::Logical) {
        const auto excluded = exclusion_set(real, q_real.a, q_real.b);
        const auto& sa = synth.column(aligned.synthetic[i]).cells();
        const auto& sb = synth.column(aligned.synthetic[j]).cells();
        std::set<std::pair<std::string_view, std::string_view>> observed;
        for (std::size_t r = 0; r < synth.n_rows(); ++r) observed.emplace(sa[r], sb[r]);
        for (const auto& [va, vb] : excluded.excluded) {
          if (observed.contains({va.front(), vb.front()})) v.violations.emplace_back(va.front(), vb.front());
        }
        const bool collapsed = lost_category(i) || lost_category(j);

        PairStatus fallback = PairStatus::Preserved;
        if (!v.violations.empty()) {
          fallback = PairStatus::Violated;
        } else if (collapsed) {
          fallback = PairStatus::Collapsed;
        }
        if (options.mode == PreservationMode::Exclusion) {
          v.status = fallback;
        } else {
          const bool close = abs_diff(q_real.value, q_synth.value).to_double() <= options.epsilon;
          if (close && v.class_synth == DependencyClass::Logical) {
            v.status = PairStatus::Preserved;
          } else {
            v.status = fallback == PairStatus::Preserved ? PairStatus::Diverged : fallback;
          }
        }
      }
      report.verdicts.push_back(std::move(v));
    }
  }

  report.real_fds = discover_fds(real, aligned.real, options.max_lhs);
  report.synthetic_fds = discover_fds(synth, aligned.synthetic, options.max_lhs);
  report.venn = venn_fd(report.real_fds, report.synthetic_fds);
  return report;
}

std::string summary_line(const PreservationReport& report) {
  const auto fraction = report.ld_preserved_fraction();
  std::string percent = fraction ? (*fraction * Rational(100)).to_decimal(1) + "%" : "n/a";
  return "LD preserved: " + percent + " (" + std::to_string(report.count(PairStatus::Preserved)) + " of " +
         std::to_string(report.logical_pairs()) + " pairs); FD shared: " + std::to_string(report.venn.shared.size()) +
         "/" + std::to_string(report.real_fds.size());
}

ReportFormats parse_formats(std::string_view list) {
  ReportFormats out{false, false, false};
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto end = std::min(list.find(',', start), list.size());
    const auto item = list.substr(start, end - start);
    if (item == "json") {
      out.json = true;
    } else if (item == "csv") {
      out.csv = true;
    } else if (item == "svg") {
      out.svg = true;
    } else {
      throw InvalidArgument("unknown output format '" + std::string(item) + "' (expected json, csv or svg)");
    }
    start = end + 1;
  }
  return out;
}

std::string report_to_json(const PreservationReport& report, std::string_view generated_at) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "preservation_report";
  doc["generated_at"] = generated_at;
  doc["real"] = {{"name", report.real_name}, {"rows", report.real_rows}};
  doc["synthetic"] = {{"name", report.synthetic_name}, {"rows", report.synthetic_rows}};
  doc["columns"] = report.columns;
  doc["mode"] = to_string(report.mode);
  doc["epsilon"] = report.epsilon;
  doc["max_lhs"] = report.max_lhs;

  const auto fraction = report.ld_preserved_fraction();
  if (fraction) {
    doc["ld_preserved_percent"] = std::stod((*fraction * Rational(100)).to_decimal(6));
  } else {
    doc["ld_preserved_percent"] = "n/a";
  }
  doc["ld_counts"] = {{"logical_pairs", report.logical_pairs()},
                      {"preserved", report.count(PairStatus::Preserved)},
                      {"violated", report.count(PairStatus::Violated)},
                      {"collapsed", report.count(PairStatus::Collapsed)},
                      {"diverged", report.count(PairStatus::Diverged)}};
  doc["venn"] = {{"real_only", report.venn.real_only.size()},
                 {"shared", report.venn.shared.size()},
                 {"synthetic_only", report.venn.synthetic_only.size()},
                 {"real_only_fds", fd_texts(report.venn.real_only)},
                 {"shared_fds", fd_texts(report.venn.shared)},
                 {"synthetic_only_fds", fd_texts(report.venn.synthetic_only)}};

  ordered_json verdicts = ordered_json::array();
  for (const auto& v : report.verdicts) {
    ordered_json violations = ordered_json::array();
    for (const auto& [a, b] : v.violations) violations.push_back({a, b});
    verdicts.push_back(ordered_json{{"a", v.a},
                                    {"b", v.b},
                                    {"q_real", q_json(v.q_real)},
                                    {"q_synth", q_json(v.q_synth)},
                                    {"class_real", to_string(v.class_real)},
                                    {"class_synth", to_string(v.class_synth)},
                                    {"status", to_string(v.status)},
                                    {"violations", std::move(violations)}});
  }
  doc["verdicts"] = std::move(verdicts);

  ordered_json scatter = ordered_json::array();
  for (const auto& p : report.scatter) {
    scatter.push_back(
        ordered_json{{"a", p.a}, {"b", p.b}, {"q_real", p.q_real.to_decimal(6)}, {"q_synth", p.q_synth.to_decimal(6)}});
  }
  doc["scatter"] = std::move(scatter);
  return doc.dump(2) + "\n";
}

void write_scatter_csv(std::ostream& out, const PreservationReport& report) {
  detail::CsvWriter csv(out);
  csv.row({"a", "b", "q_real", "q_synth", "class_real", "class_synth", "status"});
  for (const auto& v : report.verdicts) {
    csv.row({v.a, v.b, v.q_real.decimal(), v.q_synth.decimal(), to_string(v.class_real), to_string(v.class_synth),
             to_string(v.status)});
  }
}

std::string scatter_svg(const PreservationReport& report) {
  constexpr double kSize = 800.0;
  constexpr double kMargin = 70.0;
  constexpr double kSpan = kSize - 2 * kMargin;
  auto x_of = [&](double q) { return kMargin + q * kSpan; };
  auto y_of = [&](double q) { return kSize - kMargin - q * kSpan; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  svg << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  svg << "<text x=\"400\" y=\"35\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
      << xml_escape(report.real_name) << " vs " << xml_escape(report.synthetic_name) << "</text>\n";
  for (int t = 0; t <= 10; ++t) {
    const double q = t / 10.0;
    svg << "<line x1=\"" << fixed2(x_of(q)) << "\" y1=\"" << fixed2(y_of(0)) << "\" x2=\"" << fixed2(x_of(q))
        << "\" y2=\"" << fixed2(y_of(1)) << "\" stroke=\"#eeeeee\"/>\n";
    svg << "<line x1=\"" << fixed2(x_of(0)) << "\" y1=\"" << fixed2(y_of(q)) << "\" x2=\"" << fixed2(x_of(1))
        << "\" y2=\"" << fixed2(y_of(q)) << "\" stroke=\"#eeeeee\"/>\n";
    svg << "<text x=\"" << fixed2(x_of(q)) << "\" y=\"" << fixed2(y_of(0) + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << fixed2(q).substr(0, 3)
        << "</text>\n";
    svg << "<text x=\"" << fixed2(x_of(0) - 10) << "\" y=\"" << fixed2(y_of(q) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << fixed2(q).substr(0, 3)
        << "</text>\n";
  }
  svg << "<rect x=\"" << fixed2(kMargin) << "\" y=\"" << fixed2(kMargin) << "\" width=\"" << fixed2(kSpan)
      << "\" height=\"" << fixed2(kSpan) << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<line class=\"diagonal\" x1=\"" << fixed2(x_of(0)) << "\" y1=\"" << fixed2(y_of(0)) << "\" x2=\""
      << fixed2(x_of(1)) << "\" y2=\"" << fixed2(y_of(1)) << "\" stroke=\"#888888\" stroke-dasharray=\"6,4\"/>\n";
  svg << "<text x=\"400\" y=\"780\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">Q real</text>\n";
  svg << "<text x=\"20\" y=\"400\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "transform=\"rotate(-90 20 400)\">Q synthetic</text>\n";
  for (const auto& p : report.scatter) {
    svg << "<circle class=\"point\" cx=\"" << fixed2(x_of(p.q_real.to_double())) << "\" cy=\""
        << fixed2(y_of(p.q_synth.to_double())) << "\" r=\"4\" fill=\"#1f77b4\" fill-opacity=\"0.7\"><title>"
        << xml_escape(p.a) << " / " << xml_escape(p.b) << ": " << p.q_real.to_decimal(6) << ", "
        << p.q_synth.to_decimal(6) << "</title></circle>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string venn_svg(const VennCounts& venn) {
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"400\" viewBox=\"0 0 600 400\">\n";
  svg << "<rect width=\"600\" height=\"400\" fill=\"white\"/>\n";
  svg << "<circle cx=\"230\" cy=\"200\" r=\"140\" fill=\"#1f77b4\" fill-opacity=\"0.35\" stroke=\"#1f77b4\"/>\n";
  svg << "<circle cx=\"370\" cy=\"200\" r=\"140\" fill=\"#ff7f0e\" fill-opacity=\"0.35\" stroke=\"#ff7f0e\"/>\n";
  svg << "<text x=\"180\" y=\"45\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">real</text>\n";
  svg << "<text x=\"420\" y=\"45\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">synthetic</text>\n";
  svg << "<text class=\"real-only\" x=\"160\" y=\"208\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"24\">"
      << venn.real_only.size() << "</text>\n";
  svg << "<text class=\"shared\" x=\"300\" y=\"208\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"24\">"
      << venn.shared.size() << "</text>\n";
  svg << "<text class=\"synthetic-only\" x=\"440\" y=\"208\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"24\">"
      << venn.synthetic_only.size() << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> render_report(const PreservationReport& report, const ReportFormats& formats,
                                                 const std::filesystem::path& out_dir, std::string_view generated_at) {
  FileContents files;
  if (formats.json) files.emplace_back(out_dir / "report.json", report_to_json(report, generated_at));
  if (formats.csv) {
    std::ostringstream csv;
    write_scatter_csv(csv, report);
    files.emplace_back(out_dir / "scatter.csv", csv.str());
  }
  if (formats.svg) {
    files.emplace_back(out_dir / "scatter.svg", scatter_svg(report));
    files.emplace_back(out_dir / "venn.svg", venn_svg(report.venn));
  }
  write_files(files);
  std::vector<std::filesystem::path> written;
  for (const auto& [path, contents] : files) written.push_back(path);
  return written;
}

}  // namespace depq
