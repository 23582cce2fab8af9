// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "depq/depq.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_tables.hpp"

namespace fs = std::filesystem;
using namespace depq;
using namespace depq::testing;

namespace {

/// Collects the first few mismatches of a criterion.
class Failures {
 public:
  void add(const std::string& what) {
    if (count_++ < 5) text_ += (text_.empty() ? "" : "; ") + what;
  }
  template <class T>
  void expect_eq(const T& got, const T& want, const std::string& what) {
    if (!(got == want)) add(what);
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    return count_ <= 5 ? text_ : text_ + "; ... (" + std::to_string(count_) + " total)";
  }

 private:
  std::size_t count_ = 0;
  std::string text_;
};

struct Outcome {
  enum Kind { Pass, Fail, Skip } kind = Pass;
  std::string detail;
};

Outcome verdict(const Failures& f, std::string pass_detail) {
  return f.ok() ? Outcome{Outcome::Pass, std::move(pass_detail)} : Outcome{Outcome::Fail, f.summary()};
}

std::vector<std::size_t> all_columns(const Table& t) {
  std::vector<std::size_t> cols(t.n_columns());
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
  return cols;
}

Outcome table1_values() {
  Failures f;
  const auto t = load_csv(fixture("table1.csv"));
  f.expect_eq(t.n_rows(), std::size_t{4}, "row count");
  const auto de = q_score(t, kTable1Disease, kTable1Examiner);
  f.expect_eq(de.value, Rational(0), "Q(Disease,Examiner) = " + to_string(de.value));
  f.expect_eq(classify(de), DependencyClass::Functional, "Disease/Examiner class");
  for (auto [a, b] : {std::pair{kTable1Gender, kTable1Pregnant}, std::pair{kTable1Pregnant, kTable1Gender}}) {
    const auto q = q_score(t, a, b);
    f.expect_eq(q.value, Rational(1, 2), "Q(" + q.a.label(t) + "," + q.b.label(t) + ") = " + to_string(q.value));
    f.expect_eq(classify(q), DependencyClass::Logical, q.a.label(t) + "/" + q.b.label(t) + " class");
  }
  const auto ex = exclusion_set(t, ColumnSelection::single(kTable1Gender), ColumnSelection::single(kTable1Pregnant));
  const std::vector<std::pair<ValueTuple, ValueTuple>> want = {{{"M"}, {"Yes"}}};
  f.expect_eq(ex.excluded, want, "exclusion set of Gender/Pregnant");
  return verdict(f, "Q(D,E)=0 functional, Q(G,P)=Q(P,G)=1/2 logical, excluded {(M,Yes)}");
}

Outcome probability_tables() {
  Failures f;
  const auto real = presence_table(kRealProbabilities, "real");
  const auto synth = presence_table(kSyntheticProbabilities, "synthetic");
  const auto qr = q_score(real, 0, 1);
  const auto qs = q_score(synth, 0, 1);
  f.expect_eq(qr.value, Rational(7, 8), "real Q = " + to_string(qr.value));
  f.expect_eq(qs.value, Rational(3, 4), "synthetic Q = " + to_string(qs.value));
  f.expect_eq(qr.decimal(), std::string("0.875000"), "real decimal " + qr.decimal());
  f.expect_eq(qs.decimal(), std::string("0.750000"), "synthetic decimal " + qs.decimal());
  return verdict(f, "real 7/8 (" + qr.decimal() + "), synthetic 3/4 (" + qs.decimal() + ")");
}

constexpr std::uint64_t kQTables = 600;
constexpr std::uint64_t kQSeedBase = 1'000;

Outcome q_oracle() {
  Failures f;
  std::size_t pairs = 0;
  for (std::uint64_t s = 0; s < kQTables; ++s) {
    const auto t = random_table(kQSeedBase + s);
    for (std::size_t a = 0; a < t.n_columns(); ++a) {
      for (std::size_t b = 0; b < t.n_columns(); ++b) {
        if (a == b) continue;
        const auto fast = q_score(t, a, b);
        const auto [num, den] = brute_q(t, {a}, {b});
        f.expect_eq(fast.value, Rational(num, den), t.name() + " pair " + std::to_string(a) + "," + std::to_string(b) + " vs brute");
        if (fast.card_b <= 1) continue;
        const auto sum = q_score_by_summation(t, ColumnSelection::single(a), ColumnSelection::single(b));
        f.expect_eq(fast.value, sum.value, t.name() + " pair " + std::to_string(a) + "," + std::to_string(b) + " vs summation");
        ++pairs;
      }
    }
  }
  return verdict(f, std::to_string(kQTables) + " tables, " + std::to_string(pairs) + " pairs with |B|>1 equal exactly");
}

Outcome fd_oracle() {
  Failures f;
  std::size_t candidates = 0, fds = 0;
  for (std::uint64_t s = 0; s < 250; ++s) {
    const auto t = random_table(2'000 + s, {.max_columns = 5});
    const auto cols = all_columns(t);
    const auto found = discover_fds(t, cols, 2);
    std::set<std::string> rendered;
    for (const auto& fd : found.fds) rendered.insert(fd.to_string());
    f.expect_eq(rendered, brute_minimal_fds(t, cols, 2), t.name() + " minimal FD set");
    fds += rendered.size();
    for (const auto& lhs : subsets_up_to(cols, cols.size() - 1)) {
      for (auto rhs : cols) {
        if (std::find(lhs.begin(), lhs.end(), rhs) != lhs.end()) continue;
        ++candidates;
        f.expect_eq(fd_holds(t, lhs, rhs), brute_fd_holds(t, lhs, rhs), t.name() + " fd_holds candidate");
      }
    }
  }
  return verdict(f, "250 tables, " + std::to_string(fds) + " minimal FDs, " + std::to_string(candidates) +
                        " fd_holds candidates agree");
}

Outcome q_fd_consistency() {
  Failures f;
  std::size_t pairs = 0;
  for (std::uint64_t s = 0; s < kQTables; ++s) {
    const auto t = random_table(kQSeedBase + s);
    for (std::size_t a = 0; a < t.n_columns(); ++a) {
      for (std::size_t b = 0; b < t.n_columns(); ++b) {
        if (a == b) continue;
        ++pairs;
        f.expect_eq(q_score(t, a, b).value.is_zero(), fd_holds(t, {a}, b), t.name() + " pair " + std::to_string(a) + "," + std::to_string(b));
      }
    }
  }
  return verdict(f, std::to_string(pairs) + " ordered pairs, Q=0 iff FD");
}

Table exclusion_table() {
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < 70; ++i) rows.push_back({"a", "p"});
  for (int i = 0; i < 65; ++i) rows.push_back({"b", "p"});
  for (int i = 0; i < 65; ++i) rows.push_back({"b", "q"});
  return Table::from_rows("exclusion", {"X", "Y"}, rows);
}

Outcome preservation() {
  Failures f;
  std::vector<Table> selves = {load_csv(fixture("table1.csv"))};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    selves.push_back(random_table(seed, {.min_rows = 6, .max_rows = 12, .min_columns = 4, .max_columns = 6}));
  }
  std::size_t logical = 0;
  for (const auto& t : selves) {
    const auto report = ld_preservation(t, t);
    if (report.logical_pairs() == 0) f.add(t.name() + " has no logical pairs");
    logical += report.logical_pairs();
    f.expect_eq(report.ld_preserved_fraction(), std::optional<Rational>(Rational(1)), t.name() + " self-preservation");
    f.expect_eq(report.venn.real_only.size(), std::size_t{0}, t.name() + " venn real-only");
    f.expect_eq(report.venn.synthetic_only.size(), std::size_t{0}, t.name() + " venn synthetic-only");
    f.expect_eq(report.venn.shared.size(), report.real_fds.size(), t.name() + " venn shared");
  }

  const auto real = exclusion_table();
  std::size_t boot_violations = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto synth = generate(real, {BaselineMethod::BootstrapRows, seed, real.n_rows(), 0.0});
    boot_violations += ld_preservation(real, synth).count(PairStatus::Violated);
  }
  f.expect_eq(boot_violations, std::size_t{0}, "bootstrap violations");

  const auto synth = generate(real, {BaselineMethod::IndependentColumns, 42, 200, 0.0});
  const auto report = ld_preservation(real, synth);
  for (const auto& v : report.verdicts) {
    f.expect_eq(v.status, PairStatus::Violated, "independent-columns verdict " + v.a + "/" + v.b);
  }
  f.expect_eq(report.verdicts.size(), std::size_t{2}, "independent-columns verdict count");
  return verdict(f, "6 self-compares at 100% (" + std::to_string(logical) +
                        " logical pairs), 50 bootstrap seeds with 0 violated, independent seed 42 violated");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome determinism() {
  Failures f;
  const fs::path root = fs::temp_directory_path() / "depq_acceptance_determinism";
  fs::remove_all(root);
  const std::string bin = DEPQ_BINARY;
  const std::string t1 = fixture("table1.csv").string();
  const std::string t2 = fixture("table1_male_pregnant.csv").string();
  std::size_t files = 0;
  for (const std::string cmd : {"profile", "compare"}) {
    std::vector<fs::path> dirs;
    for (const char* run : {"1", "2"}) {
      const auto dir = root / (cmd + run);
      std::string line = "\"" + bin + "\" " + cmd + " \"" + t1 + "\" ";
      if (cmd == "compare") line += "\"" + t2 + "\" ";
      line += "--fixed-timestamp --out \"" + dir.string() + "\" > /dev/null";
      if (std::system(line.c_str()) != 0) f.add(cmd + " run " + run + " failed");
      dirs.push_back(dir);
    }
    std::set<std::string> names;
    for (const auto& e : fs::directory_iterator(dirs[0])) names.insert(e.path().filename().string());
    std::set<std::string> names2;
    for (const auto& e : fs::directory_iterator(dirs[1])) names2.insert(e.path().filename().string());
    f.expect_eq(names, names2, cmd + " file lists");
    if (names.empty()) f.add(cmd + " wrote nothing");
    for (const auto& n : names) {
      ++files;
      if (slurp(dirs[0] / n) != slurp(dirs[1] / n)) f.add(cmd + "/" + n + " differs");
    }
  }
  fs::remove_all(root);
  return verdict(f, std::to_string(files) + " output files byte-identical across two runs");
}

Outcome real_datasets() {
  const char* dir = std::getenv("DEPQ_DATA_DIR");
  if (!dir) return {Outcome::Skip, "DEPQ_DATA_DIR not set"};
  std::ostringstream detail;
  bool any = false;
  for (const auto& [file, reference] : {std::pair{"migraine.csv", 136}, std::pair{"airbnb.csv", 32}}) {
    const fs::path path = fs::path(dir) / file;
    if (!fs::exists(path)) continue;
    any = true;
    auto t = load_csv(path);
    for (std::size_t c = 0; c < t.n_columns(); ++c) t = as_categorical(t, c);
    detail << file << " (reference " << reference << "):";
    for (std::size_t max_lhs = 1; max_lhs <= 2; ++max_lhs) {
      detail << " max_lhs " << max_lhs << " -> " << discover_fds(t, all_columns(t), max_lhs).size();
    }
    detail << "; ";
  }
  if (!any) return {Outcome::Skip, "migraine.csv / airbnb.csv not found in DEPQ_DATA_DIR"};
  return {Outcome::Pass, "informational: " + detail.str()};
}

struct Criterion {
  std::string id;
  std::string title;
  double limit_seconds;  // 0: untimed
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "clinical example values", 1.0, table1_values},
      {"AC2", "probability-table example", 1.0, probability_tables},
      {"AC3", "Q oracle equivalence", 10.0, q_oracle},
      {"AC4", "FD oracle equivalence", 30.0, fd_oracle},
      {"AC5", "Q=0 iff FD consistency", 0.0, q_fd_consistency},
      {"AC6", "preservation properties", 10.0, preservation},
      {"AC7", "deterministic outputs", 0.0, determinism},
      {"AC8", "real dataset FD counts", 0.0, real_datasets},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.body();
    } catch (const std::exception& e) {
      outcome = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (outcome.kind == Outcome::Pass && c.limit_seconds > 0 && secs >= c.limit_seconds) {
      outcome = {Outcome::Fail, "took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_seconds) + " s"};
    }
    const char* tag = outcome.kind == Outcome::Pass ? "PASS" : outcome.kind == Outcome::Fail ? "FAIL" : "SKIP";
    failed += outcome.kind == Outcome::Fail;
    std::cout << tag << " " << c.id << " " << c.title << ": " << outcome.detail << " [" << std::fixed
              << std::setprecision(3) << secs << " s]\n";
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : std::string("acceptance: all criteria passed"))
            << "\n";
  return failed ? 1 : 0;
}
