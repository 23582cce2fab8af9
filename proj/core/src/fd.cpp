#include "depq/fd.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "json.hpp"

namespace depq {

StrippedPartition::StrippedPartition(std::uint64_t table_id, std::size_t n_rows, std::vector<std::size_t> attrs,
                                     std::vector<std::vector<std::uint32_t>> classes)
    : table_id_(table_id), n_rows_(n_rows), attrs_(std::move(attrs)), classes_(std::move(classes)) {
  for (const auto& c : classes_) stripped_rows_ += c.size();
}

StrippedPartition partition(const Table& table, const std::vector<std::size_t>& attrs) {
  if (attrs.empty()) throw InvalidArgument("partition needs at least one attribute");
  auto sorted = attrs;
  std::sort(sorted.begin(), sorted.end());
  const auto ids = tuple_ids(table, ColumnSelection(sorted));

  // Ids are numbered by first occurrence, so bucket order is first-row order.
  std::vector<std::vector<std::uint32_t>> buckets(ids.distinct);
  for (std::size_t r = 0; r < ids.ids.size(); ++r) buckets[ids.ids[r]].push_back(static_cast<std::uint32_t>(r));
  std::vector<std::vector<std::uint32_t>> classes;
  for (auto& b : buckets) {
    if (b.size() >= 2) classes.push_back(std::move(b));
  }
  return StrippedPartition(table.id(), table.n_rows(), std::move(sorted), std::move(classes));
}

StrippedPartition refine(const StrippedPartition& p, const StrippedPartition& q) {
  if (p.table_id() != q.table_id() || p.n_rows() != q.n_rows()) {
    throw MismatchedTable("cannot refine partitions of different tables");
  }
  std::vector<std::size_t> attrs;
  std::set_union(p.attrs().begin(), p.attrs().end(), q.attrs().begin(), q.attrs().end(), std::back_inserter(attrs));

  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> owner(p.n_rows(), kNone);
  for (std::size_t i = 0; i < p.classes().size(); ++i) {
    for (auto row : p.classes()[i]) owner[row] = static_cast<std::uint32_t>(i);
  }

  std::vector<std::vector<std::uint32_t>> scratch(p.classes().size());
  std::vector<std::vector<std::uint32_t>> classes;
  for (const auto& cls : q.classes()) {
    for (auto row : cls) {
      if (owner[row] != kNone) scratch[owner[row]].push_back(row);
    }
    for (auto row : cls) {
      if (owner[row] == kNone) continue;
      auto& bucket = scratch[owner[row]];
      if (bucket.size() >= 2) classes.push_back(std::move(bucket));
      bucket.clear();
    }
  }
  std::sort(classes.begin(), classes.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return StrippedPartition(p.table_id(), p.n_rows(), std::move(attrs), std::move(classes));
}

bool fd_holds(const Table& table, const std::vector<std::size_t>& lhs, std::size_t rhs) {
  if (lhs.empty()) throw InvalidArgument("FD left-hand side must not be empty");
  if (std::find(lhs.begin(), lhs.end(), rhs) != lhs.end()) {
    throw InvalidArgument("FD right-hand side is part of the left-hand side");
  }
  const auto left = partition(table, lhs);
  const auto both = refine(left, partition(table, {rhs}));
  return left.n_classes_unstripped() == both.n_classes_unstripped();
}

std::string FunctionalDependency::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (i > 0) out += ',';
    out += lhs[i];
  }
  out += " -> ";
  out += rhs;
  return out;
}

FunctionalDependency make_fd(std::vector<std::string> lhs, std::string rhs) {
  std::sort(lhs.begin(), lhs.end());
  return FunctionalDependency{std::move(lhs), std::move(rhs), false};
}

bool FDSet::contains(const FunctionalDependency& fd) const {
  return std::binary_search(fds.begin(), fds.end(), fd);
}

std::size_t FDSet::key_count() const {
  return static_cast<std::size_t>(std::count_if(fds.begin(), fds.end(), [](const auto& fd) { return fd.lhs_is_key; }));
}

namespace {

struct LatticeNode {
  std::vector<std::size_t> positions;  // ascending positions into the analyzed column list
  StrippedPartition partition;
};

}  // namespace

FDSet discover_fds(const Table& table, const std::vector<std::size_t>& columns, std::size_t max_lhs) {
  if (columns.size() < 2) {
    throw TooFewColumns("FD discovery needs at least 2 categorical columns, got " + std::to_string(columns.size()));
  }
  if (max_lhs < 1) throw InvalidArgument("max_lhs must be at least 1");
  ColumnSelection(columns).validate(table);

  const std::size_t m = columns.size();
  std::vector<StrippedPartition> singles;
  singles.reserve(m);
  for (auto c : columns) singles.push_back(partition(table, {c}));

  StrippedPartition everything = singles.front();
  for (std::size_t i = 1; i < m; ++i) everything = refine(everything, singles[i]);
  const std::size_t all_classes = everything.n_classes_unstripped();

  // Minimal left-hand sides found so far, per right-hand side position.
  std::vector<std::vector<std::vector<std::size_t>>> found(m);
  std::vector<std::pair<std::vector<std::size_t>, std::size_t>> accepted;

  std::vector<LatticeNode> level;
  for (std::size_t i = 0; i < m; ++i) level.push_back({{i}, singles[i]});

  for (std::size_t size = 1; size <= max_lhs && !level.empty(); ++size) {
    for (const auto& node : level) {
      const std::size_t lhs_classes = node.partition.n_classes_unstripped();
      for (std::size_t y = 0; y < m; ++y) {
        if (std::binary_search(node.positions.begin(), node.positions.end(), y)) continue;
        const bool implied = std::any_of(found[y].begin(), found[y].end(), [&](const auto& smaller) {
          return std::includes(node.positions.begin(), node.positions.end(), smaller.begin(), smaller.end());
        });
        if (implied) continue;
        const bool holds = node.partition.classes().empty() ||
                           refine(node.partition, singles[y]).n_classes_unstripped() == lhs_classes;
        if (holds) {
          found[y].push_back(node.positions);
          accepted.emplace_back(node.positions, y);
        }
      }
    }

    if (size == max_lhs) break;
    std::vector<LatticeNode> next;
    for (const auto& node : level) {
      // A superkey already determines everything; its supersets yield nothing minimal.
      if (node.partition.n_classes_unstripped() == all_classes) continue;
      for (std::size_t c = node.positions.back() + 1; c < m; ++c) {
        auto positions = node.positions;
        positions.push_back(c);
        next.push_back({std::move(positions), refine(node.partition, singles[c])});
      }
    }
    level = std::move(next);
  }

  FDSet out;
  out.table = table.name();
  out.max_lhs = max_lhs;
  for (auto c : columns) out.columns.push_back(table.column(c).name());
  for (const auto& [positions, y] : accepted) {
    std::vector<std::string> lhs;
    std::vector<std::size_t> lhs_columns;
    for (auto p : positions) {
      lhs.push_back(out.columns[p]);
      lhs_columns.push_back(columns[p]);
    }
    auto fd = make_fd(std::move(lhs), out.columns[y]);
    fd.lhs_is_key = partition(table, lhs_columns).n_classes_unstripped() == all_classes;
    out.fds.push_back(std::move(fd));
  }
  std::sort(out.fds.begin(), out.fds.end());
  return out;
}

void write_fds_text(std::ostream& out, const FDSet& set) {
  for (const auto& fd : set.fds) out << fd.to_string() << '\n';
}

std::string fds_to_json(const FDSet& set, std::string_view generated_at) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "fdset";
  doc["generated_at"] = generated_at;
  doc["dataset"] = set.table;
  doc["columns"] = set.columns;
  doc["max_lhs"] = set.max_lhs;
  doc["count"] = set.fds.size();
  doc["key_count"] = set.key_count();
  ordered_json fds = ordered_json::array();
  for (const auto& fd : set.fds) {
    fds.push_back(ordered_json{{"lhs", fd.lhs}, {"rhs", fd.rhs}, {"lhs_is_key", fd.lhs_is_key}, {"text", fd.to_string()}});
  }
  doc["fds"] = std::move(fds);
  return doc.dump(2) + "\n";
}

}  // namespace depq
