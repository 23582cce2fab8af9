#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace depq::detail {

/// Minimal RFC-4180 row writer for report files.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(std::initializer_list<std::string_view> fields) {
    bool first = true;
    for (auto field : fields) {
      if (!first) out_ << ',';
      first = false;
      write(field);
    }
    out_ << '\n';
  }

 private:
  void write(std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
      out_ << value;
      return;
    }
    out_ << '"';
    for (char c : value) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }

  std::ostream& out_;
};

}  // namespace depq::detail
