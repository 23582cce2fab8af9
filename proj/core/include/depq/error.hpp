#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace depq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV input. All positions are 1-based: `row` counts data rows
/// (header excluded), `line` is the physical line where the record starts.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t row, std::size_t line, std::size_t field)
      : Error(message), row_(row), line_(line), field_(field) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t field() const noexcept { return field_; }

 private:
  std::size_t row_;
  std::size_t line_;
  std::size_t field_;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class ContinuousColumnError : public Error {
 public:
  explicit ContinuousColumnError(const std::string& column)
      : Error("column '" + column + "' is continuous; discretize it or exclude it from the analysis"),
        column_(column) {}

  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class InvalidSelection : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class TooFewColumns : public Error {
 public:
  using Error::Error;
};

class MismatchedTable : public Error {
 public:
  using Error::Error;
};

class ConfigMismatch : public Error {
 public:
  using Error::Error;
};

/// Two tables disagree on their column names. `differing()` lists the names
/// present in only one of them, sorted.
class SchemaMismatch : public Error {
 public:
  SchemaMismatch(const std::string& message, std::vector<std::string> differing)
      : Error(message), differing_(std::move(differing)) {}

  const std::vector<std::string>& differing() const noexcept { return differing_; }

 private:
  std::vector<std::string> differing_;
};

/// Non-fatal diagnostics collected by operations that may degrade gracefully.
using Warnings = std::vector<std::string>;

}  // namespace depq
