#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace fuzzyc {

/// Line/column position in a text source, both 1-based.
struct SourcePos {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class ErrorCategory {
  Data,      // malformed or inconsistent input files, values, definitions
  Capacity,  // the requested target cannot hold the chip
  Contract,  // an operation was called with its precondition violated
};

/// Base error for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message,
        std::optional<SourcePos> pos = std::nullopt);

  ErrorCategory category() const noexcept { return category_; }
  const std::optional<SourcePos>& position() const noexcept { return pos_; }
  /// The message without the location prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCategory category_;
  std::optional<SourcePos> pos_;
  std::string detail_;
};

enum class Severity { Warning, Error };

/// A located message reported alongside (not instead of) a result.
struct Diagnostic {
  Severity severity = Severity::Warning;
  std::optional<SourcePos> pos;
  std::string message;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, SourcePos pos)
      : Error(ErrorCategory::Data, message, pos) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& message)
      : Error(ErrorCategory::Capacity, message) {}
};

}  // namespace fuzzyc
