#include "fuzzyc/error.hpp"

namespace fuzzyc {

namespace {

std::string with_location(const std::string& message, const std::optional<SourcePos>& pos) {
  if (!pos) return message;
  return std::to_string(pos->line) + ":" + std::to_string(pos->column) + ": " + message;
}

}  // namespace

Error::Error(ErrorCategory category, const std::string& message, std::optional<SourcePos> pos)
    : std::runtime_error(with_location(message, pos)),
      category_(category),
      pos_(pos),
      detail_(message) {}

}  // namespace fuzzyc
