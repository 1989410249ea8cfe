#include "twpa/error.hpp"

namespace twpa {

namespace {

std::string with_location(const std::string& message, std::size_t line, const std::string& source) {
  std::string prefix;
  if (!source.empty()) prefix = source + ":";
  if (line > 0) prefix += std::to_string(line) + ":";
  if (prefix.empty()) return message;
  return prefix + " " + message;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::string source)
    : Error(with_location(message, line, source)), line_(line), source_(std::move(source)) {}

const char* condition_name(Condition c) {
  switch (c) {
    case Condition::kHaltingSource: return "condition 1";
    case Condition::kMovement: return "condition 2";
    case Condition::kHaltingEntry: return "condition 3";
    case Condition::kPartition: return "partition";
    case Condition::kArity: return "arity";
    case Condition::kUnknownSymbol: return "unknown symbol";
  }
  return "unknown";
}

ValidationError::ValidationError(Condition condition, const std::string& message)
    : Error(std::string(condition_name(condition)) + ": " + message), condition_(condition) {}

}  // namespace twpa
