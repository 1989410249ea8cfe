#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twpa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0, std::string source = {});

  std::size_t line() const { return line_; }
  const std::string& source() const { return source_; }

 private:
  std::size_t line_;
  std::string source_;
};

enum class Condition {
  kHaltingSource,       // condition 1
  kMovement,            // condition 2
  kHaltingEntry,        // condition 3
  kPartition,           // initial / accepting set membership
  kArity,               // weight length or constraint variables vs dimension
  kUnknownSymbol,
};

const char* condition_name(Condition c);

class ValidationError : public Error {
 public:
  ValidationError(Condition condition, const std::string& message);

  Condition condition() const { return condition_; }

 private:
  Condition condition_;
};

/// A precondition of an operation was not met by its arguments.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace twpa
