#pragma once

#include <stdexcept>
#include <string>

namespace asuq {

// Error categories double as CLI exit codes.
enum class ErrorKind : int {
  Usage = 1,
  Data = 2,
  Numerical = 3,
  Evaluation = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

// Vector/matrix sizes that do not agree with the parameter space or with each other.
struct DimensionError : Error {
  explicit DimensionError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

// Malformed input files. `line` is 1-based, 0 when not tied to a line.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(ErrorKind::Data, line ? what + " (line " + std::to_string(line) + ")" : what),
        line(line) {}
  std::size_t line;
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

struct RankError : Error {
  RankError(const std::string& what, std::size_t rank)
      : Error(ErrorKind::Numerical, what + " (estimated rank " + std::to_string(rank) + ")"),
        rank(rank) {}
  std::size_t rank;
};

struct DegenerateError : Error {
  explicit DegenerateError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

struct EvaluationError : Error {
  explicit EvaluationError(const std::string& what) : Error(ErrorKind::Evaluation, what) {}
};

}  // namespace asuq
