#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace copath {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV, JSON, solver transcript).
class ParseError : public Error {
public:
  ParseError(std::string file, std::size_t line, std::string reason);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

private:
  std::string file_;
  std::size_t line_;
  std::string reason_;
};

class InvalidGraph : public Error {
public:
  using Error::Error;
};

class UnknownSeverity : public Error {
public:
  explicit UnknownSeverity(const std::string& token);
};

class UnassignedNode : public Error {
public:
  explicit UnassignedNode(const std::string& node);
};

class BudgetExceeded : public Error {
public:
  BudgetExceeded(std::uint64_t space, std::uint64_t budget);
  std::uint64_t space() const { return space_; }

private:
  std::uint64_t space_;
};

class BackendError : public Error {
public:
  using Error::Error;
};

class SolverTimeout : public Error {
public:
  using Error::Error;
};

/// The solver's objective disagrees with the native recomputation.
class ModelMismatch : public Error {
public:
  using Error::Error;
};

/// Invariant breach inside the library (e.g. a valid instance reported unsat).
class InternalError : public Error {
public:
  using Error::Error;
};

class InfeasibleDelta : public Error {
public:
  using Error::Error;
};

class UnknownEntity : public Error {
public:
  using Error::Error;
};

}  // namespace copath
