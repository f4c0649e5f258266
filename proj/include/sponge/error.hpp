#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sponge {

/// Base of every library error. `module()` names the component that raised it.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
  const std::string& module() const { return module_; }

 private:
  std::string module_;
};

/// Arithmetic domain failure (division by zero, non-positive delta, ...).
class MathError : public Error {
 public:
  explicit MathError(const std::string& what) : Error("math", what) {}
};

/// Malformed IFS text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("parse", "line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Input rejected by a precondition on the system (not Lalley-Gatzouras,
/// missing witness, hypotheses not met, ...).
class ValidationError : public Error {
 public:
  ValidationError(std::string module, const std::string& what) : Error(std::move(module), what) {}
};

/// Enumeration would exceed the configured object cap.
class ResourceError : public Error {
 public:
  ResourceError(std::string module, const std::string& what) : Error(std::move(module), what) {}
};

/// Bad argument to an operation (index out of range, empty word, ...).
class ArgumentError : public Error {
 public:
  ArgumentError(std::string module, const std::string& what) : Error(std::move(module), what) {}
};

}  // namespace sponge
