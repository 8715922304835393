#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace axd {

/// Base class for recoverable failures surfaced to callers (bad input,
/// failing models). Contract violations use ContractViolation instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed document text; position is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Well-formed document that does not match the expected structure.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A model evaluation produced no usable output.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A tank cycle failed to converge.
class SimulationError : public Error {
 public:
  SimulationError(std::size_t cycle, const std::string& what)
      : Error("cycle " + std::to_string(cycle) + ": " + what), cycle_(cycle) {}
  std::size_t cycle() const noexcept { return cycle_; }

 private:
  std::size_t cycle_;
};

/// The requested estimation method does not apply to the given spec.
class MethodInapplicable : public Error {
 public:
  using Error::Error;
};

/// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace axd
