#pragma once

#include <stdexcept>
#include <string>

namespace frlsc {

/// Base of every error thrown by the library. `module()` names the component
/// that raised it so front ends can report where a run failed.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Shapes or grids of the operands do not agree.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A parameter is outside its valid domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (no bracket, no convergence, bad residual).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Input data or a model file could not be parsed.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace frlsc
