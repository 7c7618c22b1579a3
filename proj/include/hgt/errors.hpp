#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hgt {

/// Non-finite values, blow-up, or singular matrices met during a computation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where an operation is defined.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two paths, bigons, or 2-morphisms were composed without matching endpoints.
class CompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FakeCurvatureError : public std::runtime_error {
 public:
  FakeCurvatureError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class TargetMatchingError : public std::runtime_error {
 public:
  TargetMatchingError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Expression syntax errors and malformed configuration files. `pointer` is a
/// JSON pointer (RFC 6901) to the offending value when one is known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::string pointer = "")
      : std::runtime_error(pointer.empty() ? what : pointer + ": " + what),
        pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace hgt
