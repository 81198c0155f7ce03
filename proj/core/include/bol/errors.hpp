#pragma once

#include <stdexcept>
#include <string>

namespace bol {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the domain of the operation (bad parameter,
/// malformed input, evaluation outside a function's domain).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An improper integral does not converge. `end()` names the failing end
/// ("head" or "tail").
class DivergenceError : public Error {
 public:
  DivergenceError(std::string end, const std::string& what)
      : Error(what), end_(std::move(end)) {}
  const std::string& end() const noexcept { return end_; }

 private:
  std::string end_;
};

/// An iterative solver ran out of iterations before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed a configured resource limit.
class ResourceGuardError : public Error {
 public:
  ResourceGuardError(std::string guard, const std::string& what)
      : Error(what), guard_(std::move(guard)) {}
  const std::string& guard() const noexcept { return guard_; }

 private:
  std::string guard_;
};

}  // namespace bol
