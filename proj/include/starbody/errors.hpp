#pragma once

#include <stdexcept>
#include <string>

namespace starbody {

enum class ErrorKind {
  Argument,
  Domain,
  Range,
  Validation,
  Solver,
  Integrand,
  Config,
};

/// Base class of every exception thrown by the library. The kind decides the
/// CLI exit status (configuration vs numerical failure).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::Solver || kind_ == ErrorKind::Integrand ||
           kind_ == ErrorKind::Domain || kind_ == ErrorKind::Range;
  }

 private:
  ErrorKind kind_;
};

#define STARBODY_DEFINE_ERROR(Name, Kind)                              \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

STARBODY_DEFINE_ERROR(ArgumentError, Argument)
STARBODY_DEFINE_ERROR(DomainError, Domain)
STARBODY_DEFINE_ERROR(RangeError, Range)
STARBODY_DEFINE_ERROR(ValidationError, Validation)
STARBODY_DEFINE_ERROR(SolverError, Solver)
STARBODY_DEFINE_ERROR(IntegrandError, Integrand)
STARBODY_DEFINE_ERROR(ConfigError, Config)

#undef STARBODY_DEFINE_ERROR

}  // namespace starbody
