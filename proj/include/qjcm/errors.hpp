#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qjcm {

// Base of every library error; `kind()` is the stable machine-readable tag
// the CLI prints on stderr.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define QJCM_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                    \
   public:                                                       \
    using Error::Error;                                          \
    const char* kind() const noexcept override { return #Name; } \
  };

QJCM_DEFINE_ERROR(InvalidSpec)
QJCM_DEFINE_ERROR(DomainError)
QJCM_DEFINE_ERROR(NonConvergence)
QJCM_DEFINE_ERROR(SpecMismatch)
QJCM_DEFINE_ERROR(DegenerateFrequency)
QJCM_DEFINE_ERROR(NoStationaryPoint)
QJCM_DEFINE_ERROR(PreconditionError)
QJCM_DEFINE_ERROR(BasisTooSmall)
QJCM_DEFINE_ERROR(ToleranceNotMet)
QJCM_DEFINE_ERROR(ValidationError)

#undef QJCM_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(message), line_(line), column_(column) {}
  const char* kind() const noexcept override { return "ParseError"; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace qjcm
