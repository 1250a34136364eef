#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmc {

enum class Errc {
  InvalidArgument,
  NotPrime,
  TooLarge,
  DivisionByZero,
  Overflow,
  NotBAdicInteger,
  BaseMismatch,
  NotAUnit,
  PrecisionExhausted,
  SchemaError,
  EntryOutOfRange,
  ConventionRejected,
  DepthExceeded,
  SizeMismatch,
  OutOfRange,
  UnsupportedBase,
  InvalidT,
  ProfileTooShort,
  ConfigError,
};

std::string_view to_string(Errc code) noexcept;

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qmc
