#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aol {

enum class ErrorCode {
  InvalidPretrain = 1,
  MissingLabel,
  SchemaError,
  NotFitted,
  Unsupported,
  NumericError,
  ParseError,
  InvalidArgument,
  RegistryError,
  ConfigError,
  EmptySeries,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the C
// boundary can translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace aol
