#include "aol/error.hpp"

namespace aol {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidPretrain: return "InvalidPretrain";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::NotFitted: return "NotFitted";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::NumericError: return "NumericError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RegistryError: return "RegistryError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace aol
