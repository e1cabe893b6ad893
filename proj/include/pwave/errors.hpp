#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pwave {

enum class ErrorCode {
  NonRepulsive,
  NoConvergence,
  DegenerateExterior,
  DimensionUnsupported,
  GridMismatch,
  CutoffInsideCore,
  QuadratureFailure,
  InsufficientSamples,
  Overflow,
  SectorTooLarge,
  SectorMissing,
  ExpDivergence,
  UnsupportedDim,
  InvalidArgument,
  ConfigError,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonRepulsive: return "NonRepulsive";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateExterior: return "DegenerateExterior";
    case ErrorCode::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::CutoffInsideCore: return "CutoffInsideCore";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::SectorTooLarge: return "SectorTooLarge";
    case ErrorCode::SectorMissing: return "SectorMissing";
    case ErrorCode::ExpDivergence: return "ExpDivergence";
    case ErrorCode::UnsupportedDim: return "UnsupportedDim";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code and
/// the name of the module that raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + " [" + module + "]: " + message),
        code_(code),
        module_(std::move(module)) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorCode code_;
  std::string module_;
};

}  // namespace pwave
