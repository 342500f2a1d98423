#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace casimir {

enum class ErrorCode {
  domain,
  static_divergence,
  model_not_pointwise,
  tail_underspecified,
  invalid_temperature,
  convergence_failure,
  quadrature_failure,
  derivative_unstable,
  ladder_unconverged,
  invalid_model,
  io,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. Every failure raised by the
/// library goes through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "domain-error";
    case ErrorCode::static_divergence: return "static-divergence";
    case ErrorCode::model_not_pointwise: return "model-not-pointwise";
    case ErrorCode::tail_underspecified: return "tail-underspecified";
    case ErrorCode::invalid_temperature: return "invalid-temperature";
    case ErrorCode::convergence_failure: return "convergence-failure";
    case ErrorCode::quadrature_failure: return "quadrature-failure";
    case ErrorCode::derivative_unstable: return "derivative-unstable";
    case ErrorCode::ladder_unconverged: return "ladder-unconverged";
    case ErrorCode::invalid_model: return "invalid-model";
    case ErrorCode::io: return "io-error";
  }
  return "unknown-error";
}

}  // namespace casimir
