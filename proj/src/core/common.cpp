#include "common.hpp"

#include <cmath>

#include "law.hpp"

namespace jmcurv {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::invalid_masses: return "invalid_masses";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::collision: return "collision";
    case ErrorCode::outside_hill_region: return "outside_hill_region";
    case ErrorCode::degenerate_input: return "degenerate_input";
    case ErrorCode::non_convergence: return "non_convergence";
    case ErrorCode::non_central: return "non_central";
    case ErrorCode::unsupported_exponent: return "unsupported_exponent";
    case ErrorCode::step_underflow: return "step_underflow";
    case ErrorCode::vanishing_derivative: return "vanishing_derivative";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_masses:
    case ErrorCode::dimension_mismatch:
    case ErrorCode::outside_hill_region:
    case ErrorCode::non_central:
    case ErrorCode::unsupported_exponent:
    case ErrorCode::parse_error:
    case ErrorCode::io_error:
      return true;
    default:
      return false;
  }
}

void validate(const PotentialLaw& law) {
  if (!(law.alpha > 0.0) || !std::isfinite(law.alpha))
    fail(ErrorCode::unsupported_exponent, "alpha must be a finite positive number");
  if (!std::isfinite(law.energy)) fail(ErrorCode::invalid_argument, "energy must be finite");
}

}  // namespace jmcurv
