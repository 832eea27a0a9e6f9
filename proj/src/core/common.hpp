#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace jmcurv {

using cplx = std::complex<double>;

/// Complex vector in C^N. Viewed as R^{2N} it is ordered (x_1, y_1, x_2, y_2, ...),
/// which is exactly the memory layout of std::complex<double>.
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

enum class ErrorCode {
  invalid_argument,
  invalid_masses,
  dimension_mismatch,
  collision,
  outside_hill_region,
  degenerate_input,
  non_convergence,
  non_central,
  unsupported_exponent,
  step_underflow,
  vanishing_derivative,
  parse_error,
  io_error,
};

const char* to_string(ErrorCode code);

/// Validation errors are caught before any numerics run; everything else
/// is a numerical failure.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

/// Real 2N view of a complex N-vector (no copy).
inline Eigen::Map<const RVec> real_view(const CVec& v) {
  return {reinterpret_cast<const double*>(v.data()), 2 * v.size()};
}
inline Eigen::Map<RVec> real_view(CVec& v) {
  return {reinterpret_cast<double*>(v.data()), 2 * v.size()};
}

inline CVec from_real(const RVec& r) {
  CVec out(r.size() / 2);
  for (Eigen::Index k = 0; k < out.size(); ++k) out[k] = {r[2 * k], r[2 * k + 1]};
  return out;
}

}  // namespace jmcurv
