#include "potential.hpp"

#include <cmath>

namespace jmcurv {

namespace kernel {

double value(std::span<const double> masses, const CVec& q, double alpha) {
  const std::size_t n = masses.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      acc += masses[i] * masses[j] * std::pow(std::abs(q[i] - q[j]), -alpha);
  return acc / alpha;
}

void gradient(std::span<const double> masses, const CVec& q, double alpha, CVec& out) {
  const std::size_t n = masses.size();
  out.setZero(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx d = q[i] - q[j];
      const double r2 = std::norm(d);
      const cplx f = d * std::pow(r2, -0.5 * alpha - 1.0);
      out[i] -= masses[j] * f;
      out[j] += masses[i] * f;
    }
}

void hessian_apply(std::span<const double> masses, const CVec& q, double alpha, const CVec& v,
                   CVec& out) {
  const std::size_t n = masses.size();
  out.setZero(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx d = q[i] - q[j];
      const cplx dv = v[i] - v[j];
      const double r2 = std::norm(d);
      const double proj = (d.real() * dv.real() + d.imag() * dv.imag()) / r2;
      // Pair Hessian -r^{-alpha-2} (Id - (alpha+2) d d^T / r^2) applied to dv.
      const cplx a = -std::pow(r2, -0.5 * alpha - 1.0) * (dv - (alpha + 2.0) * proj * d);
      out[i] += masses[j] * a;
      out[j] -= masses[i] * a;
    }
}

void hessian_matrix(std::span<const double> masses, const CVec& q, double alpha, RMat& out) {
  const std::size_t n = masses.size();
  out.setZero(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx d = q[i] - q[j];
      const double r2 = std::norm(d);
      const double s = -std::pow(r2, -0.5 * alpha - 1.0);
      const double dx = d.real() / std::sqrt(r2), dy = d.imag() / std::sqrt(r2);
      Eigen::Matrix2d block;
      block << 1.0 - (alpha + 2.0) * dx * dx, -(alpha + 2.0) * dx * dy,
          -(alpha + 2.0) * dx * dy, 1.0 - (alpha + 2.0) * dy * dy;
      block *= s;
      const auto bi = static_cast<Eigen::Index>(2 * i), bj = static_cast<Eigen::Index>(2 * j);
      out.block<2, 2>(bi, bi) += masses[j] * block;
      out.block<2, 2>(bi, bj) -= masses[j] * block;
      out.block<2, 2>(bj, bj) += masses[i] * block;
      out.block<2, 2>(bj, bi) -= masses[i] * block;
    }
}

}  // namespace kernel

double potential_value(const Configuration& q, const PotentialLaw& law) {
  validate(law);
  return kernel::value(q.system().masses(), q.positions(), law.alpha);
}

CVec mass_gradient(const Configuration& q, const PotentialLaw& law) {
  validate(law);
  CVec out;
  kernel::gradient(q.system().masses(), q.positions(), law.alpha, out);
  return out;
}

CVec hessian_apply(const Configuration& q, const PotentialLaw& law, const CVec& v) {
  validate(law);
  check_dimension(q.system(), v, "v");
  CVec out;
  kernel::hessian_apply(q.system().masses(), q.positions(), law.alpha, v, out);
  return out;
}

double hessian_form(const Configuration& q, const PotentialLaw& law, const CVec& v,
                    const CVec& w) {
  return mass_dot(q.system(), hessian_apply(q, law, v), w);
}

std::vector<cplx> wirtinger_derivatives(const Configuration& q, const PotentialLaw& law,
                                        std::span<const CVec> basis) {
  const auto& sys = q.system();
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = a; b < basis.size(); ++b) {
      const cplx g = hermitian_product(sys, basis[a], basis[b]);
      const cplx expected = a == b ? cplx{1.0, 0.0} : cplx{};
      if (std::abs(g - expected) > 1e-8)
        fail(ErrorCode::degenerate_input, "basis is not Hermitian-orthonormal in the mass metric");
    }
  const CVec grad = mass_gradient(q, law);
  std::vector<cplx> out;
  out.reserve(basis.size());
  for (const CVec& b : basis) out.push_back(0.5 * std::conj(hermitian_product(sys, grad, b)));
  return out;
}

}  // namespace jmcurv
