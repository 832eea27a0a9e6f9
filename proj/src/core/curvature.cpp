#include "curvature.hpp"

#include <cmath>
#include <random>

#include "central_config.hpp"
#include "parallel.hpp"

namespace jmcurv {

namespace {
const cplx I1{0.0, 1.0};
}

TangentPlane TangentPlane::orthonormal(const MassSystem& sys, const CVec& u, const CVec& v) {
  const CVec in[2] = {u, v};
  auto basis = orthonormalize(sys, in);
  return {std::move(basis[0]), std::move(basis[1]), true};
}

double conformal_factor(const Configuration& q, const PotentialLaw& law) {
  const double rho = law.energy + potential_value(q, law);
  if (!(rho > 0.0))
    fail(ErrorCode::outside_hill_region, "h + U(q) must be positive (Hill region)");
  return rho;
}

double sectional_curvature(const Configuration& q, const TangentPlane& plane,
                           const PotentialLaw& law) {
  const auto& sys = q.system();
  const TangentPlane p = plane.orthonormalized ? plane : TangentPlane::orthonormal(sys, plane.u, plane.v);
  const double rho = conformal_factor(q, law);
  const CVec grad = mass_gradient(q, law);
  const double du = mass_dot(sys, grad, p.u);
  const double dv = mass_dot(sys, grad, p.v);
  const double huu = hessian_form(q, law, p.u, p.u);
  const double hvv = hessian_form(q, law, p.v, p.v);
  const double g2 = mass_dot(sys, grad, grad);
  const double num = 0.75 * (du * du + dv * dv) - 0.25 * g2 - 0.5 * rho * (huu + hvv);
  return num / (rho * rho * rho);
}

double holomorphic_sectional(const Configuration& q, const CVec& direction,
                             const PotentialLaw& law) {
  const auto& sys = q.system();
  const double rho = conformal_factor(q, law);
  const std::vector<CVec> frame = unitary_completion(sys, direction);
  const std::size_t n = frame.size();

  // First and mixed second Wirtinger derivatives of U in frame coordinates.
  const std::vector<cplx> dU = wirtinger_derivatives(q, law, frame);
  std::vector<CVec> hx(n), hy(n);
  for (std::size_t k = 0; k < n; ++k) {
    hx[k] = hessian_apply(q, law, frame[k]);
    hy[k] = hessian_apply(q, law, I1 * frame[k]);
  }
  Eigen::MatrixXcd ddbarU(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      const double xx = mass_dot(sys, hx[k], frame[l]);
      const double yy = mass_dot(sys, hy[k], I1 * frame[l]);
      const double xy = mass_dot(sys, hx[k], I1 * frame[l]);
      const double yx = mass_dot(sys, hy[k], frame[l]);
      ddbarU(k, l) = 0.25 * cplx{xx + yy, xy - yx};
    }

  // Metric g_{i jb} = rho/2 delta_ij and its derivatives.
  const double g = 0.5 * rho;
  const double ginv = 1.0 / g;
  auto dg = [&](std::size_t k, std::size_t i, std::size_t j) -> cplx {  // d_k g_{i jb}
    return i == j ? 0.5 * dU[k] : cplx{};
  };
  auto dbar_g = [&](std::size_t l, std::size_t i, std::size_t j) -> cplx {  // db_l g_{i jb}
    return i == j ? 0.5 * std::conj(dU[l]) : cplx{};
  };
  auto ddbar_g = [&](std::size_t k, std::size_t l, std::size_t i, std::size_t j) -> cplx {
    return i == j ? 0.5 * ddbarU(k, l) : cplx{};
  };

  // Unit vector X = d_1 / sqrt(g_{1 1b}) in the adapted frame.
  std::vector<cplx> x(n, cplx{});
  x[0] = 1.0 / std::sqrt(g);

  cplx h{};
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == cplx{}) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (x[j] == cplx{}) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (x[k] == cplx{}) continue;
        for (std::size_t l = 0; l < n; ++l) {
          if (x[l] == cplx{}) continue;
          cplx r = -ddbar_g(k, l, i, j);
          for (std::size_t p = 0; p < n; ++p)
            r += ginv * dg(k, i, p) * dbar_g(l, p, j);
          h += r * x[i] * std::conj(x[j]) * x[k] * std::conj(x[l]);
        }
      }
    }
  }
  return h.real();
}

double closed_form_Hqq(const Configuration& q, const PotentialLaw& law) {
  const double u = potential_value(q, law);
  const double rho = conformal_factor(q, law);
  return -law.energy * law.alpha * law.alpha * u /
         (2.0 * rho * rho * rho * moment_of_inertia(q));
}

double curvature_tolerance_for(double gradient_tol, double rho) {
  return gradient_tol * gradient_tol / (4.0 * rho * rho * rho);
}

double gradient_tolerance_for(double curvature_tol, double rho) {
  return 2.0 * std::sqrt(curvature_tol * rho * rho * rho);
}

CentralCurvatureCheck central_curvature_check(const Configuration& q, const PotentialLaw& law,
                                              double tol) {
  const CVec& x = q.positions();
  const TangentPlane plane = TangentPlane::orthonormal(q.system(), x, I1 * x);
  const double k = sectional_curvature(q, plane, law);
  const double residual = std::abs(k - closed_form_Hqq(q, law));
  return {residual <= tol, residual, tol};
}

const char* to_string(PlaneFamily family) {
  switch (family) {
    case PlaneFamily::q_v: return "q_v";
    case PlaneFamily::iq_iv: return "iq_iv";
    case PlaneFamily::v_iv: return "v_iv";
    case PlaneFamily::q_iq: return "q_iq";
  }
  return "unknown";
}

PlaneScan plane_scan(const Configuration& q, const PotentialLaw& law, int samples,
                     std::uint64_t seed) {
  if (samples < 1) fail(ErrorCode::invalid_argument, "samples must be positive");
  const auto& sys = q.system();
  conformal_factor(q, law);
  const std::vector<CVec> frame = unitary_completion(sys, q.positions());
  const std::size_t n = frame.size();

  PlaneScan scan;
  const CVec grad = mass_gradient(q, law);
  scan.base_is_central = central_residual(q, law) <= 1e-8 * mass_norm(sys, grad);

  // Draw all coefficients up front so results do not depend on thread count.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<std::vector<cplx>> coeffs(samples, std::vector<cplx>(n - 1));
  for (auto& c : coeffs) {
    double norm2 = 0.0;
    for (auto& z : c) {
      z = {normal(rng), normal(rng)};
      norm2 += std::norm(z);
    }
    for (auto& z : c) z /= std::sqrt(norm2);
  }

  const CVec& e1 = frame[0];
  scan.entries.resize(4 * static_cast<std::size_t>(samples));
  scan.identity_residuals.resize(samples);
  parallel_for(samples, [&](std::size_t s) {
    CVec v = CVec::Zero(n);
    for (std::size_t j = 1; j < n; ++j) v += coeffs[s][j - 1] * frame[j];
    auto k = [&](const CVec& a, const CVec& b) {
      return sectional_curvature(q, TangentPlane::orthonormal(sys, a, b), law);
    };
    const double k_qv = k(e1, v);
    const double k_iqiv = k(I1 * e1, I1 * v);
    const double k_viv = k(v, I1 * v);
    const double k_qiq = k(e1, I1 * e1);
    scan.entries[4 * s + 0] = {PlaneFamily::q_v, coeffs[s], k_qv};
    scan.entries[4 * s + 1] = {PlaneFamily::iq_iv, coeffs[s], k_iqiv};
    scan.entries[4 * s + 2] = {PlaneFamily::v_iv, coeffs[s], k_viv};
    scan.entries[4 * s + 3] = {PlaneFamily::q_iq, coeffs[s], k_qiq};
    scan.identity_residuals[s] = std::abs(k_qiq + k_viv - k_qv - k_iqiv);
  });
  for (double r : scan.identity_residuals)
    scan.max_identity_residual = std::max(scan.max_identity_residual, r);
  return scan;
}

std::vector<cplx> HolomorphicPolynomial::value(cplx z) const {
  std::vector<cplx> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) {
    cplx acc{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    out.push_back(acc);
  }
  return out;
}

std::vector<cplx> HolomorphicPolynomial::derivative(cplx z) const {
  std::vector<cplx> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) {
    cplx acc{};
    for (std::size_t n = c.size(); n-- > 1;) acc = acc * z + static_cast<double>(n) * c[n];
    out.push_back(acc);
  }
  return out;
}

double log_conformal_rhs(const HolomorphicPolynomial& g, double c) {
  const auto g0 = g.value({});
  const auto g1 = g.derivative({});
  cplx inner{};
  double gg = 0.0, g1g1 = 0.0;
  for (std::size_t i = 0; i < g0.size(); ++i) {
    inner += g0[i] * std::conj(g1[i]);
    gg += std::norm(g0[i]);
    g1g1 += std::norm(g1[i]);
  }
  const double denom = (c + gg) * (c + gg);
  return (std::norm(inner) - gg * g1g1 - c * g1g1) / denom;
}

double log_conformal_identity_check(std::span<const HolomorphicPolynomial> maps, double c) {
  if (!(c > 0.0)) fail(ErrorCode::invalid_argument, "c must be positive");
  double worst = 0.0;
  for (const auto& g : maps) {
    auto f = [&](cplx z) {
      double s = c;
      for (const cplx& w : g.value(z)) s += std::norm(w);
      return std::log(s);
    };
    const double h = 2e-3;
    auto second = [&](cplx dir) {
      return (-f(2.0 * h * dir) + 16.0 * f(h * dir) - 30.0 * f({}) + 16.0 * f(-h * dir) -
              f(-2.0 * h * dir)) /
             (12.0 * h * h);
    };
    const double laplacian = second({1.0, 0.0}) + second({0.0, 1.0});
    const double lhs = -0.25 * laplacian;
    worst = std::max(worst, std::abs(lhs - log_conformal_rhs(g, c)));
  }
  return worst;
}

}  // namespace jmcurv
