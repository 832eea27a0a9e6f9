#include "saari.hpp"

#include <algorithm>
#include <cmath>

#include "curvature.hpp"

namespace jmcurv {

namespace {

double relative_variation(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  return scale > 0.0 ? (*hi - *lo) / scale : 0.0;
}

}  // namespace

SaariSeries curvature_along(const Trajectory& traj) {
  const MassSystem& sys = *traj.system;
  const PotentialLaw& law = traj.law;
  const std::size_t n = sys.size();
  const CVec ones = diagonal_translation(n);
  const double ones_norm = mass_norm(sys, ones);
  SaariSeries out;
  for (const PhaseState& s : traj.samples) {
    const Configuration q(traj.system, s.q);
    const double vnorm = mass_norm(sys, s.qdot);
    if (!(vnorm > 0.0)) fail(ErrorCode::degenerate_input, "qdot vanishes at a sample");
    const cplx com = center_of_mass(sys, s.q);
    const cplx mom = hermitian_product(sys, s.qdot, unit_translation(n));
    if (std::abs(com) > 1e-9 * q.diameter() ||
        std::abs(mom) > 1e-9 * std::sqrt(sys.total_mass()) * vnorm)
      fail(ErrorCode::invalid_argument, "center of mass must be fixed at the origin");

    const double u = potential_value(q, law);
    const double rho = law.energy + u;
    const CVec grad = mass_gradient(q, law);
    const double du = mass_dot(sys, grad, s.qdot);
    const double d2u = mass_dot(sys, grad, grad) + hessian_form(q, law, s.qdot, s.qdot);
    const double k = (3.0 * du * du - 2.0 * rho * d2u) / (8.0 * std::pow(rho, 4));
    const double kg =
        sectional_curvature(q, TangentPlane::orthonormal(sys, s.qdot, ones), law);

    out.times.push_back(s.t);
    out.curvature.push_back(k);
    out.curvature_general.push_back(kg);
    out.potential.push_back(u);
    out.dU_dt.push_back(du);
    out.d2U_dt2.push_back(d2u);
    out.d2U_transverse.push_back(mass_dot(sys, grad, ones) / ones_norm);
    out.curvature_scale.push_back(mass_dot(sys, grad, grad) / (rho * rho * rho));
  }
  return out;
}

FirstIntegralCheck first_integral_check(std::span<const double> potential,
                                        std::span<const double> dU_dt, double energy) {
  if (potential.size() != dU_dt.size() || potential.empty())
    fail(ErrorCode::dimension_mismatch, "potential and dU/dt series must be non-empty and equal");
  double dmax = 0.0;
  for (double d : dU_dt) dmax = std::max(dmax, std::abs(d));
  for (double d : dU_dt)
    if (!(std::abs(d) > 1e-12 * dmax))
      fail(ErrorCode::vanishing_derivative, "dU/dt vanishes on the segment");
  std::vector<double> ratio(potential.size());
  for (std::size_t i = 0; i < potential.size(); ++i) {
    const double rho = energy + potential[i];
    ratio[i] = rho * rho * rho / (dU_dt[i] * dU_dt[i]);
  }
  FirstIntegralCheck out;
  for (double r : ratio) out.C_estimate += r;
  out.C_estimate /= static_cast<double>(ratio.size());
  for (double r : ratio) out.max_residual = std::max(out.max_residual, std::abs(out.C_estimate / r - 1.0));
  return out;
}

FirstIntegralCheck first_integral_check(const Trajectory& traj) {
  const MassSystem& sys = *traj.system;
  std::vector<double> u, du;
  for (const PhaseState& s : traj.samples) {
    const Configuration q(traj.system, s.q);
    const CVec grad = mass_gradient(q, traj.law);
    const double d = mass_dot(sys, grad, s.qdot);
    if (!(std::abs(d) > 1e-9 * mass_norm(sys, grad) * mass_norm(sys, s.qdot)))
      fail(ErrorCode::vanishing_derivative, "dU/dt vanishes along the trajectory");
    u.push_back(potential_value(q, traj.law));
    du.push_back(d);
  }
  return first_integral_check(u, du, traj.law.energy);
}

std::vector<FlatSegment> flat_segments(const SaariSeries& series, double rel_threshold,
                                       std::size_t min_dwell) {
  const bool scaled = series.curvature_scale.size() == series.curvature.size();
  std::vector<FlatSegment> out;
  std::size_t start = 0;
  bool inside = false;
  for (std::size_t i = 0; i <= series.curvature.size(); ++i) {
    const bool flat =
        i < series.curvature.size() &&
        std::abs(series.curvature[i]) <= rel_threshold * (scaled ? series.curvature_scale[i] : 1.0);
    if (flat && !inside) {
      start = i;
      inside = true;
    } else if (!flat && inside) {
      if (i - start >= min_dwell) out.push_back({start, i});
      inside = false;
    }
  }
  return out;
}

const char* to_string(WitnessVerdict v) {
  switch (v) {
    case WitnessVerdict::potential_constant: return "potential_constant";
    case WitnessVerdict::inconclusive: return "inconclusive";
    case WitnessVerdict::violated: return "violated";
  }
  return "unknown";
}

ConstantPotentialWitness constant_potential_witness(const Trajectory& traj, double tol) {
  if (std::abs(traj.law.alpha - 2.0) > 1e-12)
    fail(ErrorCode::unsupported_exponent, "the constant-potential witness needs alpha = 2");
  const SaariSeries series = curvature_along(traj);
  std::vector<double> inertia, mu;
  ConstantPotentialWitness out;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const Configuration q(traj.system, traj.samples[i].q);
    out.curvature_max =
        std::max(out.curvature_max, std::abs(series.curvature[i]) / series.curvature_scale[i]);
    inertia.push_back(moment_of_inertia(q));
    mu.push_back(inertia.back() * series.potential[i]);
  }
  out.inertia_variation = relative_variation(inertia);
  out.potential_variation = relative_variation(series.potential);
  if (traj.system->size() == 3) out.mu_variation = relative_variation(mu);
  if (out.inertia_variation > tol || out.curvature_max > tol) {
    out.verdict = WitnessVerdict::inconclusive;
  } else {
    out.verdict = out.potential_variation <= tol ? WitnessVerdict::potential_constant
                                                 : WitnessVerdict::violated;
  }
  return out;
}

}  // namespace jmcurv
