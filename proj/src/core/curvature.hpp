#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "potential.hpp"

namespace jmcurv {

/// Two tangent vectors at a common base point, orthonormal in the mass metric
/// once built through `orthonormal`.
struct TangentPlane {
  CVec u;
  CVec v;
  bool orthonormalized = false;

  static TangentPlane orthonormal(const MassSystem& sys, const CVec& u, const CVec& v);
};

/// JM conformal factor h + U(q); throws outside_hill_region when not positive.
double conformal_factor(const Configuration& q, const PotentialLaw& law);

/// Sectional curvature of (h + U) ds^2 through the plane:
///   (h+U)^3 K = 3/4 (dU(u)^2 + dU(v)^2) - 1/4 |grad U|^2 - (h+U)/2 (D^2U(u,u) + D^2U(v,v))
/// for mass-orthonormal u, v. Non-orthonormal planes are orthonormalized first.
double sectional_curvature(const Configuration& q, const TangentPlane& plane,
                           const PotentialLaw& law);

/// Kobayashi holomorphic sectional curvature H_q(X) of the complex line C X,
/// evaluated from the Kahler-type curvature tensor
///   R_{i jb k lb} = -d_k db_l g_{i jb} + g^{p qb} d_k g_{i qb} db_l g_{p jb}
/// in a unitary frame adapted to X.
double holomorphic_sectional(const Configuration& q, const CVec& direction,
                             const PotentialLaw& law);

/// -h alpha^2 U / (2 (h+U)^3 |q|^2), the holomorphic curvature along C q.
double closed_form_Hqq(const Configuration& q, const PotentialLaw& law);

struct CentralCurvatureCheck {
  bool is_central = false;
  double residual = 0.0;   // |K_q(q, iq) - closed_form_Hqq(q)|
  double tolerance = 0.0;
};

/// q is central iff K_q(q, iq) equals the closed form. The residual equals
/// sum_{j>=2} |d_j U|^2 / (h+U)^3 = |grad U - lambda q|^2 / (4 (h+U)^3).
CentralCurvatureCheck central_curvature_check(const Configuration& q, const PotentialLaw& law,
                                              double tol);

/// Curvature tolerance equivalent to a gradient residual tolerance, and back.
double curvature_tolerance_for(double gradient_tol, double conformal_factor);
double gradient_tolerance_for(double curvature_tol, double conformal_factor);

enum class PlaneFamily { q_v, iq_iv, v_iv, q_iq };

const char* to_string(PlaneFamily family);

struct PlaneSample {
  PlaneFamily family;
  std::vector<cplx> coefficients;  // coordinates of v in the completion v_2..v_N
  double curvature = 0.0;
};

struct PlaneScan {
  std::vector<PlaneSample> entries;
  std::vector<double> identity_residuals;  // one per sampled v
  double max_identity_residual = 0.0;
  bool base_is_central = true;
};

/// Samples unit v orthogonal to C q and evaluates the four plane families
/// (q, v), (iq, iv), (v, iv), (q, iq), checking
/// K(q,iq) + K(v,iv) = K(q,v) + K(iq,iv).
PlaneScan plane_scan(const Configuration& q, const PotentialLaw& law, int samples,
                     std::uint64_t seed);

/// Polynomial holomorphic map g : D -> C^k, component c has coefficients
/// coeffs[c][n] of z^n.
struct HolomorphicPolynomial {
  std::vector<std::vector<cplx>> coeffs;

  std::vector<cplx> value(cplx z) const;
  std::vector<cplx> derivative(cplx z) const;
};

/// Max over maps of | -d db log(c + |g|^2) - RHS | at z = 0, the left side by
/// a fourth-order finite-difference Laplacian, the right side
/// (|<g,g'>|^2 - |g|^2 |g'|^2 - c |g'|^2) / (c + |g|^2)^2.
double log_conformal_identity_check(std::span<const HolomorphicPolynomial> maps, double c);

double log_conformal_rhs(const HolomorphicPolynomial& g, double c);

struct CurvatureReport {
  double sectional = 0.0;
  std::optional<double> holomorphic;
  std::optional<double> closed_form;
  std::optional<CentralCurvatureCheck> central_check;
};

}  // namespace jmcurv
