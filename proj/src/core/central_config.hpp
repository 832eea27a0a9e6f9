#pragma once

#include "potential.hpp"

namespace jmcurv {

struct CentralConfigResult {
  Configuration configuration;
  double lambda = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Least-squares multiplier <grad U, q> / I(q) = -alpha U / I.
double lambda_for(const Configuration& q, const PotentialLaw& law);

/// Mass norm of grad U(q) - lambda_for(q) q.
double central_residual(const Configuration& q, const PotentialLaw& law);

struct CentralSolverOptions {
  int max_iterations = 200;
  int max_halvings = 30;
};

/// Gauge slice: center of mass at 0, I = 1, body 1 on the positive real axis.
Configuration project_to_gauge_slice(const Configuration& q);

/// Damped Gauss-Newton on grad U - lambda q restricted to the gauge slice.
/// The solver is local: perturbed equilateral seeds converge to Lagrange's
/// triangle, near-collinear seeds to Euler's line, regular polygons to
/// the polygon (equal masses).
CentralConfigResult solve_central(const Configuration& seed, const PotentialLaw& law, double tol,
                                  const CentralSolverOptions& options = {});

}  // namespace jmcurv
