#pragma once

#include <optional>
#include <vector>

#include "potential.hpp"

namespace jmcurv {

struct PhaseState {
  CVec q;
  CVec qdot;
  double t = 0.0;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
  double rtol = 0.0;
  double atol = 0.0;
  double collision_distance = 0.0;  // truncation threshold on min pairwise distance
  bool truncated = false;           // stopped at the collision guard
};

/// Time-ordered samples of a solution of qddot = grad U(q). `law.energy`
/// is the energy of the initial state.
struct Trajectory {
  SystemPtr system;
  PotentialLaw law;
  std::vector<PhaseState> samples;
  IntegratorStats stats;
};

struct IntegrateOptions {
  double sample_dt = 0.0;    // > 0: dense output on a uniform grid; 0: every accepted step
  double atol_ratio = 1e-2;  // atol = atol_ratio * tol
};

/// Adaptive Dormand-Prince integration of Newton's equations from `initial`
/// to t_final (may lie before initial.t). Stops with a flagged terminal
/// state when bodies come within 1e-9 of the initial diameter.
Trajectory integrate(const MassSystem& sys, const PhaseState& initial, const PotentialLaw& law,
                     double t_final, double tol, const IntegrateOptions& options = {});
Trajectory integrate(const SystemPtr& sys, const PhaseState& initial, const PotentialLaw& law,
                     double t_final, double tol, const IntegrateOptions& options = {});

struct RelativeEquilibrium {
  double omega = 0.0;   // angular velocity in time
  double period = 0.0;  // 2 pi / omega
  double energy = 0.0;  // (alpha/2 - 1) U
};

/// Rigid rotation e^{i omega t} q of a central configuration. Throws
/// non_central when q is not central to 1e-8 relative.
RelativeEquilibrium relative_equilibrium(const Configuration& q_central, const PotentialLaw& law);

/// Initial state of the relative equilibrium through q (velocity i omega q).
PhaseState relative_equilibrium_state(const Configuration& q_central, const PotentialLaw& law);

struct HomographicSolution {
  Trajectory trajectory;   // z(t) q
  std::vector<cplx> z;     // scalar factor at each sample
  bool collapsed = false;  // |z| reached the guard
};

/// Integrates the reduced central-force problem zddot = lambda z / |z|^{2+alpha}
/// and lifts it to z(t) q.
HomographicSolution homographic(const Configuration& q_central, const PotentialLaw& law, cplx z0,
                                cplx zdot0, double t_final, double tol,
                                const IntegrateOptions& options = {});

struct Diagnostics {
  std::vector<double> t, energy, angular_momentum, inertia, potential, lj_residual, mu;
  std::vector<cplx> linear_momentum;
  std::optional<std::vector<double>> dziobek;
};

/// H, L, C, I, U, |Iddot - 4H_0 - (4 - 2 alpha) U| with Iddot from
/// 2|qdot|^2 + 2<q, grad U>, Saari's mu = I^{alpha/2} U and the Dziobek
/// constant h |C|^{2 alpha / (2 - alpha)} (alpha != 2 only).
Diagnostics diagnostics(const Trajectory& traj, bool with_dziobek);
Diagnostics diagnostics(const Trajectory& traj);

struct DriftSummary {
  double energy = 0.0;            // max |H - H_0| / |H_0| (absolute when H_0 = 0)
  double linear_momentum = 0.0;   // max |L - L_0| / scale
  double angular_momentum = 0.0;  // max |C - C_0| / scale
  double lj_residual = 0.0;
};

DriftSummary drift_summary(const Trajectory& traj);

double min_pairwise_distance(const CVec& q);
double diameter(const CVec& q);

}  // namespace jmcurv
