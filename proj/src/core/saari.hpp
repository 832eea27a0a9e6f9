#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dynamics.hpp"

namespace jmcurv {

/// Curvature of the JM metric through the plane (qdot, 1) along a trajectory,
/// where 1 = (1+i, ..., 1+i).
struct SaariSeries {
  std::vector<double> times;
  std::vector<double> curvature;          // 8 (h+U)^4 K = 3 (dU/dt)^2 - 2 (h+U) d2U/dt2
  std::vector<double> curvature_general;  // same plane through the general sectional formula
  std::vector<double> potential;
  std::vector<double> dU_dt;
  std::vector<double> d2U_dt2;
  std::vector<double> d2U_transverse;  // dU along 1/|1|, zero for centered motion
  std::vector<double> curvature_scale; // |grad U|^2 / (h+U)^3
};

/// Requires center of mass and total momentum at zero (to 1e-9 relative).
SaariSeries curvature_along(const Trajectory& traj);

struct FirstIntegralCheck {
  double C_estimate = 0.0;
  double max_residual = 0.0;  // max |C (dU/dt)^2 - (h+U)^3| / (h+U)^3
};

/// Fits C in C (dU/dt)^2 = (h+U)^3. Throws vanishing_derivative when dU/dt is
/// (numerically) zero at some sample.
FirstIntegralCheck first_integral_check(std::span<const double> potential,
                                        std::span<const double> dU_dt, double energy);
FirstIntegralCheck first_integral_check(const Trajectory& traj);

struct FlatSegment {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

/// Runs of at least `min_dwell` samples where |K| <= rel_threshold * curvature_scale
/// (1 where the series carries no scale).
std::vector<FlatSegment> flat_segments(const SaariSeries& series, double rel_threshold = 1e-8,
                                       std::size_t min_dwell = 10);

/// `violated` means the hypotheses held but U still varied beyond tol.
enum class WitnessVerdict { potential_constant, inconclusive, violated };

const char* to_string(WitnessVerdict v);

struct ConstantPotentialWitness {
  WitnessVerdict verdict = WitnessVerdict::inconclusive;
  double inertia_variation = 0.0;   // max relative variation of I
  double curvature_max = 0.0;       // max |K(qdot, 1)| / (|grad U|^2 / (h+U)^3)
  double potential_variation = 0.0; // max relative variation of U: the witness
  std::optional<double> mu_variation;  // N = 3: max relative variation of I U
};

/// Strong-force (alpha = 2) check: constant I and vanishing K(qdot, 1) force
/// constant U. Hypotheses failing to tol give an inconclusive verdict.
ConstantPotentialWitness constant_potential_witness(const Trajectory& traj, double tol);

}  // namespace jmcurv
