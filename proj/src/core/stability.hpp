#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "curvature.hpp"
#include "dynamics.hpp"

namespace jmcurv {

enum class Verdict { spectrally_unstable, linearly_unstable, inconclusive };

const char* to_string(Verdict v);

struct MonodromyDetails {
  RMat matrix;                       // 4N x 4N in (q, qdot) interleaved real coordinates
  std::vector<cplx> raw_eigs;        // dense eigensolver output, unprocessed
  int unit_algebraic_multiplicity = 0;
  int unit_geometric_multiplicity = 0;
  std::vector<int> unit_staircase;   // dim ker (M-I)^k - dim ker (M-I)^{k-1}, k = 1, 2, ...
  bool defective_unit = false;
  double rank_threshold = 0.0;
  double symplectic_residual = 0.0;  // |M^T J M - J|_max / |M|^2 in canonical coordinates
  double unit_circle_deviation = 0.0;  // max | |lambda| - 1 | over the spectrum
  double reciprocal_pair_error = 0.0;  // max_i min_j |lambda_i lambda_j - 1|
  double surface_match_error = 0.0;    // relative gap between analytic and closest numerical eig
  double period = 0.0;
  std::size_t steps = 0;
};

struct StabilityReport {
  double alpha = 0.0;
  double energy = 0.0;     // energy of the relative equilibrium
  double omega_jm = 0.0;   // angular speed in JM arclength
  double c_squared = 0.0;  // -K_q(q, iq)
  double c = 0.0;          // sqrt(max(c_squared, 0))
  double c_over_omega = 0.0;
  std::vector<cplx> analytic_eigs;
  bool analytic_jordan_block = false;
  std::vector<cplx> monodromy_eigs;  // unit cluster reported as exact 1 after rank certification
  std::optional<MonodromyDetails> monodromy;
  Verdict verdict = Verdict::inconclusive;
};

/// omega with (h + U) omega^2 I = 1, so that s -> e^{i omega s} q has unit JM speed.
double jm_unit_speed_omega(const Configuration& q_central, const PotentialLaw& law);

/// Surface-block return map eigenvalues from the normal Jacobi field
/// lambdaddot = c^2 lambda along the relative equilibrium. The energy is
/// that of the relative equilibrium; law.energy is ignored.
StabilityReport analytic_return_eigs(const Configuration& q_central, const PotentialLaw& law);

struct JacobiFieldSeries {
  std::vector<double> s, value, derivative;
};

/// Integrates lambdaddot = c^2 lambda in JM arclength from (lambda0, lambdadot0).
JacobiFieldSeries jacobi_field_integrate(const Configuration& q_central, const PotentialLaw& law,
                                         double lambda0, double lambdadot0, double s_final);

/// Full monodromy of the variational equations along e^{i Omega t} q over
/// one period, with the analytic surface block for comparison.
StabilityReport numerical_monodromy(const Configuration& q_central, const PotentialLaw& law,
                                    double tol);

struct UnitSpectrum {
  std::vector<int> staircase;
  int algebraic = 0;
  int geometric = 0;
  std::vector<cplx> remaining;  // eigenvalues off the certified unit cluster
  double threshold = 0.0;       // absolute singular value cutoff used
};

/// Jordan structure of eigenvalue 1. A reordered complex Schur form isolates
/// the eigenvalues within `cluster_radius` of 1; the SVD staircase then runs on
/// that block minus I, with cutoff rel_threshold * max(1, |T11|_F), deflating
/// the kernel found at each level.
UnitSpectrum unit_eigen_structure(const RMat& m, double rel_threshold = 1e-4,
                                  double cluster_radius = 0.1);

struct ProbeRow {
  double energy = 0.0;
  PlaneFamily family = PlaneFamily::q_v;
  double min_curvature = 0.0;
  double identity_residual = 0.0;  // max over samples at this energy
};

/// For 0 < alpha < 2: minimal sampled curvature per plane family at each energy.
std::vector<ProbeRow> conjecture_probe(const Configuration& q_central, double alpha,
                                       std::span<const double> energy_grid, int samples,
                                       std::uint64_t seed);

}  // namespace jmcurv
