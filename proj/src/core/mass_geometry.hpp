#pragma once

#include <memory>
#include <span>
#include <vector>

#include "common.hpp"
#include "law.hpp"

namespace jmcurv {

/// Collision guard relative to the configuration diameter.
inline constexpr double kCollisionGuard = 1e-9;

class MassSystem {
 public:
  explicit MassSystem(std::vector<double> masses);

  std::size_t size() const noexcept { return masses_.size(); }
  double mass(std::size_t k) const { return masses_[k]; }
  std::span<const double> masses() const noexcept { return masses_; }
  double total_mass() const noexcept { return total_; }

 private:
  std::vector<double> masses_;
  double total_ = 0.0;
};

using SystemPtr = std::shared_ptr<const MassSystem>;

SystemPtr make_system(std::vector<double> masses);

/// N planar positions q_k in C, collision free. Immutable once built.
class Configuration {
 public:
  Configuration(SystemPtr system, CVec positions);

  const MassSystem& system() const noexcept { return *system_; }
  const SystemPtr& system_ptr() const noexcept { return system_; }
  const CVec& positions() const noexcept { return q_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(q_.size()); }

  double min_distance() const noexcept { return min_dist_; }
  double diameter() const noexcept { return diameter_; }

  Configuration with_positions(CVec positions) const { return {system_, std::move(positions)}; }
  Configuration recentered() const;
  Configuration scaled(double s) const;
  Configuration rotated(double theta) const;

 private:
  SystemPtr system_;
  CVec q_;
  double min_dist_ = 0.0;
  double diameter_ = 0.0;
};

/// Sum_k m_k u_k conj(v_k). Real part is the mass metric, imaginary part the
/// mass symplectic form.
cplx hermitian_product(const MassSystem& sys, const CVec& u, const CVec& v);
double mass_dot(const MassSystem& sys, const CVec& u, const CVec& v);
double mass_norm(const MassSystem& sys, const CVec& u);

double moment_of_inertia(const Configuration& q);
/// (1/M) sum_{i<j} m_i m_j r_ij^2; equals I(q) for centered q.
double moment_of_inertia_pairwise(const Configuration& q);

cplx center_of_mass(const MassSystem& sys, const CVec& q);

/// (1, ..., 1): generator of real translations.
CVec unit_translation(std::size_t n);
/// (1+i, ..., 1+i): the diagonal translation used in the Saari curvature.
CVec diagonal_translation(std::size_t n);

struct ConservedQuantities {
  double energy = 0.0;
  cplx linear_momentum{};
  double angular_momentum = 0.0;
};

ConservedQuantities conserved_quantities(const Configuration& q, const CVec& qdot,
                                         const PotentialLaw& law);

/// Gram-Schmidt in the real mass metric. Throws degenerate_input when the
/// inputs are (numerically) linearly dependent over R.
std::vector<CVec> orthonormalize(const MassSystem& sys, std::span<const CVec> vectors);

/// Hermitian-orthonormal basis v_1 = v/|v|, v_2, ..., v_N of C^N.
std::vector<CVec> unitary_completion(const MassSystem& sys, const CVec& v);

void check_dimension(const MassSystem& sys, const CVec& v, const char* what);

}  // namespace jmcurv
