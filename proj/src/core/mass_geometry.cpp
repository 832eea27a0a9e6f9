#include "mass_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "potential.hpp"

namespace jmcurv {

MassSystem::MassSystem(std::vector<double> masses) : masses_(std::move(masses)) {
  if (masses_.size() < 2) fail(ErrorCode::invalid_masses, "at least two bodies are required");
  for (double m : masses_) {
    if (!(m > 0.0) || !std::isfinite(m))
      fail(ErrorCode::invalid_masses, "masses must be finite and strictly positive");
    total_ += m;
  }
}

SystemPtr make_system(std::vector<double> masses) {
  return std::make_shared<const MassSystem>(std::move(masses));
}

Configuration::Configuration(SystemPtr system, CVec positions)
    : system_(std::move(system)), q_(std::move(positions)) {
  if (!system_) fail(ErrorCode::invalid_argument, "configuration without a mass system");
  check_dimension(*system_, q_, "positions");
  for (Eigen::Index k = 0; k < q_.size(); ++k)
    if (!std::isfinite(q_[k].real()) || !std::isfinite(q_[k].imag()))
      fail(ErrorCode::invalid_argument, "positions must be finite");
  min_dist_ = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < q_.size(); ++i)
    for (Eigen::Index j = i + 1; j < q_.size(); ++j) {
      const double r = std::abs(q_[i] - q_[j]);
      min_dist_ = std::min(min_dist_, r);
      diameter_ = std::max(diameter_, r);
    }
  if (!(min_dist_ > kCollisionGuard * diameter_))
    fail(ErrorCode::collision, "configuration is at (or too close to) a collision");
}

Configuration Configuration::recentered() const {
  const cplx c = center_of_mass(*system_, q_);
  return with_positions(q_.array() - c);
}

Configuration Configuration::scaled(double s) const { return with_positions(s * q_); }

Configuration Configuration::rotated(double theta) const {
  return with_positions(std::polar(1.0, theta) * q_);
}

void check_dimension(const MassSystem& sys, const CVec& v, const char* what) {
  if (static_cast<std::size_t>(v.size()) != sys.size())
    fail(ErrorCode::dimension_mismatch,
         std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
             std::to_string(sys.size()));
}

cplx hermitian_product(const MassSystem& sys, const CVec& u, const CVec& v) {
  check_dimension(sys, u, "u");
  check_dimension(sys, v, "v");
  cplx acc{};
  for (std::size_t k = 0; k < sys.size(); ++k) acc += sys.mass(k) * u[k] * std::conj(v[k]);
  return acc;
}

double mass_dot(const MassSystem& sys, const CVec& u, const CVec& v) {
  return hermitian_product(sys, u, v).real();
}

double mass_norm(const MassSystem& sys, const CVec& u) { return std::sqrt(mass_dot(sys, u, u)); }

double moment_of_inertia(const Configuration& q) {
  return mass_dot(q.system(), q.positions(), q.positions());
}

double moment_of_inertia_pairwise(const Configuration& q) {
  const auto& sys = q.system();
  const auto& x = q.positions();
  double acc = 0.0;
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (std::size_t j = i + 1; j < sys.size(); ++j)
      acc += sys.mass(i) * sys.mass(j) * std::norm(x[i] - x[j]);
  return acc / sys.total_mass();
}

cplx center_of_mass(const MassSystem& sys, const CVec& q) {
  check_dimension(sys, q, "q");
  cplx acc{};
  for (std::size_t k = 0; k < sys.size(); ++k) acc += sys.mass(k) * q[k];
  return acc / sys.total_mass();
}

CVec unit_translation(std::size_t n) { return CVec::Constant(n, cplx{1.0, 0.0}); }

CVec diagonal_translation(std::size_t n) { return CVec::Constant(n, cplx{1.0, 1.0}); }

ConservedQuantities conserved_quantities(const Configuration& q, const CVec& qdot,
                                         const PotentialLaw& law) {
  const auto& sys = q.system();
  check_dimension(sys, qdot, "qdot");
  ConservedQuantities out;
  out.energy = 0.5 * mass_dot(sys, qdot, qdot) - potential_value(q, law);
  out.linear_momentum = hermitian_product(sys, qdot, unit_translation(sys.size()));
  out.angular_momentum = mass_dot(sys, qdot, cplx{0.0, 1.0} * q.positions());
  return out;
}

std::vector<CVec> orthonormalize(const MassSystem& sys, std::span<const CVec> vectors) {
  std::vector<CVec> basis;
  basis.reserve(vectors.size());
  for (const CVec& v : vectors) {
    check_dimension(sys, v, "vector");
    const double scale = mass_norm(sys, v);
    if (!(scale > 0.0)) fail(ErrorCode::degenerate_input, "zero vector in orthonormalization");
    CVec w = v;
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass)
      for (const CVec& b : basis) w -= mass_dot(sys, w, b) * b;
    const double n = mass_norm(sys, w);
    if (!(n > 1e-10 * scale))
      fail(ErrorCode::degenerate_input, "vectors are linearly dependent over R");
    basis.push_back(w / n);
  }
  return basis;
}

std::vector<CVec> unitary_completion(const MassSystem& sys, const CVec& v) {
  check_dimension(sys, v, "direction");
  const std::size_t n = sys.size();
  const double nv = mass_norm(sys, v);
  if (!(nv > 0.0)) fail(ErrorCode::degenerate_input, "zero direction");
  std::vector<CVec> basis{v / nv};
  // Greedy: complete with the mass-normalized coordinate axis that keeps the
  // largest component orthogonal to the current span.
  while (basis.size() < n) {
    CVec best;
    double best_norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      CVec w = CVec::Zero(n);
      w[k] = 1.0 / std::sqrt(sys.mass(k));
      for (int pass = 0; pass < 2; ++pass)
        for (const CVec& b : basis) w -= hermitian_product(sys, w, b) * b;
      const double nw = mass_norm(sys, w);
      if (nw > best_norm) {
        best_norm = nw;
        best = std::move(w);
      }
    }
    basis.push_back(best / best_norm);
  }
  return basis;
}

}  // namespace jmcurv
