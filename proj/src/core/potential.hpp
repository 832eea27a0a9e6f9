#pragma once

#include <span>
#include <vector>

#include "mass_geometry.hpp"

namespace jmcurv {

/// U = (1/alpha) sum_{i<j} m_i m_j / r_ij^alpha.
double potential_value(const Configuration& q, const PotentialLaw& law);

/// Gradient of U for the mass metric: (grad U)_k = (1/m_k) dU/dq_k, so that
/// qddot = grad U are Newton's equations.
CVec mass_gradient(const Configuration& q, const PotentialLaw& law);

/// Mass-metric Hessian action v -> (1/m_k) sum_l D^2U_{kl} v_l.
CVec hessian_apply(const Configuration& q, const PotentialLaw& law, const CVec& v);

/// <Hess v, w> = D^2U(v, w).
double hessian_form(const Configuration& q, const PotentialLaw& law, const CVec& v,
                    const CVec& w);

/// Wirtinger derivatives dU/dz_j = (1/2) (d_x - i d_y) U along a
/// Hermitian-orthonormal basis; equals (1/2) conj(<grad U, v_j>_C).
std::vector<cplx> wirtinger_derivatives(const Configuration& q, const PotentialLaw& law,
                                        std::span<const CVec> basis);

/// Raw kernels on unchecked data, used by the integrators.
namespace kernel {

double value(std::span<const double> masses, const CVec& q, double alpha);
void gradient(std::span<const double> masses, const CVec& q, double alpha, CVec& out);
void hessian_apply(std::span<const double> masses, const CVec& q, double alpha, const CVec& v,
                   CVec& out);
/// Dense 2N x 2N matrix of the mass-metric Hessian in interleaved real coordinates.
void hessian_matrix(std::span<const double> masses, const CVec& q, double alpha, RMat& out);

}  // namespace kernel

}  // namespace jmcurv
