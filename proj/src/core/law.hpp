#pragma once

namespace jmcurv {

/// Exponent of the 1/r^alpha potential and the energy level h fixing the
/// Jacobi-Maupertuis metric (h + U) ds^2.
struct PotentialLaw {
  double alpha = 1.0;
  double energy = 0.0;
};

void validate(const PotentialLaw& law);

}  // namespace jmcurv
