#pragma once

#include "mass_geometry.hpp"

namespace jmcurv::fixtures {

/// Two unit masses at +-1/2.
Configuration pair();
/// Three unit masses on a centered unit-side equilateral triangle (I = 1, U = 3/alpha).
Configuration lagrange();
/// Three unit masses at (-d, 0, d).
Configuration euler(double d = 1.0);
/// N unit masses on the unit circle (a central configuration for every alpha).
Configuration regular_polygon(std::size_t n);

}  // namespace jmcurv::fixtures
