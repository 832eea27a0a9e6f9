#include "fixtures.hpp"

#include <cmath>

namespace jmcurv::fixtures {

Configuration pair() {
  CVec q(2);
  q << cplx{0.5, 0.0}, cplx{-0.5, 0.0};
  return {make_system({1.0, 1.0}), q};
}

Configuration lagrange() {
  const double r = 1.0 / std::sqrt(3.0);
  CVec q(3);
  for (int k = 0; k < 3; ++k) q[k] = std::polar(r, 2.0 * M_PI * k / 3.0);
  return {make_system({1.0, 1.0, 1.0}), q};
}

Configuration euler(double d) {
  CVec q(3);
  q << cplx{-d, 0.0}, cplx{0.0, 0.0}, cplx{d, 0.0};
  return {make_system({1.0, 1.0, 1.0}), q};
}

Configuration regular_polygon(std::size_t n) {
  CVec q(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) q[k] = std::polar(1.0, 2.0 * M_PI * k / n);
  return {make_system(std::vector<double>(n, 1.0)), q};
}

}  // namespace jmcurv::fixtures
