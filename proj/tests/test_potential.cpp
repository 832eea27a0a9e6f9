#include <doctest.h>

#include <cmath>
#include <random>

#include "convert.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "potential.hpp"

using namespace jmcurv;
using testing_util::random_configuration;
using testing_util::random_cvec;
using testing_util::to_vec;

namespace {
const double kAlphas[] = {0.5, 1.0, 2.0, 3.0};
}

TEST_CASE("potential value against the reference sum") {
  std::mt19937_64 rng(21);
  for (double a : kAlphas) {
    auto m = testing_util::random_masses(rng, 4);
    auto c = random_configuration(rng, m);
    PotentialLaw law{a, 0.0};
    CHECK(potential_value(c, law) ==
          doctest::Approx(oracle::potential(m, to_vec(c.positions()), a)).epsilon(1e-13));
  }
  // Unit-side triangle: three unit pairs.
  CHECK(potential_value(fixtures::lagrange(), {3.0, 0.0}) == doctest::Approx(1.0));
  CHECK(potential_value(fixtures::pair(), {1.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("mass gradient against finite differences") {
  std::mt19937_64 rng(22);
  for (double a : kAlphas) {
    auto m = testing_util::random_masses(rng, 4);
    auto c = random_configuration(rng, m);
    PotentialLaw law{a, 0.0};
    auto f = [&](const oracle::Vec& x) { return oracle::potential(m, x, a); };
    const auto fd = oracle::fd_gradient(f, to_vec(c.positions()), 1e-3);
    const auto g = to_vec(mass_gradient(c, law));
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(g[i] * m[i / 2] == doctest::Approx(fd[i]).epsilon(1e-8));
  }
}

TEST_CASE("euler identity and hessian homogeneity") {
  std::mt19937_64 rng(23);
  for (double a : kAlphas) {
    auto m = testing_util::random_masses(rng, 5);
    auto c = random_configuration(rng, m);
    PotentialLaw law{a, 0.0};
    const CVec& q = c.positions();
    CHECK(mass_dot(c.system(), mass_gradient(c, law), q) ==
          doctest::Approx(-a * potential_value(c, law)).epsilon(1e-12));
    // U is homogeneous of degree -alpha, so grad U is of degree -alpha-1.
    const CVec hq = hessian_apply(c, law, q);
    const CVec expected = -(a + 1.0) * mass_gradient(c, law);
    CHECK((hq - expected).norm() < 1e-11 * expected.norm());
  }
}

TEST_CASE("hessian against finite differences") {
  std::mt19937_64 rng(24);
  for (double a : kAlphas) {
    auto m = testing_util::random_masses(rng, 3);
    auto c = random_configuration(rng, m);
    PotentialLaw law{a, 0.0};
    auto f = [&](const oracle::Vec& x) { return oracle::potential(m, x, a); };
    const auto fd = oracle::fd_hessian(f, to_vec(c.positions()), 1e-3);
    for (int t = 0; t < 5; ++t) {
      const CVec v = random_cvec(rng, 3), w = random_cvec(rng, 3);
      const auto vv = to_vec(v), wv = to_vec(w);
      double ref = 0.0;
      for (std::size_t i = 0; i < vv.size(); ++i)
        for (std::size_t j = 0; j < wv.size(); ++j) ref += fd[i][j] * vv[i] * wv[j];
      CHECK(hessian_form(c, law, v, w) == doctest::Approx(ref).epsilon(1e-7));
    }
    RMat dense;
    kernel::hessian_matrix(c.system().masses(), c.positions(), a, dense);
    const CVec v = random_cvec(rng, 3);
    CVec hv = hessian_apply(c, law, v);
    const RVec dv = dense * real_view(v);
    CHECK((dv - real_view(hv)).norm() < 1e-12 * dv.norm());
  }
}

TEST_CASE("wirtinger derivatives") {
  std::mt19937_64 rng(25);
  auto m = testing_util::random_masses(rng, 4);
  auto c = random_configuration(rng, m);
  PotentialLaw law{1.5, 0.0};
  auto basis = unitary_completion(c.system(), random_cvec(rng, 4));
  auto d = wirtinger_derivatives(c, law, basis);
  const CVec g = mass_gradient(c, law);
  const cplx I1{0, 1};
  double sum = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    // (1/2)(d_x - i d_y) U along v_j: d_x U = <grad U, v_j>, d_y U = <grad U, i v_j>.
    const double dx = mass_dot(c.system(), g, basis[j]);
    const double dy = mass_dot(c.system(), g, I1 * basis[j]);
    CHECK(std::abs(d[j] - 0.5 * cplx(dx, -dy)) < 1e-13 * mass_norm(c.system(), g));
    sum += std::norm(d[j]);
  }
  // Parseval: sum |d_j U|^2 = |grad U|^2 / 4.
  CHECK(sum == doctest::Approx(0.25 * std::pow(mass_norm(c.system(), g), 2)).epsilon(1e-12));
  std::vector<CVec> bad{basis[0], 2.0 * basis[1]};
  CHECK_THROWS_AS(wirtinger_derivatives(c, law, bad), Error);
}

TEST_CASE("exponent validation") {
  CHECK_THROWS_AS(potential_value(fixtures::pair(), {0.0, 0.0}), Error);
  CHECK_THROWS_AS(potential_value(fixtures::pair(), {-1.0, 0.0}), Error);
}
