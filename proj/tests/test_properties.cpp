// Randomized checks of structural identities across modules.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "central_config.hpp"
#include "convert.hpp"
#include "curvature.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "saari.hpp"
#include "stability.hpp"

using namespace jmcurv;
using testing_util::random_configuration;
using testing_util::random_cvec;
using testing_util::random_masses;
using testing_util::rel_err;
using testing_util::to_vec;

namespace {

const cplx I1{0.0, 1.0};

std::vector<double> distances(const Configuration& c) {
  std::vector<double> d;
  const CVec& q = c.positions();
  for (Eigen::Index i = 0; i < q.size(); ++i)
    for (Eigen::Index j = i + 1; j < q.size(); ++j) d.push_back(std::abs(q[i] - q[j]));
  std::sort(d.begin(), d.end());
  return d;
}

Configuration fixture(int k) {
  switch (k) {
    case 0: return fixtures::pair();
    case 1: return fixtures::lagrange();
    case 2: return fixtures::euler(1.0);
    default: return fixtures::regular_polygon(5);
  }
}

}  // namespace

TEST_CASE("hermitian product symmetries") {
  std::mt19937_64 rng(81);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + t % 4;
    MassSystem sys(random_masses(rng, n));
    const CVec u = random_cvec(rng, n), v = random_cvec(rng, n);
    const cplx a = hermitian_product(sys, u, v), b = hermitian_product(sys, v, u);
    CHECK(std::abs(a - std::conj(b)) <= 1e-14 * std::abs(a));
    const double uu = hermitian_product(sys, u, u).real();
    CHECK(std::abs(hermitian_product(sys, u, u).imag()) <= 1e-14 * uu);
    CHECK(std::abs(mass_dot(sys, I1 * u, u)) <= 1e-14 * uu);
  }
}

TEST_CASE("orthonormalize gives an identity gram matrix") {
  std::mt19937_64 rng(82);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 3 + t % 3;
    MassSystem sys(random_masses(rng, n));
    std::vector<CVec> in;
    for (std::size_t k = 0; k < n; ++k) in.push_back(random_cvec(rng, n));
    auto on = orthonormalize(sys, in);
    for (std::size_t a = 0; a < on.size(); ++a)
      for (std::size_t b = 0; b < on.size(); ++b)
        CHECK(std::abs(mass_dot(sys, on[a], on[b]) - (a == b ? 1.0 : 0.0)) < 1e-10);
  }
}

TEST_CASE("potential symmetries") {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> ud(0.0, 2.0 * M_PI), us(0.3, 3.0);
  for (int t = 0; t < 40; ++t) {
    const double a = 0.5 + 0.1 * t;
    auto c = random_configuration(rng, random_masses(rng, 3 + t % 3));
    PotentialLaw law{a, 0.0};
    const double u = potential_value(c, law);
    CHECK(rel_err(potential_value(c.rotated(ud(rng)), law), u) < 1e-12);
    const double s = us(rng);
    CHECK(rel_err(potential_value(c.scaled(s), law), std::pow(s, -a) * u) < 1e-12);
    const CVec g = mass_gradient(c, law), gs = mass_gradient(c.scaled(s), law);
    CHECK((gs - std::pow(s, -a - 1.0) * g).norm() < 1e-12 * gs.norm());
  }
}

TEST_CASE("derivatives match finite differences on all fixtures") {
  for (int k = 0; k < 4; ++k)
    for (double a : {0.5, 1.0, 2.0, 3.0}) {
      auto c = fixture(k);
      std::vector<double> m(c.system().masses().begin(), c.system().masses().end());
      PotentialLaw law{a, 0.0};
      auto f = [&](const oracle::Vec& x) { return oracle::potential(m, x, a); };
      const auto x = to_vec(c.positions());
      const auto fd = oracle::fd_gradient(f, x, 1e-3);
      const auto g = to_vec(mass_gradient(c, law));
      double gmax = 0.0, gerr = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        gmax = std::max(gmax, std::abs(fd[i]));
        gerr = std::max(gerr, std::abs(g[i] * m[i / 2] - fd[i]));
      }
      CHECK(gerr < 1e-6 * gmax);
      const auto fh = oracle::fd_hessian(f, x, 1e-3);
      RMat h;
      kernel::hessian_matrix(c.system().masses(), c.positions(), a, h);
      double hmax = 0.0, herr = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) {
          hmax = std::max(hmax, std::abs(fh[i][j]));
          herr = std::max(herr, std::abs(h(i, j) * m[i / 2] - fh[i][j]));
        }
      CHECK(herr < 1e-6 * hmax);
    }
}

TEST_CASE("newton's equations from the pairwise force law") {
  std::mt19937_64 rng(84);
  for (double a : {1.0, 2.5}) {
    auto m = random_masses(rng, 4);
    auto c = random_configuration(rng, m);
    const CVec g = mass_gradient(c, {a, 0.0});
    const CVec& q = c.positions();
    for (int k = 0; k < 4; ++k) {
      cplx f = 0.0;
      for (int j = 0; j < 4; ++j)
        if (j != k) f += m[k] * m[j] * (q[j] - q[k]) / std::pow(std::abs(q[j] - q[k]), a + 2.0);
      CHECK(std::abs(m[k] * g[k] - f) < 1e-12 * std::abs(f));
    }
  }
}

TEST_CASE("central configuration solver invariants") {
  std::mt19937_64 rng(85);
  std::uniform_real_distribution<double> ud(0.0, 2.0 * M_PI);
  for (int t = 0; t < 6; ++t) {
    const double a = 1.0 + 0.5 * t;
    PotentialLaw law{a, 0.0};
    auto lag = fixtures::lagrange();
    auto seed = Configuration(make_system(random_masses(rng, 3)),
                              lag.positions() + 0.05 * random_cvec(rng, 3));
    auto r = solve_central(seed, law, 1e-11);
    CHECK(r.residual <= 1e-11);
    const double lam = -a * potential_value(r.configuration, law) / moment_of_inertia(r.configuration);
    CHECK(rel_err(r.lambda, lam) < 1e-10);
    auto again = solve_central(r.configuration.rotated(ud(rng)), law, 1e-11);
    const auto d0 = distances(r.configuration), d1 = distances(again.configuration);
    for (std::size_t i = 0; i < d0.size(); ++i) CHECK(std::abs(d0[i] - d1[i]) < 1e-8);
  }
}

TEST_CASE("holomorphic curvature identity") {
  std::mt19937_64 rng(86);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 3 + t % 3;
    auto c = random_configuration(rng, random_masses(rng, n));
    PotentialLaw law{0.5 + 0.1 * t, 0.1 * (t % 5)};
    const CVec v = random_cvec(rng, n);
    const auto basis = unitary_completion(c.system(), v);
    const auto d = wirtinger_derivatives(c, law, basis);
    double extra = 0.0;
    for (std::size_t j = 1; j < d.size(); ++j) extra += std::norm(d[j]);
    const double rho = conformal_factor(c, law);
    const double lhs = holomorphic_sectional(c, v, law) -
                       sectional_curvature(c, {v, I1 * v, false}, law);
    CHECK(std::abs(lhs - extra / std::pow(rho, 3)) < 1e-8);
  }
}

TEST_CASE("curvature is rotation invariant") {
  std::mt19937_64 rng(87);
  std::uniform_real_distribution<double> ud(0.0, 2.0 * M_PI);
  for (int t = 0; t < 20; ++t) {
    auto c = random_configuration(rng, random_masses(rng, 4));
    PotentialLaw law{1.0 + 0.1 * t, 0.0};
    const CVec u = random_cvec(rng, 4), v = random_cvec(rng, 4);
    const double th = ud(rng);
    const cplx e = std::exp(I1 * th);
    const double k0 = sectional_curvature(c, {u, v, false}, law);
    const double k1 = sectional_curvature(c.rotated(th), {e * u, e * v, false}, law);
    CHECK(std::abs(k1 - k0) < 1e-10 * std::max(1.0, std::abs(k0)));
  }
}

TEST_CASE("centrality biconditional on a randomized suite") {
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> mag(-3.0, -1.0);
  int agree = 0, total = 0;
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 3 + t % 3;
    const double a = std::array<double, 4>{0.5, 1.0, 2.0, 3.0}[t % 4];
    PotentialLaw law{a, 0.0};
    std::optional<Configuration> found;
    while (!found) {
      try {
        found = solve_central(random_configuration(rng, random_masses(rng, n), 0.4), law, 1e-12).configuration;
      } catch (const Error&) {
      }
    }
    const Configuration cc = *found;
    Configuration q = cc;
    if (t % 2 == 1) q = cc.with_positions(cc.positions() + std::pow(10.0, mag(rng)) * random_cvec(rng, n)).recentered();
    const double eps = 1e-6 * mass_norm(q.system(), mass_gradient(q, law));
    const double rho = conformal_factor(q, law);
    const bool by_gradient = central_residual(q, law) <= eps;
    const bool by_curvature =
        central_curvature_check(q, law, curvature_tolerance_for(eps, rho)).is_central;
    agree += by_gradient == by_curvature;
    ++total;
    CHECK(by_gradient == (t % 2 == 0));
  }
  CHECK(agree == total);
}

TEST_CASE("conservation and reversibility") {
  std::mt19937_64 rng(89);
  for (int t = 0; t < 5; ++t) {
    auto c = Configuration(make_system(random_masses(rng, 3)), fixtures::lagrange().positions()).recentered();
    PotentialLaw law{1.0 + 0.5 * t, 0.0};
    const double omega = std::sqrt(law.alpha * potential_value(c, law) / moment_of_inertia(c));
    CVec v = I1 * omega * c.positions() + 0.05 * random_cvec(rng, 3);
    v -= CVec::Constant(3, center_of_mass(c.system(), v));
    const double tol = 1e-10;
    auto traj = integrate(c.system_ptr(), {c.positions(), v, 0.0}, law, 1.0, tol);
    REQUIRE_FALSE(traj.stats.truncated);
    auto d = drift_summary(traj);
    CHECK(d.energy <= 10 * tol);
    CHECK(d.linear_momentum <= 10 * tol);
    CHECK(d.angular_momentum <= 10 * tol);
    auto back = integrate(c.system_ptr(), traj.samples.back(), law, 0.0, tol);
    CHECK((back.samples.back().q - c.positions()).norm() < 100 * tol * c.positions().norm());
  }
}

TEST_CASE("bounded strong-force orbits have zero energy and constant inertia") {
  for (int k = 1; k < 4; ++k) {
    auto c = fixture(k);
    PotentialLaw law{2.0, 0.0};
    auto traj = integrate(c.system_ptr(), relative_equilibrium_state(c, law), law, 3.0, 1e-12);
    CHECK(std::abs(traj.law.energy) < 1e-14);
    auto d = diagnostics(traj, false);
    for (double i : d.inertia) CHECK(std::abs(i - d.inertia.front()) < 1e-9);
  }
}

TEST_CASE("c / omega is universal above alpha = 2") {
  std::mt19937_64 rng(90);
  for (int t = 0; t < 6; ++t) {
    const double a = 2.2 + 0.4 * t;
    auto seed = random_configuration(rng, random_masses(rng, 3 + t % 2), 0.4);
    auto cc = solve_central(seed, {a, 0.0}, 1e-12).configuration.scaled(0.5 + 0.3 * t);
    auto r = analytic_return_eigs(cc, {a, 0.0});
    CHECK(std::abs(r.c_over_omega - std::sqrt(a - 2.0)) < 1e-10);
    CHECK(r.verdict == Verdict::spectrally_unstable);
  }
}

TEST_CASE("monodromy is symplectic") {
  for (double a : {1.0, 2.0, 3.0}) {
    auto r = numerical_monodromy(fixtures::regular_polygon(4), {a, 0.0}, 1e-12);
    CHECK(r.monodromy->symplectic_residual < 1e-6);
  }
}

TEST_CASE("saari formulas agree and the transverse derivative vanishes") {
  std::mt19937_64 rng(91);
  for (int t = 0; t < 4; ++t) {
    auto c = Configuration(make_system(random_masses(rng, 3)), fixtures::lagrange().positions()).recentered();
    PotentialLaw law{1.0 + 0.5 * t, 0.0};
    const double omega = std::sqrt(law.alpha * potential_value(c, law) / moment_of_inertia(c));
    CVec v = I1 * omega * c.positions() + 0.1 * random_cvec(rng, 3);
    v -= CVec::Constant(3, center_of_mass(c.system(), v));
    IntegrateOptions opt;
    opt.sample_dt = 0.05;
    auto traj = integrate(c.system_ptr(), {c.positions(), v, 0.0}, law, 1.0, 1e-12, opt);
    auto s = curvature_along(traj);
    double kmax = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      kmax = std::max(kmax, std::abs(s.curvature_general[i]));
      dev = std::max(dev, std::abs(s.curvature[i] - s.curvature_general[i]));
      const Configuration q(traj.system, traj.samples[i].q);
      CHECK(std::abs(s.d2U_transverse[i]) < 1e-12 * mass_norm(q.system(), mass_gradient(q, law)));
    }
    CHECK(dev < 1e-6 * kmax);
  }
}

TEST_CASE("the first integral is stationary where it holds") {
  // d/dt [C (dU/dt)^2 - U^3] on U = 4C / (t + A)^2 by central differences.
  const double C = 1.1, A = 0.4, h = 1e-4;
  auto g = [&](double t) {
    const double u = 4.0 * C / std::pow(t + A, 2), du = -8.0 * C / std::pow(t + A, 3);
    return C * du * du - u * u * u;
  };
  for (double t : {0.0, 0.5, 1.0, 2.0}) CHECK(std::abs((g(t + h) - g(t - h)) / (2 * h)) < 1e-6);
}
