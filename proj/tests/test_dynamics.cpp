#include <doctest.h>

#include <cmath>
#include <random>

#include "central_config.hpp"
#include "convert.hpp"
#include "dynamics.hpp"
#include "fixtures.hpp"

using namespace jmcurv;

namespace {
const cplx I1{0.0, 1.0};
}

TEST_CASE("relative equilibrium constants") {
  auto lag = fixtures::lagrange();
  auto re = relative_equilibrium(lag, {3.0, 0.0});
  // U = 1, I = 1 at alpha = 3: Omega^2 = 3, h = (3/2 - 1) U.
  CHECK(re.omega == doctest::Approx(std::sqrt(3.0)));
  CHECK(re.energy == doctest::Approx(0.5));
  CHECK(re.period == doctest::Approx(2.0 * M_PI / std::sqrt(3.0)));
  // alpha = 2 gives zero energy.
  CHECK(std::abs(relative_equilibrium(lag, {2.0, 0.0}).energy) < 1e-15);
  std::mt19937_64 rng(51);
  auto c = testing_util::random_configuration(rng, {1.0, 1.0, 1.0});
  try {
    relative_equilibrium(c, {1.0, 0.0});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_central);
  }
}

TEST_CASE("two-body circular orbit against the exact rotation") {
  auto pair = fixtures::pair();
  PotentialLaw law{1.0, 0.0};
  auto init = relative_equilibrium_state(pair, law);
  auto re = relative_equilibrium(pair, law);
  IntegrateOptions opt;
  opt.sample_dt = re.period / 8.0;
  auto traj = integrate(pair.system_ptr(), init, law, 10.0 * re.period, 1e-12, opt);
  CHECK_FALSE(traj.stats.truncated);
  CHECK(traj.samples.size() == 81);
  double err = 0.0;
  for (const auto& s : traj.samples) {
    const CVec exact = std::exp(I1 * re.omega * s.t) * pair.positions();
    err = std::max(err, (s.q - exact).norm());
  }
  CHECK(err < 1e-8);
}

TEST_CASE("time reversibility and dense output") {
  std::mt19937_64 rng(52);
  auto c = testing_util::random_configuration(rng, {1.0, 0.5, 2.0}, 0.5);
  CVec v = 0.3 * testing_util::random_cvec(rng, 3);
  v -= CVec::Constant(3, center_of_mass(c.system(), v));
  PotentialLaw law{1.0, 0.0};
  auto fwd = integrate(c.system_ptr(), {c.positions(), v, 0.0}, law, 1.5, 1e-12);
  const auto& end = fwd.samples.back();
  CHECK(end.t == doctest::Approx(1.5));
  auto back = integrate(c.system_ptr(), end, law, 0.0, 1e-12);
  CHECK((back.samples.back().q - c.positions()).norm() < 1e-9);
  CHECK((back.samples.back().qdot - v).norm() < 1e-9);

  IntegrateOptions opt;
  opt.sample_dt = 0.1;
  auto grid = integrate(c.system_ptr(), {c.positions(), v, 0.0}, law, 1.5, 1e-12, opt);
  REQUIRE(grid.samples.size() == 16);
  auto to07 = integrate(c.system_ptr(), {c.positions(), v, 0.0}, law, 0.7, 1e-12);
  CHECK(grid.samples[7].t == doctest::Approx(0.7));
  CHECK((grid.samples[7].q - to07.samples.back().q).norm() < 1e-8);
}

TEST_CASE("conservation on a generic three-body run") {
  std::mt19937_64 rng(53);
  auto c = testing_util::random_configuration(rng, {1.0, 1.3, 0.7}, 0.5);
  for (double a : {1.0, 2.0, 3.0}) {
    PotentialLaw law{a, 0.0};
    // Spin near the rotation rate of a relative equilibrium, plus a kick.
    const double omega = std::sqrt(a * potential_value(c, law) / moment_of_inertia(c));
    CVec v = I1 * omega * c.positions() + 0.1 * testing_util::random_cvec(rng, 3);
    v -= CVec::Constant(3, center_of_mass(c.system(), v));
    auto traj = integrate(c.system_ptr(), {c.positions(), v, 0.0}, law, 0.5, 1e-12);
    REQUIRE_FALSE(traj.stats.truncated);
    CHECK(min_pairwise_distance(traj.samples.back().q) > 0.05);
    auto d = drift_summary(traj);
    CHECK(d.energy < 1e-9);
    CHECK(d.linear_momentum < 1e-11);
    CHECK(d.angular_momentum < 1e-9);
    CHECK(d.lj_residual < 1e-9);
  }
}

TEST_CASE("homothetic collapse stops at the guard") {
  // Relative distance r'' = -2 / r^2 from rest at r = 1 collapses at pi/4.
  auto pair = fixtures::pair();
  PotentialLaw law{1.0, 0.0};
  auto traj = integrate(pair.system_ptr(), {pair.positions(), CVec::Zero(2), 0.0}, law, 2.0, 1e-12);
  CHECK(traj.stats.truncated);
  CHECK(traj.samples.back().t == doctest::Approx(M_PI / 4.0).epsilon(1e-6));
  CHECK(traj.stats.accepted > 0);
}

TEST_CASE("homographic reduction against the full integration") {
  auto pair = fixtures::pair();
  PotentialLaw law{1.0, 0.0};
  IntegrateOptions opt;
  opt.sample_dt = 0.25;
  auto h = homographic(pair, law, {1.0, 0.0}, {0.0, 1.6}, 6.0, 1e-12, opt);
  CHECK_FALSE(h.collapsed);
  const auto& s0 = h.trajectory.samples.front();
  auto full = integrate(pair.system_ptr(), s0, law, 6.0, 1e-12, opt);
  REQUIRE(full.samples.size() == h.trajectory.samples.size());
  double err = 0.0;
  for (std::size_t i = 0; i < full.samples.size(); ++i)
    err = std::max(err, (full.samples[i].q - h.trajectory.samples[i].q).norm());
  CHECK(err < 1e-7);
  REQUIRE(h.z.size() == h.trajectory.samples.size());
  CHECK(std::abs(h.z[4]) > 0.0);
}

TEST_CASE("diagnostics and the dziobek constant") {
  auto lag = fixtures::lagrange();
  for (double a : {1.0, 3.0}) {
    PotentialLaw law{a, 0.0};
    double dz[2];
    int i = 0;
    for (double s : {1.0, 2.0}) {
      auto q = lag.scaled(s);
      auto traj = integrate(q.system_ptr(), relative_equilibrium_state(q, law), law, 0.1, 1e-12);
      auto d = diagnostics(traj);
      REQUIRE(d.dziobek.has_value());
      dz[i++] = d.dziobek->front();
      // mu = I^{alpha/2} U is scale invariant as well.
    }
    // h |C|^{2 alpha / (2 - alpha)} does not depend on the scale of the configuration.
    CHECK(dz[0] == doctest::Approx(dz[1]).epsilon(1e-12));
  }
  PotentialLaw law2{2.0, 0.0};
  auto traj = integrate(lag.system_ptr(), relative_equilibrium_state(lag, law2), law2, 0.1, 1e-12);
  CHECK_FALSE(diagnostics(traj).dziobek.has_value());
  try {
    diagnostics(traj, true);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported_exponent);
  }
  auto d = diagnostics(traj);
  // Saari's mu is constant along a relative equilibrium.
  for (double mu : d.mu) CHECK(mu == doctest::Approx(d.mu.front()).epsilon(1e-10));
}
