// Exercises the exported C interface only.
#include <doctest.h>

#include <jmcurv/jmcurv.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace {

jmc_config* lagrange() {
  jmc_config* c = nullptr;
  REQUIRE(jmc_config_fixture("lagrange", 0.0, &c) == JMC_OK);
  return c;
}

}  // namespace

TEST_CASE("status names and classification") {
  CHECK(std::string(jmc_status_name(JMC_OK)) == "ok");
  CHECK(std::string(jmc_status_name(JMC_ERR_INVALID_MASSES)) == "invalid_masses");
  CHECK(std::string(jmc_status_name(JMC_ERR_BUFFER_TOO_SMALL)) == "buffer_too_small");
  CHECK(jmc_status_is_validation(JMC_ERR_INVALID_MASSES));
  CHECK(jmc_status_is_validation(JMC_ERR_PARSE));
  CHECK_FALSE(jmc_status_is_validation(JMC_ERR_COLLISION));
  CHECK_FALSE(jmc_status_is_validation(JMC_ERR_NON_CONVERGENCE));
  CHECK(std::string(jmc_version()).size() > 0);
}

TEST_CASE("configuration handles") {
  const double m[3] = {1.0, 2.0, 3.0};
  const double xy[6] = {0.0, 0.0, 1.0, 0.0, 0.0, 1.0};
  jmc_config* c = nullptr;
  REQUIRE(jmc_config_create(m, 3, xy, &c) == JMC_OK);
  CHECK(jmc_config_size(c) == 3);
  double back[6];
  REQUIRE(jmc_config_positions(c, back) == JMC_OK);
  for (int i = 0; i < 6; ++i) CHECK(back[i] == xy[i]);
  jmc_config_destroy(c);
  jmc_config_destroy(nullptr);

  const double bad[3] = {1.0, -1.0, 1.0};
  jmc_config* d = nullptr;
  CHECK(jmc_config_create(bad, 3, xy, &d) == JMC_ERR_INVALID_MASSES);
  CHECK(d == nullptr);
  CHECK(std::string(jmc_last_error_message()).size() > 0);

  const double coincident[6] = {0.0, 0.0, 0.0, 0.0, 1.0, 0.0};
  CHECK(jmc_config_create(m, 3, coincident, &d) == JMC_ERR_COLLISION);
  CHECK(jmc_config_create(m, 3, xy, nullptr) == JMC_ERR_INVALID_ARGUMENT);
  CHECK(jmc_config_fixture("heptagram", 0.0, &d) == JMC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("problem parsing") {
  jmc_problem* p = nullptr;
  REQUIRE(jmc_problem_parse(R"({"masses":[1,1],"positions":[[0.5,0],[-0.5,0]],"alpha":2})", 0, &p) ==
          JMC_OK);
  double a = 0.0, h = 0.0;
  CHECK(jmc_problem_alpha(p, &a));
  CHECK(a == 2.0);
  CHECK_FALSE(jmc_problem_energy(p, &h));
  jmc_config* c = nullptr;
  REQUIRE(jmc_problem_config(p, &c) == JMC_OK);
  CHECK(jmc_config_size(c) == 2);
  jmc_config_destroy(c);
  jmc_problem_destroy(p);
  CHECK(jmc_problem_parse("{", 0, &p) == JMC_ERR_PARSE);
  CHECK(jmc_problem_parse(R"({"masses":[],"positions":[]})", 0, &p) == JMC_ERR_INVALID_MASSES);
  CHECK(jmc_problem_load("/nonexistent/x.json", 0, &p) == JMC_ERR_IO);
}

TEST_CASE("central configuration round trip through the C interface") {
  jmc_config* c = lagrange();
  jmc_law law{1.0, -1.5};
  double res = 1.0, lam = 0.0;
  REQUIRE(jmc_central_residual(c, law, &res, &lam) == JMC_OK);
  CHECK(res < 1e-12);
  CHECK(lam == doctest::Approx(-3.0).epsilon(1e-12));
  int central = 0;
  double cres = 0.0;
  REQUIRE(jmc_central_curvature_check(c, law, 1e-10, &central, &cres) == JMC_OK);
  CHECK(central == 1);

  const double m[3] = {1.0, 1.0, 1.0};
  const double seed[6] = {1.0, 0.0, -0.45, 0.9, -0.55, -0.85};
  jmc_config* s = nullptr;
  REQUIRE(jmc_config_create(m, 3, seed, &s) == JMC_OK);
  jmc_config* out = nullptr;
  int it = 0;
  REQUIRE(jmc_solve_central(s, law, 1e-12, 0, &out, &lam, &res, &it) == JMC_OK);
  CHECK(res <= 1e-12);
  double pot = 0.0, inertia = 0.0;
  jmc_potential(out, law, &pot);
  jmc_moment_of_inertia(out, &inertia);
  CHECK(lam == doctest::Approx(-pot / inertia).epsilon(1e-10));
  jmc_config_destroy(out);
  jmc_config_destroy(s);
  jmc_config_destroy(c);
}

TEST_CASE("curvature entry points") {
  jmc_config* c = lagrange();
  jmc_law law{1.0, -1.0};
  double q[6], iq[6];
  jmc_config_positions(c, q);
  for (int k = 0; k < 3; ++k) {
    iq[2 * k] = -q[2 * k + 1];
    iq[2 * k + 1] = q[2 * k];
  }
  double k = 0.0, cf = 0.0;
  REQUIRE(jmc_sectional_curvature(c, law, q, iq, &k) == JMC_OK);
  REQUIRE(jmc_closed_form_hqq(c, law, &cf) == JMC_OK);
  CHECK(std::abs(k - cf) < 1e-12 * std::max(1.0, std::abs(cf)));
  CHECK(jmc_sectional_curvature(c, law, q, q, &k) == JMC_ERR_DEGENERATE_INPUT);
  CHECK(jmc_sectional_curvature(c, jmc_law{1.0, -10.0}, q, iq, &k) == JMC_ERR_OUTSIDE_HILL_REGION);

  jmc_scan* scan = nullptr;
  REQUIRE(jmc_plane_scan(c, law, 5, 7, &scan) == JMC_OK);
  CHECK(jmc_scan_size(scan) > 0);
  CHECK(jmc_scan_base_is_central(scan));
  CHECK(jmc_scan_max_identity_residual(scan) < 1e-8);
  int fam = -1;
  double coeff[4], kv = 0.0;
  REQUIRE(jmc_scan_entry(scan, 0, &fam, coeff, &kv) == JMC_OK);
  CHECK(std::string(jmc_plane_family_name(fam)).size() > 0);
  CHECK(jmc_scan_entry(scan, jmc_scan_size(scan), &fam, coeff, &kv) == JMC_ERR_INVALID_ARGUMENT);
  jmc_scan_destroy(scan);
  jmc_config_destroy(c);
}

TEST_CASE("stability handles and buffer sizing") {
  jmc_config* c = lagrange();
  jmc_stability* st = nullptr;
  REQUIRE(jmc_stability_analytic(c, jmc_law{3.0, 0.0}, &st) == JMC_OK);
  jmc_stability_summary s{};
  REQUIRE(jmc_stability_get_summary(st, &s) == JMC_OK);
  CHECK(s.verdict == JMC_SPECTRALLY_UNSTABLE);
  CHECK(s.c_over_omega == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::string(jmc_verdict_name(s.verdict)) == "spectrally_unstable");
  std::size_t count = 0;
  double one[2];
  CHECK(jmc_stability_eigs(st, 0, one, 1, &count) == JMC_ERR_BUFFER_TOO_SMALL);
  std::vector<double> eig(2 * count);
  REQUIRE(jmc_stability_eigs(st, 0, eig.data(), count, &count) == JMC_OK);
  double largest = 0.0;
  for (std::size_t i = 0; i < count; ++i) largest = std::max(largest, std::hypot(eig[2 * i], eig[2 * i + 1]));
  CHECK(largest == doctest::Approx(std::exp(2.0 * M_PI)).epsilon(1e-10));
  REQUIRE(jmc_stability_eigs(st, 1, eig.data(), eig.size() / 2, &count) == JMC_OK);
  CHECK(count == 0);
  CHECK(jmc_stability_eigs(st, 7, eig.data(), 0, &count) == JMC_ERR_INVALID_ARGUMENT);
  jmc_stability_destroy(st);

  REQUIRE(jmc_stability_monodromy(c, jmc_law{3.0, 0.0}, 1e-12, &st) == JMC_OK);
  REQUIRE(jmc_stability_get_summary(st, &s) == JMC_OK);
  CHECK(s.has_monodromy);
  CHECK(s.symplectic_residual < 1e-6);
  std::size_t rows = 0;
  REQUIRE(jmc_stability_matrix(st, nullptr, 0, &rows) == JMC_OK);
  CHECK(rows == 12);
  std::vector<double> mat(rows * rows);
  CHECK(jmc_stability_matrix(st, mat.data(), mat.size() - 1, &rows) == JMC_ERR_BUFFER_TOO_SMALL);
  REQUIRE(jmc_stability_matrix(st, mat.data(), mat.size(), &rows) == JMC_OK);
  jmc_stability_destroy(st);

  double val = 0.0, der = 0.0;
  REQUIRE(jmc_jacobi_field(c, jmc_law{3.0, 0.0}, 1.0, 0.0, 1.0, &val, &der) == JMC_OK);
  CHECK(std::isfinite(val));
  jmc_config_destroy(c);
}

TEST_CASE("trajectories, diagnostics and saari curvature") {
  jmc_config* c = lagrange();
  double omega = 0.0, period = 0.0, energy = 0.0, v[6];
  REQUIRE(jmc_relative_equilibrium(c, 1.0, &omega, &period, &energy, v) == JMC_OK);
  CHECK(period == doctest::Approx(2.0 * M_PI / omega));
  jmc_trajectory* tr = nullptr;
  REQUIRE(jmc_integrate(c, v, 1.0, period, 1e-12, period / 20, &tr) == JMC_OK);
  jmc_trajectory_info info{};
  REQUIRE(jmc_trajectory_get_info(tr, &info) == JMC_OK);
  CHECK(info.bodies == 3);
  CHECK(info.samples == 21);
  CHECK_FALSE(info.truncated);
  jmc_drift d{};
  REQUIRE(jmc_drift_summary(tr, &d) == JMC_OK);
  CHECK(d.energy < 1e-11);

  jmc_diagnostics* dg = nullptr;
  REQUIRE(jmc_diagnostics_compute(tr, -1, &dg) == JMC_OK);
  jmc_diagnostics_row row{};
  REQUIRE(jmc_diagnostics_get_row(dg, jmc_diagnostics_size(dg) - 1, &row) == JMC_OK);
  CHECK(row.has_dziobek);
  jmc_diagnostics_destroy(dg);

  jmc_saari* sa = nullptr;
  REQUIRE(jmc_saari_curvature(tr, &sa) == JMC_OK);
  jmc_saari_row sr{};
  REQUIRE(jmc_saari_get_row(sa, 3, &sr) == JMC_OK);
  CHECK(std::abs(sr.curvature) < 1e-9);
  jmc_saari_destroy(sa);

  const std::string path = "capi_traj_roundtrip.csv";
  REQUIRE(jmc_trajectory_write_csv(tr, path.c_str()) == JMC_OK);
  jmc_trajectory* back = nullptr;
  REQUIRE(jmc_trajectory_read_csv(path.c_str(), &back) == JMC_OK);
  double t0 = 0.0, t1 = 0.0, q0[6], q1[6];
  jmc_trajectory_sample(tr, 5, &t0, q0, nullptr);
  jmc_trajectory_sample(back, 5, &t1, q1, nullptr);
  CHECK(t0 == t1);
  for (int i = 0; i < 6; ++i) CHECK(q0[i] == q1[i]);
  std::remove(path.c_str());
  jmc_trajectory_destroy(back);
  jmc_trajectory_destroy(tr);
  jmc_config_destroy(c);
}

TEST_CASE("first integral on a synthetic series") {
  const double C = 0.7, A = 0.5;
  std::vector<double> u, du;
  for (int i = 0; i < 50; ++i) {
    const double t = 0.02 * i;
    u.push_back(4.0 * C / std::pow(t + A, 2));
    du.push_back(-8.0 * C / std::pow(t + A, 3));
  }
  double ce = 0.0, r = 1.0;
  REQUIRE(jmc_first_integral_check_series(u.data(), du.data(), u.size(), 0.0, &ce, &r) == JMC_OK);
  CHECK(ce == doctest::Approx(C).epsilon(1e-8));
  CHECK(r < 1e-8);
}
