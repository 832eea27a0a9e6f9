#include "jmcurv/jmcurv.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "central_config.hpp"
#include "curvature.hpp"
#include "dynamics.hpp"
#include "fixtures.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "saari.hpp"
#include "stability.hpp"

using namespace jmcurv;

struct jmc_config {
  Configuration value;
};
struct jmc_problem {
  io::ProblemFile value;
};
struct jmc_scan {
  PlaneScan value;
  std::size_t bodies;
};
struct jmc_stability {
  StabilityReport value;
};
struct jmc_probe {
  std::vector<ProbeRow> rows;
};
struct jmc_trajectory {
  Trajectory value;
};
struct jmc_diagnostics {
  Diagnostics value;
};
struct jmc_saari {
  SaariSeries value;
};

namespace {

thread_local std::string g_last_error;

jmc_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return JMC_ERR_INVALID_ARGUMENT;
    case ErrorCode::invalid_masses: return JMC_ERR_INVALID_MASSES;
    case ErrorCode::dimension_mismatch: return JMC_ERR_DIMENSION_MISMATCH;
    case ErrorCode::collision: return JMC_ERR_COLLISION;
    case ErrorCode::outside_hill_region: return JMC_ERR_OUTSIDE_HILL_REGION;
    case ErrorCode::degenerate_input: return JMC_ERR_DEGENERATE_INPUT;
    case ErrorCode::non_convergence: return JMC_ERR_NON_CONVERGENCE;
    case ErrorCode::non_central: return JMC_ERR_NON_CENTRAL;
    case ErrorCode::unsupported_exponent: return JMC_ERR_UNSUPPORTED_EXPONENT;
    case ErrorCode::step_underflow: return JMC_ERR_STEP_UNDERFLOW;
    case ErrorCode::vanishing_derivative: return JMC_ERR_VANISHING_DERIVATIVE;
    case ErrorCode::parse_error: return JMC_ERR_PARSE;
    case ErrorCode::io_error: return JMC_ERR_IO;
  }
  return JMC_ERR_INTERNAL;
}

jmc_status set_error(jmc_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

template <class F>
jmc_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return JMC_OK;
  } catch (const Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(JMC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(JMC_ERR_INTERNAL, e.what());
  }
}

#define JMC_REQUIRE(ptr)                                                         \
  do {                                                                           \
    if (!(ptr)) return set_error(JMC_ERR_INVALID_ARGUMENT, "null argument: " #ptr); \
  } while (0)

PotentialLaw law_of(jmc_law l) { return {l.alpha, l.energy}; }

CVec read_cvec(const double* xy, std::size_t n) {
  CVec z(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) z[k] = {xy[2 * k], xy[2 * k + 1]};
  return z;
}

void write_cvec(const CVec& z, double* out) {
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    out[2 * k] = z[k].real();
    out[2 * k + 1] = z[k].imag();
  }
}

jmc_status write_eigs(const std::vector<cplx>& eigs, double* out, std::size_t capacity,
                      std::size_t* count) {
  JMC_REQUIRE(count);
  *count = eigs.size();
  if (out) {
    const std::size_t m = std::min(capacity, eigs.size());
    for (std::size_t i = 0; i < m; ++i) {
      out[2 * i] = eigs[i].real();
      out[2 * i + 1] = eigs[i].imag();
    }
    if (capacity < eigs.size()) return set_error(JMC_ERR_BUFFER_TOO_SMALL, "buffer too small");
  }
  return JMC_OK;
}

}  // namespace

extern "C" {

const char* jmc_status_name(jmc_status status) {
  switch (status) {
    case JMC_OK: return "ok";
    case JMC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case JMC_ERR_INVALID_MASSES: return "invalid_masses";
    case JMC_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case JMC_ERR_COLLISION: return "collision";
    case JMC_ERR_OUTSIDE_HILL_REGION: return "outside_hill_region";
    case JMC_ERR_DEGENERATE_INPUT: return "degenerate_input";
    case JMC_ERR_NON_CONVERGENCE: return "non_convergence";
    case JMC_ERR_NON_CENTRAL: return "non_central";
    case JMC_ERR_UNSUPPORTED_EXPONENT: return "unsupported_exponent";
    case JMC_ERR_STEP_UNDERFLOW: return "step_underflow";
    case JMC_ERR_VANISHING_DERIVATIVE: return "vanishing_derivative";
    case JMC_ERR_PARSE: return "parse_error";
    case JMC_ERR_IO: return "io_error";
    case JMC_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case JMC_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

int jmc_status_is_validation(jmc_status status) {
  switch (status) {
    case JMC_ERR_INVALID_ARGUMENT:
    case JMC_ERR_INVALID_MASSES:
    case JMC_ERR_DIMENSION_MISMATCH:
    case JMC_ERR_OUTSIDE_HILL_REGION:
    case JMC_ERR_NON_CENTRAL:
    case JMC_ERR_UNSUPPORTED_EXPONENT:
    case JMC_ERR_PARSE:
    case JMC_ERR_IO:
      return 1;
    default:
      return 0;
  }
}

const char* jmc_last_error_message(void) { return g_last_error.c_str(); }

const char* jmc_version(void) { return "0.1.0"; }

void jmc_set_max_threads(unsigned n) { set_max_threads(n); }

// ---- configurations ----

jmc_status jmc_config_create(const double* masses, size_t n, const double* positions,
                             jmc_config** out) {
  JMC_REQUIRE(masses);
  JMC_REQUIRE(positions);
  JMC_REQUIRE(out);
  return guarded([&] {
    auto sys = make_system(std::vector<double>(masses, masses + n));
    *out = new jmc_config{Configuration(sys, read_cvec(positions, n))};
  });
}

jmc_status jmc_config_fixture(const char* name, double param, jmc_config** out) {
  JMC_REQUIRE(name);
  JMC_REQUIRE(out);
  return guarded([&] {
    const std::string s(name);
    if (s == "pair") {
      *out = new jmc_config{fixtures::pair()};
    } else if (s == "lagrange") {
      *out = new jmc_config{fixtures::lagrange()};
    } else if (s == "euler") {
      *out = new jmc_config{fixtures::euler(param > 0 ? param : 1.0)};
    } else if (s == "polygon") {
      if (!(param >= 2.0)) fail(ErrorCode::invalid_argument, "polygon needs at least 2 bodies");
      *out = new jmc_config{fixtures::regular_polygon(static_cast<std::size_t>(param))};
    } else {
      fail(ErrorCode::invalid_argument, "unknown fixture: " + s);
    }
  });
}

void jmc_config_destroy(jmc_config* config) { delete config; }

size_t jmc_config_size(const jmc_config* config) { return config ? config->value.size() : 0; }

jmc_status jmc_config_positions(const jmc_config* config, double* out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(out);
  write_cvec(config->value.positions(), out);
  return JMC_OK;
}

jmc_status jmc_config_masses(const jmc_config* config, double* out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(out);
  const auto m = config->value.system().masses();
  std::copy(m.begin(), m.end(), out);
  return JMC_OK;
}

jmc_status jmc_problem_load(const char* path, int normalize, jmc_problem** out) {
  JMC_REQUIRE(path);
  JMC_REQUIRE(out);
  return guarded([&] { *out = new jmc_problem{io::load_problem(path, normalize != 0)}; });
}

jmc_status jmc_problem_parse(const char* json_text, int normalize, jmc_problem** out) {
  JMC_REQUIRE(json_text);
  JMC_REQUIRE(out);
  return guarded([&] { *out = new jmc_problem{io::parse_problem(json_text, normalize != 0)}; });
}

void jmc_problem_destroy(jmc_problem* problem) { delete problem; }

jmc_status jmc_problem_config(const jmc_problem* problem, jmc_config** out) {
  JMC_REQUIRE(problem);
  JMC_REQUIRE(out);
  return guarded([&] { *out = new jmc_config{problem->value.configuration}; });
}

int jmc_problem_alpha(const jmc_problem* problem, double* out) {
  if (!problem || !problem->value.alpha) return 0;
  if (out) *out = *problem->value.alpha;
  return 1;
}

int jmc_problem_energy(const jmc_problem* problem, double* out) {
  if (!problem || !problem->value.energy) return 0;
  if (out) *out = *problem->value.energy;
  return 1;
}

int jmc_problem_velocities(const jmc_problem* problem, double* out) {
  if (!problem || !problem->value.velocities) return 0;
  if (out) write_cvec(*problem->value.velocities, out);
  return 1;
}

// ---- potential ----

jmc_status jmc_potential(const jmc_config* config, jmc_law law, double* out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(out);
  return guarded([&] { *out = potential_value(config->value, law_of(law)); });
}

jmc_status jmc_mass_gradient(const jmc_config* config, jmc_law law, double* out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(out);
  return guarded([&] { write_cvec(mass_gradient(config->value, law_of(law)), out); });
}

jmc_status jmc_moment_of_inertia(const jmc_config* config, double* out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(out);
  return guarded([&] { *out = moment_of_inertia(config->value); });
}

// ---- central configurations ----

jmc_status jmc_central_residual(const jmc_config* config, jmc_law law, double* residual,
                                double* lambda) {
  JMC_REQUIRE(config);
  return guarded([&] {
    validate(law_of(law));
    if (residual) *residual = central_residual(config->value, law_of(law));
    if (lambda) *lambda = lambda_for(config->value, law_of(law));
  });
}

jmc_status jmc_solve_central(const jmc_config* seed, jmc_law law, double tol, int max_iterations,
                             jmc_config** out, double* lambda, double* residual,
                             int* iterations) {
  JMC_REQUIRE(seed);
  JMC_REQUIRE(out);
  return guarded([&] {
    CentralSolverOptions opt;
    if (max_iterations > 0) opt.max_iterations = max_iterations;
    CentralConfigResult r = solve_central(seed->value, law_of(law), tol, opt);
    if (lambda) *lambda = r.lambda;
    if (residual) *residual = r.residual;
    if (iterations) *iterations = r.iterations;
    *out = new jmc_config{r.configuration};
  });
}

// ---- curvature ----

jmc_status jmc_conformal_factor(const jmc_config* config, jmc_law law, double* out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(out);
  return guarded([&] { *out = conformal_factor(config->value, law_of(law)); });
}

jmc_status jmc_sectional_curvature(const jmc_config* config, jmc_law law, const double* u,
                                   const double* v, double* out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(u);
  JMC_REQUIRE(v);
  JMC_REQUIRE(out);
  return guarded([&] {
    const std::size_t n = config->value.size();
    TangentPlane plane{read_cvec(u, n), read_cvec(v, n), false};
    *out = sectional_curvature(config->value, plane, law_of(law));
  });
}

jmc_status jmc_holomorphic_sectional(const jmc_config* config, jmc_law law,
                                     const double* direction, double* out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(direction);
  JMC_REQUIRE(out);
  return guarded([&] {
    *out = holomorphic_sectional(config->value, read_cvec(direction, config->value.size()),
                                 law_of(law));
  });
}

jmc_status jmc_closed_form_hqq(const jmc_config* config, jmc_law law, double* out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(out);
  return guarded([&] { *out = closed_form_Hqq(config->value, law_of(law)); });
}

jmc_status jmc_central_curvature_check(const jmc_config* config, jmc_law law, double tol,
                                       int* is_central, double* residual) {
  JMC_REQUIRE(config);
  return guarded([&] {
    const CentralCurvatureCheck c = central_curvature_check(config->value, law_of(law), tol);
    if (is_central) *is_central = c.is_central ? 1 : 0;
    if (residual) *residual = c.residual;
  });
}

double jmc_curvature_tolerance_for(double gradient_tol, double cf) {
  return curvature_tolerance_for(gradient_tol, cf);
}

double jmc_gradient_tolerance_for(double curvature_tol, double cf) {
  return gradient_tolerance_for(curvature_tol, cf);
}

const char* jmc_plane_family_name(int family) {
  if (family < 0 || family > 3) return "unknown";
  return to_string(static_cast<PlaneFamily>(family));
}

jmc_status jmc_plane_scan(const jmc_config* config, jmc_law law, int samples, uint64_t seed,
                          jmc_scan** out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(out);
  return guarded([&] {
    *out = new jmc_scan{plane_scan(config->value, law_of(law), samples, seed), config->value.size()};
  });
}

void jmc_scan_destroy(jmc_scan* scan) { delete scan; }

size_t jmc_scan_size(const jmc_scan* scan) { return scan ? scan->value.entries.size() : 0; }

jmc_status jmc_scan_entry(const jmc_scan* scan, size_t i, int* family, double* coefficients,
                          double* curvature) {
  JMC_REQUIRE(scan);
  if (i >= scan->value.entries.size()) return set_error(JMC_ERR_INVALID_ARGUMENT, "index out of range");
  const PlaneSample& e = scan->value.entries[i];
  if (family) *family = static_cast<int>(e.family);
  if (coefficients)
    for (std::size_t k = 0; k < e.coefficients.size(); ++k) {
      coefficients[2 * k] = e.coefficients[k].real();
      coefficients[2 * k + 1] = e.coefficients[k].imag();
    }
  if (curvature) *curvature = e.curvature;
  return JMC_OK;
}

double jmc_scan_max_identity_residual(const jmc_scan* scan) {
  return scan ? scan->value.max_identity_residual : 0.0;
}

int jmc_scan_base_is_central(const jmc_scan* scan) {
  return scan && scan->value.base_is_central ? 1 : 0;
}

// ---- stability ----

const char* jmc_verdict_name(int verdict) {
  if (verdict < 0 || verdict > 2) return "unknown";
  return to_string(static_cast<Verdict>(verdict));
}

jmc_status jmc_stability_analytic(const jmc_config* config, jmc_law law, jmc_stability** out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(out);
  return guarded([&] { *out = new jmc_stability{analytic_return_eigs(config->value, law_of(law))}; });
}

jmc_status jmc_stability_monodromy(const jmc_config* config, jmc_law law, double tol,
                                   jmc_stability** out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(out);
  return guarded(
      [&] { *out = new jmc_stability{numerical_monodromy(config->value, law_of(law), tol)}; });
}

void jmc_stability_destroy(jmc_stability* st) { delete st; }

jmc_status jmc_stability_get_summary(const jmc_stability* st, jmc_stability_summary* out) {
  JMC_REQUIRE(st);
  JMC_REQUIRE(out);
  const StabilityReport& r = st->value;
  std::memset(out, 0, sizeof(*out));
  out->alpha = r.alpha;
  out->energy = r.energy;
  out->omega_jm = r.omega_jm;
  out->c_squared = r.c_squared;
  out->c = r.c;
  out->c_over_omega = r.c_over_omega;
  out->verdict = static_cast<int>(r.verdict);
  out->analytic_jordan_block = r.analytic_jordan_block ? 1 : 0;
  if (r.monodromy) {
    const MonodromyDetails& m = *r.monodromy;
    out->has_monodromy = 1;
    out->unit_algebraic_multiplicity = m.unit_algebraic_multiplicity;
    out->unit_geometric_multiplicity = m.unit_geometric_multiplicity;
    out->defective_unit = m.defective_unit ? 1 : 0;
    out->rank_threshold = m.rank_threshold;
    out->symplectic_residual = m.symplectic_residual;
    out->unit_circle_deviation = m.unit_circle_deviation;
    out->reciprocal_pair_error = m.reciprocal_pair_error;
    out->surface_match_error = m.surface_match_error;
    out->period = m.period;
    out->steps = m.steps;
  }
  return JMC_OK;
}

jmc_status jmc_stability_eigs(const jmc_stability* st, int which, double* out, size_t capacity,
                              size_t* count) {
  JMC_REQUIRE(st);
  switch (which) {
    case 0: return write_eigs(st->value.analytic_eigs, out, capacity, count);
    case 1: return write_eigs(st->value.monodromy_eigs, out, capacity, count);
    case 2:
      return write_eigs(st->value.monodromy ? st->value.monodromy->raw_eigs : std::vector<cplx>{},
                        out, capacity, count);
    default: return set_error(JMC_ERR_INVALID_ARGUMENT, "unknown eigenvalue set");
  }
}

jmc_status jmc_stability_staircase(const jmc_stability* st, int* out, size_t capacity,
                                   size_t* count) {
  JMC_REQUIRE(st);
  JMC_REQUIRE(count);
  const std::vector<int> empty;
  const auto& s = st->value.monodromy ? st->value.monodromy->unit_staircase : empty;
  *count = s.size();
  if (out) {
    std::copy_n(s.begin(), std::min(capacity, s.size()), out);
    if (capacity < s.size()) return set_error(JMC_ERR_BUFFER_TOO_SMALL, "buffer too small");
  }
  return JMC_OK;
}

jmc_status jmc_stability_matrix(const jmc_stability* st, double* out, size_t capacity,
                                size_t* rows) {
  JMC_REQUIRE(st);
  JMC_REQUIRE(rows);
  if (!st->value.monodromy) {
    *rows = 0;
    return JMC_OK;
  }
  const RMat& m = st->value.monodromy->matrix;
  *rows = static_cast<size_t>(m.rows());
  if (out) {
    if (capacity < static_cast<size_t>(m.size()))
      return set_error(JMC_ERR_BUFFER_TOO_SMALL, "buffer too small");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
  }
  return JMC_OK;
}

jmc_status jmc_jacobi_field(const jmc_config* config, jmc_law law, double lambda0,
                            double lambdadot0, double s_final, double* value, double* derivative) {
  JMC_REQUIRE(config);
  return guarded([&] {
    const JacobiFieldSeries s =
        jacobi_field_integrate(config->value, law_of(law), lambda0, lambdadot0, s_final);
    if (value) *value = s.value.back();
    if (derivative) *derivative = s.derivative.back();
  });
}

jmc_status jmc_conjecture_probe(const jmc_config* config, double alpha, const double* energies,
                                size_t n_energies, int samples, uint64_t seed, jmc_probe** out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(energies);
  JMC_REQUIRE(out);
  return guarded([&] {
    *out = new jmc_probe{conjecture_probe(config->value, alpha,
                                          std::span<const double>(energies, n_energies), samples,
                                          seed)};
  });
}

void jmc_probe_destroy(jmc_probe* probe) { delete probe; }

size_t jmc_probe_size(const jmc_probe* probe) { return probe ? probe->rows.size() : 0; }

jmc_status jmc_probe_row(const jmc_probe* probe, size_t i, double* energy, int* family,
                         double* min_curvature, double* identity_residual) {
  JMC_REQUIRE(probe);
  if (i >= probe->rows.size()) return set_error(JMC_ERR_INVALID_ARGUMENT, "index out of range");
  const ProbeRow& r = probe->rows[i];
  if (energy) *energy = r.energy;
  if (family) *family = static_cast<int>(r.family);
  if (min_curvature) *min_curvature = r.min_curvature;
  if (identity_residual) *identity_residual = r.identity_residual;
  return JMC_OK;
}

// ---- trajectories ----

jmc_status jmc_integrate(const jmc_config* config, const double* velocities, double alpha,
                         double t_final, double tol, double sample_dt, jmc_trajectory** out) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(velocities);
  JMC_REQUIRE(out);
  return guarded([&] {
    const Configuration& c = config->value;
    PhaseState init{c.positions(), read_cvec(velocities, c.size()), 0.0};
    IntegrateOptions opt;
    opt.sample_dt = sample_dt;
    *out = new jmc_trajectory{
        integrate(c.system_ptr(), init, {alpha, 0.0}, t_final, tol, opt)};
  });
}

jmc_status jmc_relative_equilibrium(const jmc_config* config, double alpha, double* omega,
                                    double* period, double* energy, double* velocities) {
  JMC_REQUIRE(config);
  return guarded([&] {
    const PotentialLaw law{alpha, 0.0};
    const RelativeEquilibrium re = relative_equilibrium(config->value, law);
    if (omega) *omega = re.omega;
    if (period) *period = re.period;
    if (energy) *energy = re.energy;
    if (velocities) write_cvec(relative_equilibrium_state(config->value, law).qdot, velocities);
  });
}

jmc_status jmc_homographic(const jmc_config* config, double alpha, const double z0[2],
                           const double zdot0[2], double t_final, double tol, double sample_dt,
                           jmc_trajectory** out, int* collapsed) {
  JMC_REQUIRE(config);
  JMC_REQUIRE(z0);
  JMC_REQUIRE(zdot0);
  JMC_REQUIRE(out);
  return guarded([&] {
    IntegrateOptions opt;
    opt.sample_dt = sample_dt;
    HomographicSolution h = homographic(config->value, {alpha, 0.0}, {z0[0], z0[1]},
                                        {zdot0[0], zdot0[1]}, t_final, tol, opt);
    if (collapsed) *collapsed = h.collapsed ? 1 : 0;
    *out = new jmc_trajectory{std::move(h.trajectory)};
  });
}

void jmc_trajectory_destroy(jmc_trajectory* traj) { delete traj; }

jmc_status jmc_trajectory_get_info(const jmc_trajectory* traj, jmc_trajectory_info* out) {
  JMC_REQUIRE(traj);
  JMC_REQUIRE(out);
  const Trajectory& t = traj->value;
  out->bodies = t.system->size();
  out->samples = t.samples.size();
  out->alpha = t.law.alpha;
  out->energy = t.law.energy;
  out->accepted = t.stats.accepted;
  out->rejected = t.stats.rejected;
  out->rhs_evals = t.stats.rhs_evals;
  out->rtol = t.stats.rtol;
  out->atol = t.stats.atol;
  out->collision_distance = t.stats.collision_distance;
  out->truncated = t.stats.truncated ? 1 : 0;
  return JMC_OK;
}

jmc_status jmc_trajectory_masses(const jmc_trajectory* traj, double* out) {
  JMC_REQUIRE(traj);
  JMC_REQUIRE(out);
  const auto m = traj->value.system->masses();
  std::copy(m.begin(), m.end(), out);
  return JMC_OK;
}

jmc_status jmc_trajectory_sample(const jmc_trajectory* traj, size_t i, double* t,
                                 double* positions, double* velocities) {
  JMC_REQUIRE(traj);
  if (i >= traj->value.samples.size())
    return set_error(JMC_ERR_INVALID_ARGUMENT, "index out of range");
  const PhaseState& s = traj->value.samples[i];
  if (t) *t = s.t;
  if (positions) write_cvec(s.q, positions);
  if (velocities) write_cvec(s.qdot, velocities);
  return JMC_OK;
}

jmc_status jmc_trajectory_write_csv(const jmc_trajectory* traj, const char* path) {
  JMC_REQUIRE(traj);
  JMC_REQUIRE(path);
  return guarded([&] { io::write_trajectory_csv(traj->value, path); });
}

jmc_status jmc_trajectory_read_csv(const char* path, jmc_trajectory** out) {
  JMC_REQUIRE(path);
  JMC_REQUIRE(out);
  return guarded([&] { *out = new jmc_trajectory{io::read_trajectory_csv(path)}; });
}

jmc_status jmc_diagnostics_compute(const jmc_trajectory* traj, int with_dziobek,
                                   jmc_diagnostics** out) {
  JMC_REQUIRE(traj);
  JMC_REQUIRE(out);
  return guarded([&] {
    *out = new jmc_diagnostics{with_dziobek < 0 ? diagnostics(traj->value)
                                                : diagnostics(traj->value, with_dziobek != 0)};
  });
}

void jmc_diagnostics_destroy(jmc_diagnostics* d) { delete d; }

size_t jmc_diagnostics_size(const jmc_diagnostics* d) { return d ? d->value.t.size() : 0; }

jmc_status jmc_diagnostics_get_row(const jmc_diagnostics* d, size_t i, jmc_diagnostics_row* out) {
  JMC_REQUIRE(d);
  JMC_REQUIRE(out);
  const Diagnostics& g = d->value;
  if (i >= g.t.size()) return set_error(JMC_ERR_INVALID_ARGUMENT, "index out of range");
  out->t = g.t[i];
  out->energy = g.energy[i];
  out->linear_momentum[0] = g.linear_momentum[i].real();
  out->linear_momentum[1] = g.linear_momentum[i].imag();
  out->angular_momentum = g.angular_momentum[i];
  out->inertia = g.inertia[i];
  out->potential = g.potential[i];
  out->lj_residual = g.lj_residual[i];
  out->mu = g.mu[i];
  out->has_dziobek = g.dziobek ? 1 : 0;
  out->dziobek = g.dziobek ? (*g.dziobek)[i] : 0.0;
  return JMC_OK;
}

jmc_status jmc_drift_summary(const jmc_trajectory* traj, jmc_drift* out) {
  JMC_REQUIRE(traj);
  JMC_REQUIRE(out);
  return guarded([&] {
    const DriftSummary s = drift_summary(traj->value);
    out->energy = s.energy;
    out->linear_momentum = s.linear_momentum;
    out->angular_momentum = s.angular_momentum;
    out->lj_residual = s.lj_residual;
  });
}

// ---- Saari ----

const char* jmc_witness_verdict_name(int verdict) {
  if (verdict < 0 || verdict > 2) return "unknown";
  return to_string(static_cast<WitnessVerdict>(verdict));
}

jmc_status jmc_saari_curvature(const jmc_trajectory* traj, jmc_saari** out) {
  JMC_REQUIRE(traj);
  JMC_REQUIRE(out);
  return guarded([&] { *out = new jmc_saari{curvature_along(traj->value)}; });
}

void jmc_saari_destroy(jmc_saari* s) { delete s; }

size_t jmc_saari_size(const jmc_saari* s) { return s ? s->value.times.size() : 0; }

jmc_status jmc_saari_get_row(const jmc_saari* s, size_t i, jmc_saari_row* out) {
  JMC_REQUIRE(s);
  JMC_REQUIRE(out);
  const SaariSeries& v = s->value;
  if (i >= v.times.size()) return set_error(JMC_ERR_INVALID_ARGUMENT, "index out of range");
  out->t = v.times[i];
  out->curvature = v.curvature[i];
  out->curvature_general = v.curvature_general[i];
  out->potential = v.potential[i];
  out->dU_dt = v.dU_dt[i];
  out->d2U_dt2 = v.d2U_dt2[i];
  out->d2U_transverse = v.d2U_transverse[i];
  return JMC_OK;
}

jmc_status jmc_saari_flat_segments(const jmc_saari* s, double rel_threshold, size_t min_dwell,
                                   size_t* out, size_t capacity, size_t* count) {
  JMC_REQUIRE(s);
  JMC_REQUIRE(count);
  return guarded([&] {
    const auto segs = flat_segments(s->value, rel_threshold, min_dwell);
    *count = segs.size();
    if (!out) return;
    const std::size_t m = std::min(capacity, segs.size());
    for (std::size_t i = 0; i < m; ++i) {
      out[2 * i] = segs[i].begin;
      out[2 * i + 1] = segs[i].end;
    }
    if (capacity < segs.size()) fail(ErrorCode::invalid_argument, "buffer too small");
  });
}

jmc_status jmc_first_integral_check(const jmc_trajectory* traj, double* c_estimate,
                                    double* max_residual) {
  JMC_REQUIRE(traj);
  return guarded([&] {
    const FirstIntegralCheck f = first_integral_check(traj->value);
    if (c_estimate) *c_estimate = f.C_estimate;
    if (max_residual) *max_residual = f.max_residual;
  });
}

jmc_status jmc_first_integral_check_series(const double* potential, const double* dU_dt, size_t n,
                                           double energy, double* c_estimate,
                                           double* max_residual) {
  JMC_REQUIRE(potential);
  JMC_REQUIRE(dU_dt);
  return guarded([&] {
    const FirstIntegralCheck f = first_integral_check(std::span<const double>(potential, n),
                                                      std::span<const double>(dU_dt, n), energy);
    if (c_estimate) *c_estimate = f.C_estimate;
    if (max_residual) *max_residual = f.max_residual;
  });
}

jmc_status jmc_constant_potential_witness(const jmc_trajectory* traj, double tol,
                                          jmc_witness* out) {
  JMC_REQUIRE(traj);
  JMC_REQUIRE(out);
  return guarded([&] {
    const ConstantPotentialWitness w = constant_potential_witness(traj->value, tol);
    out->verdict = static_cast<int>(w.verdict);
    out->inertia_variation = w.inertia_variation;
    out->curvature_max = w.curvature_max;
    out->potential_variation = w.potential_variation;
    out->has_mu_variation = w.mu_variation ? 1 : 0;
    out->mu_variation = w.mu_variation.value_or(0.0);
  });
}

}  // extern "C"
