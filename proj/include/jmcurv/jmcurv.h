/*
 * jmcurv: Jacobi-Maupertuis curvature of the planar N-body problem with a
 * 1/r^alpha potential.
 *
 * Every function returns a jmc_status. On failure the thread-local message
 * from jmc_last_error_message() describes the cause. Objects are opaque and
 * owned by the caller once returned; release them with the matching
 * *_destroy function (NULL is accepted).
 *
 * Planar vectors are passed as interleaved doubles x1, y1, x2, y2, ...
 */
#ifndef JMCURV_JMCURV_H
#define JMCURV_JMCURV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(JMCURV_BUILDING_LIBRARY)
#    define JMCURV_API __declspec(dllexport)
#  else
#    define JMCURV_API __declspec(dllimport)
#  endif
#else
#  define JMCURV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jmc_status {
  JMC_OK = 0,
  JMC_ERR_INVALID_ARGUMENT = 1,
  JMC_ERR_INVALID_MASSES = 2,
  JMC_ERR_DIMENSION_MISMATCH = 3,
  JMC_ERR_COLLISION = 4,
  JMC_ERR_OUTSIDE_HILL_REGION = 5,
  JMC_ERR_DEGENERATE_INPUT = 6,
  JMC_ERR_NON_CONVERGENCE = 7,
  JMC_ERR_NON_CENTRAL = 8,
  JMC_ERR_UNSUPPORTED_EXPONENT = 9,
  JMC_ERR_STEP_UNDERFLOW = 10,
  JMC_ERR_VANISHING_DERIVATIVE = 11,
  JMC_ERR_PARSE = 12,
  JMC_ERR_IO = 13,
  JMC_ERR_BUFFER_TOO_SMALL = 14,
  JMC_ERR_INTERNAL = 15
} jmc_status;

/* Short identifier such as "invalid_masses". */
JMCURV_API const char* jmc_status_name(jmc_status status);
/* Nonzero for errors detected while validating input. */
JMCURV_API int jmc_status_is_validation(jmc_status status);
JMCURV_API const char* jmc_last_error_message(void);
JMCURV_API const char* jmc_version(void);
/* 0 restores the hardware default. */
JMCURV_API void jmc_set_max_threads(unsigned n);

typedef struct jmc_law {
  double alpha;  /* exponent of the potential, > 0 */
  double energy; /* energy level h of the Jacobi-Maupertuis metric */
} jmc_law;

typedef struct jmc_config jmc_config;
typedef struct jmc_problem jmc_problem;
typedef struct jmc_scan jmc_scan;
typedef struct jmc_stability jmc_stability;
typedef struct jmc_probe jmc_probe;
typedef struct jmc_trajectory jmc_trajectory;
typedef struct jmc_diagnostics jmc_diagnostics;
typedef struct jmc_saari jmc_saari;

/* ---- configurations ---- */

JMCURV_API jmc_status jmc_config_create(const double* masses, size_t n, const double* positions,
                                        jmc_config** out);
/* "pair", "lagrange", "euler" (param = half length) or "polygon" (param = N). */
JMCURV_API jmc_status jmc_config_fixture(const char* name, double param, jmc_config** out);
JMCURV_API void jmc_config_destroy(jmc_config* config);
JMCURV_API size_t jmc_config_size(const jmc_config* config);
JMCURV_API jmc_status jmc_config_positions(const jmc_config* config, double* out);
JMCURV_API jmc_status jmc_config_masses(const jmc_config* config, double* out);

/* JSON problem file: masses, positions and optional alpha, energy, velocities. */
JMCURV_API jmc_status jmc_problem_load(const char* path, int normalize, jmc_problem** out);
JMCURV_API jmc_status jmc_problem_parse(const char* json_text, int normalize, jmc_problem** out);
JMCURV_API void jmc_problem_destroy(jmc_problem* problem);
JMCURV_API jmc_status jmc_problem_config(const jmc_problem* problem, jmc_config** out);
JMCURV_API int jmc_problem_alpha(const jmc_problem* problem, double* out);
JMCURV_API int jmc_problem_energy(const jmc_problem* problem, double* out);
/* Returns nonzero and fills 2N doubles when velocities are present. */
JMCURV_API int jmc_problem_velocities(const jmc_problem* problem, double* out);

/* ---- potential and mass geometry ---- */

JMCURV_API jmc_status jmc_potential(const jmc_config* config, jmc_law law, double* out);
JMCURV_API jmc_status jmc_mass_gradient(const jmc_config* config, jmc_law law, double* out);
JMCURV_API jmc_status jmc_moment_of_inertia(const jmc_config* config, double* out);

/* ---- central configurations ---- */

JMCURV_API jmc_status jmc_central_residual(const jmc_config* config, jmc_law law, double* residual,
                                           double* lambda);
/* max_iterations <= 0 selects the default. */
JMCURV_API jmc_status jmc_solve_central(const jmc_config* seed, jmc_law law, double tol,
                                        int max_iterations, jmc_config** out, double* lambda,
                                        double* residual, int* iterations);

/* ---- curvature ---- */

JMCURV_API jmc_status jmc_conformal_factor(const jmc_config* config, jmc_law law, double* out);
JMCURV_API jmc_status jmc_sectional_curvature(const jmc_config* config, jmc_law law,
                                              const double* u, const double* v, double* out);
JMCURV_API jmc_status jmc_holomorphic_sectional(const jmc_config* config, jmc_law law,
                                                const double* direction, double* out);
JMCURV_API jmc_status jmc_closed_form_hqq(const jmc_config* config, jmc_law law, double* out);
JMCURV_API jmc_status jmc_central_curvature_check(const jmc_config* config, jmc_law law,
                                                  double tol, int* is_central, double* residual);
JMCURV_API double jmc_curvature_tolerance_for(double gradient_tol, double conformal_factor);
JMCURV_API double jmc_gradient_tolerance_for(double curvature_tol, double conformal_factor);

/* Families: 0 = (q, v), 1 = (iq, iv), 2 = (v, iv), 3 = (q, iq). */
JMCURV_API const char* jmc_plane_family_name(int family);
JMCURV_API jmc_status jmc_plane_scan(const jmc_config* config, jmc_law law, int samples,
                                     uint64_t seed, jmc_scan** out);
JMCURV_API void jmc_scan_destroy(jmc_scan* scan);
JMCURV_API size_t jmc_scan_size(const jmc_scan* scan);
/* coefficients receives 2(N-1) doubles: v in the unitary completion of q. */
JMCURV_API jmc_status jmc_scan_entry(const jmc_scan* scan, size_t i, int* family,
                                     double* coefficients, double* curvature);
JMCURV_API double jmc_scan_max_identity_residual(const jmc_scan* scan);
JMCURV_API int jmc_scan_base_is_central(const jmc_scan* scan);

/* ---- stability of relative equilibria ---- */

typedef enum jmc_verdict {
  JMC_SPECTRALLY_UNSTABLE = 0,
  JMC_LINEARLY_UNSTABLE = 1,
  JMC_INCONCLUSIVE = 2
} jmc_verdict;

JMCURV_API const char* jmc_verdict_name(int verdict);

typedef struct jmc_stability_summary {
  double alpha;
  double energy;
  double omega_jm;
  double c_squared;
  double c;
  double c_over_omega;
  int verdict;
  int analytic_jordan_block;
  int has_monodromy;
  int unit_algebraic_multiplicity;
  int unit_geometric_multiplicity;
  int defective_unit;
  double rank_threshold;
  double symplectic_residual;
  double unit_circle_deviation;
  double reciprocal_pair_error;
  double surface_match_error;
  double period;
  size_t steps;
} jmc_stability_summary;

JMCURV_API jmc_status jmc_stability_analytic(const jmc_config* config, jmc_law law,
                                             jmc_stability** out);
JMCURV_API jmc_status jmc_stability_monodromy(const jmc_config* config, jmc_law law, double tol,
                                              jmc_stability** out);
JMCURV_API void jmc_stability_destroy(jmc_stability* st);
JMCURV_API jmc_status jmc_stability_get_summary(const jmc_stability* st,
                                                jmc_stability_summary* out);
/* which: 0 analytic, 1 monodromy (unit cluster certified), 2 raw monodromy.
 * Writes min(count, capacity) interleaved (re, im) pairs; *count is the total.
 * A NULL out only reports sizes, here and in the two functions below. */
JMCURV_API jmc_status jmc_stability_eigs(const jmc_stability* st, int which, double* out,
                                         size_t capacity, size_t* count);
JMCURV_API jmc_status jmc_stability_staircase(const jmc_stability* st, int* out, size_t capacity,
                                              size_t* count);
/* Row-major 4N x 4N monodromy matrix. */
JMCURV_API jmc_status jmc_stability_matrix(const jmc_stability* st, double* out, size_t capacity,
                                           size_t* rows);
JMCURV_API jmc_status jmc_jacobi_field(const jmc_config* config, jmc_law law, double lambda0,
                                       double lambdadot0, double s_final, double* value,
                                       double* derivative);

JMCURV_API jmc_status jmc_conjecture_probe(const jmc_config* config, double alpha,
                                           const double* energies, size_t n_energies, int samples,
                                           uint64_t seed, jmc_probe** out);
JMCURV_API void jmc_probe_destroy(jmc_probe* probe);
JMCURV_API size_t jmc_probe_size(const jmc_probe* probe);
JMCURV_API jmc_status jmc_probe_row(const jmc_probe* probe, size_t i, double* energy, int* family,
                                    double* min_curvature, double* identity_residual);

/* ---- trajectories ---- */

typedef struct jmc_trajectory_info {
  size_t bodies;
  size_t samples;
  double alpha;
  double energy;
  size_t accepted;
  size_t rejected;
  size_t rhs_evals;
  double rtol;
  double atol;
  double collision_distance;
  int truncated;
} jmc_trajectory_info;

/* sample_dt > 0 samples a uniform grid; 0 records every accepted step. */
JMCURV_API jmc_status jmc_integrate(const jmc_config* config, const double* velocities,
                                    double alpha, double t_final, double tol, double sample_dt,
                                    jmc_trajectory** out);
/* Rigid rotation initial state of a central configuration. */
JMCURV_API jmc_status jmc_relative_equilibrium(const jmc_config* config, double alpha,
                                               double* omega, double* period, double* energy,
                                               double* velocities);
JMCURV_API jmc_status jmc_homographic(const jmc_config* config, double alpha, const double z0[2],
                                      const double zdot0[2], double t_final, double tol,
                                      double sample_dt, jmc_trajectory** out, int* collapsed);
JMCURV_API void jmc_trajectory_destroy(jmc_trajectory* traj);
JMCURV_API jmc_status jmc_trajectory_get_info(const jmc_trajectory* traj,
                                              jmc_trajectory_info* out);
JMCURV_API jmc_status jmc_trajectory_masses(const jmc_trajectory* traj, double* out);
JMCURV_API jmc_status jmc_trajectory_sample(const jmc_trajectory* traj, size_t i, double* t,
                                            double* positions, double* velocities);
JMCURV_API jmc_status jmc_trajectory_write_csv(const jmc_trajectory* traj, const char* path);
JMCURV_API jmc_status jmc_trajectory_read_csv(const char* path, jmc_trajectory** out);

typedef struct jmc_diagnostics_row {
  double t;
  double energy;
  double linear_momentum[2];
  double angular_momentum;
  double inertia;
  double potential;
  double lj_residual;
  double mu;
  double dziobek;
  int has_dziobek;
} jmc_diagnostics_row;

typedef struct jmc_drift {
  double energy;
  double linear_momentum;
  double angular_momentum;
  double lj_residual;
} jmc_drift;

/* with_dziobek: 1 on, 0 off, -1 on unless alpha = 2. */
JMCURV_API jmc_status jmc_diagnostics_compute(const jmc_trajectory* traj, int with_dziobek,
                                              jmc_diagnostics** out);
JMCURV_API void jmc_diagnostics_destroy(jmc_diagnostics* d);
JMCURV_API size_t jmc_diagnostics_size(const jmc_diagnostics* d);
JMCURV_API jmc_status jmc_diagnostics_get_row(const jmc_diagnostics* d, size_t i,
                                              jmc_diagnostics_row* out);
JMCURV_API jmc_status jmc_drift_summary(const jmc_trajectory* traj, jmc_drift* out);

/* ---- Saari diagnostics ---- */

typedef struct jmc_saari_row {
  double t;
  double curvature;
  double curvature_general;
  double potential;
  double dU_dt;
  double d2U_dt2;
  double d2U_transverse;
} jmc_saari_row;

typedef enum jmc_witness_verdict {
  JMC_POTENTIAL_CONSTANT = 0,
  JMC_WITNESS_INCONCLUSIVE = 1,
  JMC_WITNESS_VIOLATED = 2
} jmc_witness_verdict;

typedef struct jmc_witness {
  int verdict;
  double inertia_variation;
  double curvature_max;
  double potential_variation;
  double mu_variation;
  int has_mu_variation;
} jmc_witness;

JMCURV_API const char* jmc_witness_verdict_name(int verdict);
JMCURV_API jmc_status jmc_saari_curvature(const jmc_trajectory* traj, jmc_saari** out);
JMCURV_API void jmc_saari_destroy(jmc_saari* s);
JMCURV_API size_t jmc_saari_size(const jmc_saari* s);
JMCURV_API jmc_status jmc_saari_get_row(const jmc_saari* s, size_t i, jmc_saari_row* out);
/* Runs of at least min_dwell samples with |K| <= rel_threshold |grad U|^2 / (h+U)^3.
 * Writes (begin, end) index pairs, end exclusive. */
JMCURV_API jmc_status jmc_saari_flat_segments(const jmc_saari* s, double rel_threshold,
                                              size_t min_dwell, size_t* out, size_t capacity,
                                              size_t* count);
JMCURV_API jmc_status jmc_first_integral_check(const jmc_trajectory* traj, double* c_estimate,
                                               double* max_residual);
JMCURV_API jmc_status jmc_first_integral_check_series(const double* potential,
                                                      const double* dU_dt, size_t n, double energy,
                                                      double* c_estimate, double* max_residual);
JMCURV_API jmc_status jmc_constant_potential_witness(const jmc_trajectory* traj, double tol,
                                                     jmc_witness* out);

#ifdef __cplusplus
}
#endif

#endif /* JMCURV_JMCURV_H */
