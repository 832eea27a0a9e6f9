// jmcurv command-line front end. Everything numerical goes through the C API.

#include <jmcurv/jmcurv.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

struct CliFailure {
  jmc_status status;
  std::string message;
};

void check(jmc_status s) {
  if (s != JMC_OK) throw CliFailure{s, jmc_last_error_message()};
}

[[noreturn]] void usage_error(const std::string& msg) {
  throw CliFailure{JMC_ERR_INVALID_ARGUMENT, msg};
}

template <class T, void (*Destroy)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Config = Handle<jmc_config, jmc_config_destroy>;
using Problem = Handle<jmc_problem, jmc_problem_destroy>;
using Scan = Handle<jmc_scan, jmc_scan_destroy>;
using Stability = Handle<jmc_stability, jmc_stability_destroy>;
using Probe = Handle<jmc_probe, jmc_probe_destroy>;
using Traj = Handle<jmc_trajectory, jmc_trajectory_destroy>;
using Diag = Handle<jmc_diagnostics, jmc_diagnostics_destroy>;
using Saari = Handle<jmc_saari, jmc_saari_destroy>;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure{JMC_ERR_IO, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json points(const std::vector<double>& xy) {
  json a = json::array();
  for (std::size_t k = 0; 2 * k + 1 < xy.size(); ++k) a.push_back({xy[2 * k], xy[2 * k + 1]});
  return a;
}

json complex_list(const std::vector<double>& reim) {
  json a = json::array();
  for (std::size_t k = 0; 2 * k + 1 < reim.size(); ++k)
    a.push_back({{"re", reim[2 * k]}, {"im", reim[2 * k + 1]}});
  return a;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliFailure{JMC_ERR_IO, "cannot write " + path};
  out << text;
}

// Shared state of one invocation.
struct Run {
  std::vector<std::string> argv;
  std::string input_path;
  std::string out_path;
  std::optional<double> alpha;
  std::optional<double> energy;
  double tol = 0.0;
  std::optional<std::uint64_t> seed;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  json tolerances = json::object();

  void manifest(const std::string& artifact) const {
    json m;
    m["command_line"] = argv;
    m["input"] = input_path;
    if (!input_path.empty()) {
      char buf[17];
      std::snprintf(buf, sizeof buf, "%016llx",
                    static_cast<unsigned long long>(fnv1a64(slurp(input_path))));
      m["input_hash_fnv1a64"] = buf;
    }
    m["tolerances"] = tolerances;
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["version"] = jmc_version();
    m["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(artifact + ".manifest.json", m.dump(2) + "\n");
  }

  // JSON report to --out (with manifest) or stdout.
  void emit(const json& report) const {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      write_text(out_path, text);
      manifest(out_path);
    }
  }
};

struct Loaded {
  Problem problem;
  Config config;
  double alpha = 1.0;
  double energy = 0.0;
  bool has_energy = false;
  std::size_t n = 0;
};

void load(const Run& run, Loaded& l) {
  if (run.input_path.empty()) usage_error("--input is required");
  check(jmc_problem_load(run.input_path.c_str(), 1, l.problem.out()));
  check(jmc_problem_config(l.problem.get(), l.config.out()));
  l.n = jmc_config_size(l.config.get());
  double v = 0.0;
  if (run.alpha) l.alpha = *run.alpha;
  else if (jmc_problem_alpha(l.problem.get(), &v)) l.alpha = v;
  if (run.energy) {
    l.energy = *run.energy;
    l.has_energy = true;
  } else if (jmc_problem_energy(l.problem.get(), &v)) {
    l.energy = v;
    l.has_energy = true;
  }
}

std::vector<double> positions(const jmc_config* c) {
  std::vector<double> xy(2 * jmc_config_size(c));
  check(jmc_config_positions(c, xy.data()));
  return xy;
}

std::vector<double> masses(const jmc_config* c) {
  std::vector<double> m(jmc_config_size(c));
  check(jmc_config_masses(c, m.data()));
  return m;
}

// ---- cc ----

void cmd_cc_find(Run& run, int max_iter) {
  Loaded l;
  load(run, l);
  Config out;
  double lambda = 0.0, residual = 0.0;
  int iterations = 0;
  check(jmc_solve_central(l.config.get(), {l.alpha, l.energy}, run.tol, max_iter, out.out(),
                          &lambda, &residual, &iterations));
  run.tolerances["residual"] = run.tol;
  json r;
  r["masses"] = masses(out.get());
  r["positions"] = points(positions(out.get()));
  r["alpha"] = l.alpha;
  if (l.has_energy) r["energy"] = l.energy;
  r["lambda"] = lambda;
  r["residual"] = residual;
  r["iterations"] = iterations;
  run.emit(r);
}

void cmd_cc_verify(Run& run) {
  Loaded l;
  load(run, l);
  const jmc_law law{l.alpha, l.energy};
  double residual = 0.0, lambda = 0.0, rho = 0.0;
  check(jmc_central_residual(l.config.get(), law, &residual, &lambda));
  json r;
  r["residual"] = residual;
  r["lambda"] = lambda;
  r["is_central"] = residual <= run.tol;
  r["alpha"] = l.alpha;
  r["energy"] = l.energy;
  jmc_status s = jmc_conformal_factor(l.config.get(), law, &rho);
  if (s == JMC_OK) {
    const double ktol = jmc_curvature_tolerance_for(run.tol, rho);
    int central = 0;
    double kres = 0.0, cf = 0.0;
    check(jmc_central_curvature_check(l.config.get(), law, ktol, &central, &kres));
    check(jmc_closed_form_hqq(l.config.get(), law, &cf));
    r["prop3"] = central != 0;
    r["curvature_residual"] = kres;
    r["curvature_tolerance"] = ktol;
    r["closed_form_H"] = cf;
    r["conformal_factor"] = rho;
  } else if (s != JMC_ERR_OUTSIDE_HILL_REGION || l.has_energy) {
    check(s);
  }
  run.tolerances["residual"] = run.tol;
  run.emit(r);
}

// ---- curvature ----

std::vector<double> plane_vector(const std::string& token, const std::vector<double>& q) {
  std::vector<double> v(q.size());
  const std::size_t n = q.size() / 2;
  if (token == "q") return q;
  if (token == "iq") {
    for (std::size_t k = 0; k < n; ++k) {
      v[2 * k] = -q[2 * k + 1];
      v[2 * k + 1] = q[2 * k];
    }
    return v;
  }
  if (token == "1") {
    for (auto& x : v) x = 1.0;
    return v;
  }
  usage_error("unknown plane vector '" + token + "' (expected q, iq or 1)");
}

std::vector<double> json_points(const json& a, std::size_t n, const char* what) {
  if (!a.is_array() || a.size() != n)
    throw CliFailure{JMC_ERR_DIMENSION_MISMATCH, std::string(what) + " must list one point per body"};
  std::vector<double> xy;
  for (const auto& p : a) {
    if (!p.is_array() || p.size() != 2) throw CliFailure{JMC_ERR_PARSE, "points are [x, y] pairs"};
    xy.push_back(p[0].get<double>());
    xy.push_back(p[1].get<double>());
  }
  return xy;
}

void cmd_curvature_sectional(Run& run, const std::string& plane) {
  Loaded l;
  load(run, l);
  const jmc_law law{l.alpha, l.energy};
  const std::vector<double> q = positions(l.config.get());
  std::vector<double> u, v;
  const auto comma = plane.find(',');
  const bool named = comma != std::string::npos && plane.find('.') == std::string::npos;
  if (named) {
    u = plane_vector(plane.substr(0, comma), q);
    v = plane_vector(plane.substr(comma + 1), q);
  } else {
    json p;
    try {
      p = json::parse(slurp(plane));
      u = json_points(p.at("u"), l.n, "u");
      v = json_points(p.at("v"), l.n, "v");
    } catch (const json::exception& e) {
      throw CliFailure{JMC_ERR_PARSE, e.what()};
    }
  }
  double k = 0.0;
  check(jmc_sectional_curvature(l.config.get(), law, u.data(), v.data(), &k));
  json r;
  r["plane"] = plane;
  r["alpha"] = l.alpha;
  r["energy"] = l.energy;
  r["sectional_curvature"] = k;
  if (plane == "q,iq") {
    double h = 0.0, cf = 0.0;
    check(jmc_holomorphic_sectional(l.config.get(), law, q.data(), &h));
    check(jmc_closed_form_hqq(l.config.get(), law, &cf));
    r["holomorphic_curvature"] = h;
    r["closed_form_H"] = cf;
  }
  run.emit(r);
}

void cmd_curvature_scan(Run& run, int samples) {
  Loaded l;
  load(run, l);
  if (run.out_path.empty()) usage_error("--out is required");
  Scan scan;
  check(jmc_plane_scan(l.config.get(), {l.alpha, l.energy}, samples, *run.seed, scan.out()));
  std::ostringstream csv;
  csv << "sample,family";
  for (std::size_t j = 2; j <= l.n; ++j) csv << ",c" << j << "_re,c" << j << "_im";
  csv << ",K\n";
  std::vector<double> coef(2 * (l.n - 1));
  const std::size_t m = jmc_scan_size(scan.get());
  for (std::size_t i = 0; i < m; ++i) {
    int family = 0;
    double k = 0.0;
    check(jmc_scan_entry(scan.get(), i, &family, coef.data(), &k));
    csv << i / 4 << ',' << jmc_plane_family_name(family);
    for (double c : coef) csv << ',' << fmt(c);
    csv << ',' << fmt(k) << '\n';
  }
  write_text(run.out_path, csv.str());
  run.tolerances["identity"] = nullptr;
  run.manifest(run.out_path);
  json r;
  r["samples"] = samples;
  r["max_identity_residual"] = jmc_scan_max_identity_residual(scan.get());
  r["base_is_central"] = jmc_scan_base_is_central(scan.get()) != 0;
  std::cout << r.dump(2) << "\n";
}

// ---- stability ----

json stability_report(const jmc_stability* st) {
  jmc_stability_summary s;
  check(jmc_stability_get_summary(st, &s));
  auto eigs = [&](int which) {
    std::size_t count = 0;
    check(jmc_stability_eigs(st, which, nullptr, 0, &count));
    std::vector<double> buf(2 * count);
    check(jmc_stability_eigs(st, which, buf.data(), count, &count));
    return complex_list(buf);
  };
  json r;
  r["alpha"] = s.alpha;
  r["energy"] = s.energy;
  r["omega_jm"] = s.omega_jm;
  r["c_squared"] = s.c_squared;
  r["c"] = s.c;
  r["c_over_omega"] = s.c_over_omega;
  r["analytic_eigenvalues"] = eigs(0);
  r["analytic_jordan_block"] = s.analytic_jordan_block != 0;
  r["verdict"] = jmc_verdict_name(s.verdict);
  if (s.has_monodromy) {
    std::size_t count = 0;
    check(jmc_stability_staircase(st, nullptr, 0, &count));
    std::vector<int> stair(count);
    check(jmc_stability_staircase(st, stair.data(), count, &count));
    json m;
    m["eigenvalues"] = eigs(1);
    m["raw_eigenvalues"] = eigs(2);
    m["unit_algebraic_multiplicity"] = s.unit_algebraic_multiplicity;
    m["unit_geometric_multiplicity"] = s.unit_geometric_multiplicity;
    m["unit_staircase"] = stair;
    m["defective_unit"] = s.defective_unit != 0;
    m["rank_threshold"] = s.rank_threshold;
    m["symplectic_residual"] = s.symplectic_residual;
    m["unit_circle_deviation"] = s.unit_circle_deviation;
    m["reciprocal_pair_error"] = s.reciprocal_pair_error;
    m["surface_match_error"] = s.surface_match_error;
    m["period"] = s.period;
    m["steps"] = s.steps;
    r["monodromy"] = m;
  }
  return r;
}

void cmd_stability_analytic(Run& run) {
  Loaded l;
  load(run, l);
  Stability st;
  check(jmc_stability_analytic(l.config.get(), {l.alpha, 0.0}, st.out()));
  run.emit(stability_report(st.get()));
}

void cmd_stability_monodromy(Run& run) {
  Loaded l;
  load(run, l);
  Stability st;
  check(jmc_stability_monodromy(l.config.get(), {l.alpha, 0.0}, run.tol, st.out()));
  run.tolerances["integration"] = run.tol;
  run.emit(stability_report(st.get()));
}

std::vector<double> parse_grid(const std::string& text) {
  const auto a = text.find(':');
  const auto b = text.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos)
    usage_error("--grid expects h0:h1:n");
  double h0 = 0.0, h1 = 0.0;
  long n = 0;
  try {
    h0 = std::stod(text.substr(0, a));
    h1 = std::stod(text.substr(a + 1, b - a - 1));
    n = std::stol(text.substr(b + 1));
  } catch (const std::exception&) {
    usage_error("--grid expects h0:h1:n");
  }
  if (n < 1) usage_error("--grid needs at least one point");
  std::vector<double> g;
  for (long i = 0; i < n; ++i) g.push_back(n == 1 ? h0 : h0 + (h1 - h0) * double(i) / double(n - 1));
  return g;
}

void cmd_stability_probe(Run& run, const std::string& grid, int samples) {
  Config fixture;
  Loaded l;
  const jmc_config* config = nullptr;
  if (run.input_path.empty()) {
    check(jmc_config_fixture("lagrange", 0.0, fixture.out()));
    config = fixture.get();
  } else {
    load(run, l);
    config = l.config.get();
  }
  if (!run.alpha) usage_error("--alpha is required");
  if (run.out_path.empty()) usage_error("--out is required");
  const std::vector<double> energies = parse_grid(grid);
  Probe probe;
  check(jmc_conjecture_probe(config, *run.alpha, energies.data(), energies.size(), samples,
                             *run.seed, probe.out()));
  std::ostringstream csv;
  csv << "energy,family,min_K,identity_residual\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < jmc_probe_size(probe.get()); ++i) {
    double h = 0.0, k = 0.0, res = 0.0;
    int fam = 0;
    check(jmc_probe_row(probe.get(), i, &h, &fam, &k, &res));
    worst = std::max(worst, res);
    csv << fmt(h) << ',' << jmc_plane_family_name(fam) << ',' << fmt(k) << ',' << fmt(res) << '\n';
  }
  write_text(run.out_path, csv.str());
  run.manifest(run.out_path);
  json r;
  r["rows"] = jmc_probe_size(probe.get());
  r["max_identity_residual"] = worst;
  std::cout << r.dump(2) << "\n";
}

// ---- dynamics ----

void cmd_evolve(Run& run, std::optional<double> t_final, std::optional<double> periods,
                double dt, bool rel_eq) {
  Loaded l;
  load(run, l);
  if (run.out_path.empty()) usage_error("--out is required");
  std::vector<double> v(2 * l.n, 0.0);
  double period = 0.0;
  if (rel_eq) {
    check(jmc_relative_equilibrium(l.config.get(), l.alpha, nullptr, &period, nullptr, v.data()));
  } else if (!jmc_problem_velocities(l.problem.get(), v.data())) {
    std::fill(v.begin(), v.end(), 0.0);
  }
  double tf = 0.0;
  if (periods) {
    if (!rel_eq) usage_error("--periods requires --relative-equilibrium");
    tf = *periods * period;
  } else if (t_final) {
    tf = *t_final;
  } else {
    usage_error("--t-final or --periods is required");
  }
  Traj traj;
  check(jmc_integrate(l.config.get(), v.data(), l.alpha, tf, run.tol, dt, traj.out()));
  check(jmc_trajectory_write_csv(traj.get(), run.out_path.c_str()));
  run.tolerances["rtol"] = run.tol;
  run.tolerances["atol"] = run.tol * 1e-2;
  run.manifest(run.out_path);
  jmc_trajectory_info info;
  check(jmc_trajectory_get_info(traj.get(), &info));
  double t_end = 0.0;
  check(jmc_trajectory_sample(traj.get(), info.samples - 1, &t_end, nullptr, nullptr));
  json r;
  r["samples"] = info.samples;
  r["t_end"] = t_end;
  r["truncated"] = info.truncated != 0;
  r["accepted_steps"] = info.accepted;
  r["rejected_steps"] = info.rejected;
  r["energy"] = info.energy;
  std::cout << r.dump(2) << "\n";
}

void cmd_diagnose(Run& run, const std::string& traj_path) {
  Traj traj;
  check(jmc_trajectory_read_csv(traj_path.c_str(), traj.out()));
  run.input_path = traj_path;
  Diag d;
  check(jmc_diagnostics_compute(traj.get(), -1, d.out()));
  jmc_drift drift;
  check(jmc_drift_summary(traj.get(), &drift));
  jmc_trajectory_info info;
  check(jmc_trajectory_get_info(traj.get(), &info));
  json rows = json::array();
  double dz_min = INFINITY, dz_max = -INFINITY;
  bool has_dz = false;
  for (std::size_t i = 0; i < jmc_diagnostics_size(d.get()); ++i) {
    jmc_diagnostics_row row;
    check(jmc_diagnostics_get_row(d.get(), i, &row));
    if (row.has_dziobek) {
      has_dz = true;
      dz_min = std::min(dz_min, row.dziobek);
      dz_max = std::max(dz_max, row.dziobek);
    }
  }
  json r;
  r["samples"] = info.samples;
  r["alpha"] = info.alpha;
  r["energy"] = info.energy;
  r["truncated"] = info.truncated != 0;
  r["drift"] = {{"energy", drift.energy},
                {"linear_momentum", drift.linear_momentum},
                {"angular_momentum", drift.angular_momentum},
                {"lagrange_jacobi_residual", drift.lj_residual}};
  if (has_dz) r["dziobek"] = {{"min", dz_min}, {"max", dz_max}};
  else r["dziobek"] = nullptr;
  run.emit(r);
}

void cmd_saari_check(Run& run, const std::string& traj_path) {
  Traj traj;
  check(jmc_trajectory_read_csv(traj_path.c_str(), traj.out()));
  run.input_path = traj_path;
  if (run.out_path.empty()) usage_error("--out is required");
  jmc_trajectory_info info;
  check(jmc_trajectory_get_info(traj.get(), &info));
  Saari s;
  check(jmc_saari_curvature(traj.get(), s.out()));
  std::ostringstream csv;
  csv << "t,K_saari,K_sectional,U,dU_dt,d2U_dt2\n";
  double kmax = 0.0, dev = 0.0;
  for (std::size_t i = 0; i < jmc_saari_size(s.get()); ++i) {
    jmc_saari_row row;
    check(jmc_saari_get_row(s.get(), i, &row));
    kmax = std::max(kmax, std::abs(row.curvature));
    dev = std::max(dev, std::abs(row.curvature - row.curvature_general));
    csv << fmt(row.t) << ',' << fmt(row.curvature) << ',' << fmt(row.curvature_general) << ','
        << fmt(row.potential) << ',' << fmt(row.dU_dt) << ',' << fmt(row.d2U_dt2) << '\n';
  }
  write_text(run.out_path, csv.str());
  run.tolerances["witness"] = run.tol;
  run.manifest(run.out_path);

  json r;
  r["samples"] = jmc_saari_size(s.get());
  r["max_abs_curvature"] = kmax;
  r["max_formula_deviation"] = kmax > 0 ? dev / kmax : dev;
  std::size_t nseg = 0;
  check(jmc_saari_flat_segments(s.get(), 1e-8, 10, nullptr, 0, &nseg));
  r["flat_segments"] = nseg;
  double c = 0.0, res = 0.0;
  const jmc_status fi = jmc_first_integral_check(traj.get(), &c, &res);
  if (fi == JMC_OK) r["first_integral"] = {{"C", c}, {"max_residual", res}};
  else if (fi == JMC_ERR_VANISHING_DERIVATIVE) r["first_integral"] = {{"error", jmc_status_name(fi)}};
  else check(fi);
  if (info.alpha == 2.0) {
    jmc_witness w;
    check(jmc_constant_potential_witness(traj.get(), run.tol, &w));
    json wj = {{"verdict", jmc_witness_verdict_name(w.verdict)},
               {"inertia_variation", w.inertia_variation},
               {"curvature_max", w.curvature_max},
               {"potential_variation", w.potential_variation}};
    if (w.has_mu_variation) wj["mu_variation"] = w.mu_variation;
    r["constant_potential_witness"] = wj;
  }
  std::cout << r.dump(2) << "\n";
}

int report_failure(const CliFailure& f) {
  json e = {{"error", {{"code", jmc_status_name(f.status)}, {"message", f.message}}}};
  std::cerr << e.dump() << "\n";
  return jmc_status_is_validation(f.status) ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Run run;
  run.argv.assign(argv, argv + argc);

  CLI::App app{"Jacobi-Maupertuis curvature and relative-equilibrium stability for the planar "
               "N-body problem with potential U = (1/alpha) sum m_i m_j / r_ij^alpha."};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads (fallback: JMCURV_THREADS)");

  auto add_input = [&](CLI::App* c) {
    c->add_option("--input", run.input_path, "Problem JSON: masses, positions, optional alpha, "
                                             "energy, velocities")
        ->required();
  };
  auto add_law = [&](CLI::App* c, bool with_energy) {
    c->add_option("--alpha", run.alpha, "Potential exponent (overrides the input file)");
    if (with_energy)
      c->add_option("--energy", run.energy, "Energy level h (overrides the input file)");
  };

  // cc
  auto* cc = app.add_subcommand("cc", "Central configurations")->require_subcommand(1);
  int max_iter = 0;
  auto* cc_find = cc->add_subcommand(
      "find", "Solve grad U(q) = lambda q by damped Gauss-Newton on the slice of centered "
              "configurations with I = 1 and body 1 on the positive real axis");
  add_input(cc_find);
  add_law(cc_find, true);
  run.tol = 1e-12;
  cc_find->add_option("--tol", run.tol, "Mass-norm residual tolerance")->capture_default_str();
  cc_find->add_option("--max-iter", max_iter, "Iteration cap (0: default)");
  cc_find->add_option("--out", run.out_path, "Output JSON (stdout when omitted)");

  auto* cc_verify = cc->add_subcommand(
      "verify", "Residual |grad U - lambda q| with lambda = -alpha U / I, and the curvature test "
                "K_q(q, iq) = -h alpha^2 U / (2 (h+U)^3 |q|^2) at the matched tolerance "
                "tau = eps^2 / (4 (h+U)^3)");
  add_input(cc_verify);
  add_law(cc_verify, true);
  double verify_tol = 1e-10;
  cc_verify->add_option("--tol", verify_tol, "Gradient residual tolerance")->capture_default_str();
  cc_verify->add_option("--out", run.out_path, "Output JSON (stdout when omitted)");

  // curvature
  auto* curv = app.add_subcommand("curvature", "Jacobi-Maupertuis curvature")->require_subcommand(1);
  std::string plane = "q,iq";
  auto* sect = curv->add_subcommand(
      "sectional", "Sectional curvature of (h+U) ds^2: (h+U)^3 K = 3/4 (dU(u)^2 + dU(v)^2) - "
                   "1/4 |grad U|^2 - (h+U)/2 (D^2U(u,u) + D^2U(v,v)) for orthonormal u, v; for "
                   "q,iq also the holomorphic sectional curvature and its closed form");
  add_input(sect);
  add_law(sect, true);
  sect->add_option("--plane", plane,
                   "Two of q, iq, 1 separated by a comma, or a JSON file {\"u\": [...], \"v\": [...]}")
      ->capture_default_str();
  sect->add_option("--out", run.out_path, "Output JSON (stdout when omitted)");

  int samples = 100;
  std::uint64_t seed = 0;
  auto* scan = curv->add_subcommand(
      "scan", "Random unit v orthogonal to C q: curvature of the planes (q,v), (iq,iv), (v,iv), "
              "(q,iq) and the identity K(q,iq) + K(v,iv) = K(q,v) + K(iq,iv)");
  add_input(scan);
  add_law(scan, true);
  scan->add_option("--samples", samples, "Number of sampled v")->capture_default_str();
  scan->add_option("--seed", seed, "Random seed")->required();
  scan->add_option("--out", run.out_path, "Output CSV")->required();

  // stability
  auto* stab = app.add_subcommand("stability", "Relative equilibria")->require_subcommand(1);
  auto* analytic = stab->add_subcommand(
      "analytic", "Normal Jacobi field lambdaddot = c^2 lambda with c^2 = -K_q(q, iq) along the "
                  "relative equilibrium; return-map eigenvalues exp(+-2 pi c / omega)");
  add_input(analytic);
  add_law(analytic, false);
  analytic->add_option("--out", run.out_path, "Output JSON (stdout when omitted)");

  auto* mono = stab->add_subcommand(
      "monodromy", "Monodromy of the variational equations along exp(i Omega t) q over one "
                   "period, with the Jordan structure of eigenvalue 1 from an SVD rank staircase");
  add_input(mono);
  add_law(mono, false);
  double mono_tol = 1e-12;
  mono->add_option("--tol", mono_tol, "Integration tolerance")->capture_default_str();
  mono->add_option("--out", run.out_path, "Output JSON (stdout when omitted)");

  std::string grid;
  auto* probe = stab->add_subcommand(
      "probe", "For 0 < alpha < 2: minimal sampled K over the plane families (q,v), (iq,iv), "
               "(v,iv) on an energy grid (default configuration: Lagrange triangle)");
  probe->add_option("--input", run.input_path, "Central configuration JSON");
  add_law(probe, false);
  probe->add_option("--grid", grid, "Energy grid h0:h1:n")->required();
  probe->add_option("--samples", samples, "Samples per energy")->capture_default_str();
  probe->add_option("--seed", seed, "Random seed")->required();
  probe->add_option("--out", run.out_path, "Output CSV")->required();

  // evolve
  std::optional<double> t_final, periods;
  double dt = 0.0;
  bool rel_eq = false;
  double evolve_tol = 1e-12;
  auto* evolve = app.add_subcommand(
      "evolve", "Integrate qddot = grad U(q) with adaptive Dormand-Prince 5(4); stops at the "
                "collision guard 1e-9 x initial diameter");
  add_input(evolve);
  add_law(evolve, false);
  evolve->add_option("--t-final", t_final, "Final time");
  evolve->add_option("--periods", periods, "Final time in periods of the relative equilibrium");
  evolve->add_flag("--relative-equilibrium", rel_eq,
                   "Start from the rigid rotation i Omega q, Omega^2 = alpha U / I");
  evolve->add_option("--tol", evolve_tol, "Relative tolerance")->capture_default_str();
  evolve->add_option("--dt", dt, "Uniform sampling step (0: every accepted step)");
  evolve->add_option("--out", run.out_path, "Output CSV")->required();

  // diagnose
  std::string traj_path;
  auto* diag = app.add_subcommand(
      "diagnose", "Drift of H, L, C; Lagrange-Jacobi residual |Iddot - 4 H - (4 - 2 alpha) U|; "
                  "Dziobek constant h |C|^(2 alpha / (2 - alpha)) for alpha != 2");
  diag->add_option("--traj", traj_path, "Trajectory CSV from evolve")->required();
  diag->add_option("--out", run.out_path, "Output JSON (stdout when omitted)");

  // saari
  auto* saari = app.add_subcommand("saari", "Saari-type diagnostics")->require_subcommand(1);
  double witness_tol = 1e-8;
  auto* saari_check = saari->add_subcommand(
      "check", "Curvature of the plane (qdot, 1) along a trajectory: "
               "8 (h+U)^4 K = 3 (dU/dt)^2 - 2 (h+U) d2U/dt2, the first integral "
               "C (dU/dt)^2 = (h+U)^3, and for alpha = 2 the constant-potential witness");
  saari_check->add_option("--traj", traj_path, "Trajectory CSV from evolve")->required();
  saari_check->add_option("--tol", witness_tol, "Witness tolerance")->capture_default_str();
  saari_check->add_option("--out", run.out_path, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_failure({JMC_ERR_INVALID_ARGUMENT, e.what()});
  }

  if (threads == 0) {
    if (const char* env = std::getenv("JMCURV_THREADS")) threads = static_cast<unsigned>(std::atoi(env));
  }
  jmc_set_max_threads(threads);
  if (scan->parsed() || probe->parsed()) run.seed = seed;

  try {
    if (cc_find->parsed()) cmd_cc_find(run, max_iter);
    else if (cc_verify->parsed()) {
      run.tol = verify_tol;
      cmd_cc_verify(run);
    } else if (sect->parsed()) cmd_curvature_sectional(run, plane);
    else if (scan->parsed()) cmd_curvature_scan(run, samples);
    else if (analytic->parsed()) cmd_stability_analytic(run);
    else if (mono->parsed()) {
      run.tol = mono_tol;
      cmd_stability_monodromy(run);
    } else if (probe->parsed()) cmd_stability_probe(run, grid, samples);
    else if (evolve->parsed()) {
      run.tol = evolve_tol;
      cmd_evolve(run, t_final, periods, dt, rel_eq);
    } else if (diag->parsed()) cmd_diagnose(run, traj_path);
    else if (saari_check->parsed()) {
      run.tol = witness_tol;
      cmd_saari_check(run, traj_path);
    }
  } catch (const CliFailure& f) {
    return report_failure(f);
  } catch (const json::exception& e) {
    return report_failure({JMC_ERR_PARSE, e.what()});
  }
  return 0;
}
