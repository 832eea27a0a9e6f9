#include "dynamics.hpp"

#include <cmath>

#include "central_config.hpp"
#include "ode.hpp"

namespace jmcurv {

namespace {

const cplx I1{0.0, 1.0};

RVec pack(const CVec& q, const CVec& v) {
  const Eigen::Index n = q.size();
  RVec y(4 * n);
  y.head(2 * n) = real_view(q);
  y.tail(2 * n) = real_view(v);
  return y;
}

PhaseState unpack(const RVec& y, double t) {
  const Eigen::Index n2 = y.size() / 2;
  return {from_real(y.head(n2)), from_real(y.tail(n2)), t};
}

// Collects accepted steps (or a uniform grid) into phase states.
template <class Make>
class Sampler {
 public:
  Sampler(double t0, double t_final, double dt, Make make)
      : t0_(t0), t_final_(t_final), dt_(dt), make_(std::move(make)) {}

  template <class Out>
  void add(const ode::DenseStep& step, Out& out) {
    if (dt_ <= 0.0) {
      out.push_back(make_(step.y1, step.t1()));
      return;
    }
    const double dir = t_final_ >= t0_ ? 1.0 : -1.0;
    while (true) {
      const double tk = t0_ + dir * dt_ * static_cast<double>(next_);
      if (dir * (tk - step.t1()) > 0.0 || dir * (tk - t_final_) > 0.0) break;
      out.push_back(make_(step(tk), tk));
      ++next_;
    }
  }

  // Closes a uniform grid with the terminal state of the run.
  template <class Out>
  void finish(const ode::DenseStep& last, Out& out) {
    if (dt_ <= 0.0 || out.empty()) return;
    if (out.back().t != last.t1()) out.push_back(make_(last.y1, last.t1()));
  }

  std::size_t next_ = 1;

 private:
  double t0_, t_final_, dt_;
  Make make_;
};

}  // namespace

double min_pairwise_distance(const CVec& q) {
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < q.size(); ++i)
    for (Eigen::Index j = i + 1; j < q.size(); ++j) m = std::min(m, std::abs(q[i] - q[j]));
  return m;
}

double diameter(const CVec& q) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i)
    for (Eigen::Index j = i + 1; j < q.size(); ++j) m = std::max(m, std::abs(q[i] - q[j]));
  return m;
}

Trajectory integrate(const SystemPtr& sys, const PhaseState& initial, const PotentialLaw& law,
                     double t_final, double tol, const IntegrateOptions& options) {
  validate(law);
  if (!(tol > 0.0)) fail(ErrorCode::invalid_argument, "tolerance must be positive");
  if (!std::isfinite(t_final)) fail(ErrorCode::invalid_argument, "t_final must be finite");
  check_dimension(*sys, initial.qdot, "qdot");
  const Configuration q0(sys, initial.q);  // validates collision-free start

  Trajectory traj;
  traj.system = sys;
  traj.law = {law.alpha, conserved_quantities(q0, initial.qdot, law).energy};
  traj.stats.rtol = tol;
  traj.stats.atol = tol * options.atol_ratio;
  traj.stats.collision_distance = kCollisionGuard * q0.diameter();

  const auto masses = sys->masses();
  const Eigen::Index n = static_cast<Eigen::Index>(sys->size());
  const double alpha = law.alpha;
  CVec qbuf(n), grad(n);
  auto rhs = [&](double, const RVec& y, RVec& dy) {
    for (Eigen::Index k = 0; k < n; ++k) qbuf[k] = {y[2 * k], y[2 * k + 1]};
    kernel::gradient(masses, qbuf, alpha, grad);
    dy.resize(y.size());
    dy.head(2 * n) = y.tail(2 * n);
    dy.tail(2 * n) = real_view(grad);
  };

  traj.samples.push_back(initial);
  auto make = [](const RVec& y, double t) { return unpack(y, t); };
  Sampler sampler(initial.t, t_final, options.sample_dt, make);
  ode::Options opt;
  opt.rtol = traj.stats.rtol;
  opt.atol = traj.stats.atol;
  ode::DenseStep last;
  bool have_step = false;
  const double guard = traj.stats.collision_distance;

  opt.throw_on_underflow = false;
  const ode::Stats st =
      ode::dormand_prince(rhs, initial.t, pack(initial.q, initial.qdot), t_final, opt,
                          [&](const ode::DenseStep& step) {
                            last = step;
                            have_step = true;
                            sampler.add(step, traj.samples);
                            CVec qend = from_real(step.y1.head(2 * n));
                            if (min_pairwise_distance(qend) < guard) {
                              traj.stats.truncated = true;
                              return false;
                            }
                            return true;
                          });
  if (st.underflow) {
    // Step underflow close to a collision is the guard firing late.
    const double dmin = have_step ? min_pairwise_distance(from_real(last.y1.head(2 * n)))
                                  : q0.min_distance();
    if (dmin > 1e-3 * q0.diameter())
      fail(ErrorCode::step_underflow, "integrator step size underflow away from collision");
    traj.stats.truncated = true;
  }
  if (have_step) sampler.finish(last, traj.samples);
  traj.stats.accepted = st.accepted;
  traj.stats.rejected = st.rejected;
  traj.stats.rhs_evals = st.rhs_evals;
  return traj;
}

Trajectory integrate(const MassSystem& sys, const PhaseState& initial, const PotentialLaw& law,
                     double t_final, double tol, const IntegrateOptions& options) {
  return integrate(std::make_shared<const MassSystem>(sys), initial, law, t_final, tol, options);
}

RelativeEquilibrium relative_equilibrium(const Configuration& q_central,
                                         const PotentialLaw& law) {
  const double res = central_residual(q_central, law);
  const double scale = mass_norm(q_central.system(), mass_gradient(q_central, law));
  if (res > 1e-8 * scale) fail(ErrorCode::non_central, "configuration is not central");
  const double u = potential_value(q_central, law);
  const double inertia = moment_of_inertia(q_central);
  RelativeEquilibrium re;
  re.omega = std::sqrt(law.alpha * u / inertia);
  re.period = 2.0 * M_PI / re.omega;
  re.energy = 0.5 * re.omega * re.omega * inertia - u;
  return re;
}

PhaseState relative_equilibrium_state(const Configuration& q_central, const PotentialLaw& law) {
  const RelativeEquilibrium re = relative_equilibrium(q_central, law);
  return {q_central.positions(), I1 * re.omega * q_central.positions(), 0.0};
}

HomographicSolution homographic(const Configuration& q_central, const PotentialLaw& law, cplx z0,
                                cplx zdot0, double t_final, double tol,
                                const IntegrateOptions& options) {
  validate(law);
  if (std::abs(z0) == 0.0) fail(ErrorCode::invalid_argument, "z0 must be nonzero");
  relative_equilibrium(q_central, law);  // centrality gate
  const double lambda = lambda_for(q_central, law);
  const double alpha = law.alpha;
  const CVec& q = q_central.positions();

  HomographicSolution out;
  Trajectory& traj = out.trajectory;
  traj.system = q_central.system_ptr();
  traj.law = {alpha, conserved_quantities(q_central.with_positions(z0 * q), zdot0 * q, law).energy};
  traj.stats.rtol = tol;
  traj.stats.atol = tol * options.atol_ratio;
  const double guard = kCollisionGuard * std::abs(z0);
  traj.stats.collision_distance = guard * q_central.diameter();

  auto rhs = [&](double, const RVec& y, RVec& dy) {
    const cplx z{y[0], y[1]};
    const cplx a = lambda * z * std::pow(std::norm(z), -0.5 * alpha - 1.0);
    dy.resize(4);
    dy << y[2], y[3], a.real(), a.imag();
  };
  auto make = [&](const RVec& y, double t) {
    const cplx z{y[0], y[1]}, zd{y[2], y[3]};
    out.z.push_back(z);
    return PhaseState{z * q, zd * q, t};
  };
  out.z.push_back(z0);
  traj.samples.push_back({z0 * q, zdot0 * q, 0.0});
  Sampler sampler(0.0, t_final, options.sample_dt, make);
  ode::Options opt;
  opt.rtol = tol;
  opt.atol = traj.stats.atol;
  RVec y0(4);
  y0 << z0.real(), z0.imag(), zdot0.real(), zdot0.imag();
  ode::DenseStep last;
  bool have_step = false;
  opt.throw_on_underflow = false;
  const ode::Stats st =
      ode::dormand_prince(rhs, 0.0, y0, t_final, opt, [&](const ode::DenseStep& step) {
        last = step;
        have_step = true;
        sampler.add(step, traj.samples);
        if (std::abs(cplx{step.y1[0], step.y1[1]}) < guard) {
          out.collapsed = true;
          return false;
        }
        return true;
      });
  if (st.underflow) {
    const double zmin = have_step ? std::abs(cplx{last.y1[0], last.y1[1]}) : std::abs(z0);
    if (zmin > 1e-3 * std::abs(z0))
      fail(ErrorCode::step_underflow, "integrator step size underflow away from collapse");
    out.collapsed = true;
  }
  if (have_step) sampler.finish(last, traj.samples);
  traj.stats.truncated = out.collapsed;
  traj.stats.accepted = st.accepted;
  traj.stats.rejected = st.rejected;
  traj.stats.rhs_evals = st.rhs_evals;
  return out;
}

Diagnostics diagnostics(const Trajectory& traj) {
  return diagnostics(traj, traj.law.alpha != 2.0);
}

Diagnostics diagnostics(const Trajectory& traj, bool with_dziobek) {
  const double alpha = traj.law.alpha;
  if (with_dziobek && alpha == 2.0)
    fail(ErrorCode::unsupported_exponent, "the Dziobek constant is undefined for alpha = 2");
  const MassSystem& sys = *traj.system;
  const auto masses = sys.masses();
  Diagnostics d;
  if (with_dziobek) d.dziobek.emplace();
  const double h0 = traj.law.energy;
  CVec grad;
  for (const PhaseState& s : traj.samples) {
    const double u = kernel::value(masses, s.q, alpha);
    kernel::gradient(masses, s.q, alpha, grad);
    const double kin = mass_dot(sys, s.qdot, s.qdot);
    const double inertia = mass_dot(sys, s.q, s.q);
    const double h = 0.5 * kin - u;
    const double c = mass_dot(sys, s.qdot, I1 * s.q);
    const double iddot = 2.0 * kin + 2.0 * mass_dot(sys, s.q, grad);
    d.t.push_back(s.t);
    d.energy.push_back(h);
    d.linear_momentum.push_back(hermitian_product(sys, s.qdot, unit_translation(sys.size())));
    d.angular_momentum.push_back(c);
    d.inertia.push_back(inertia);
    d.potential.push_back(u);
    d.lj_residual.push_back(std::abs(iddot - 4.0 * h0 - (4.0 - 2.0 * alpha) * u));
    d.mu.push_back(std::pow(inertia, 0.5 * alpha) * u);
    if (with_dziobek)
      d.dziobek->push_back(h * std::pow(std::abs(c), 2.0 * alpha / (2.0 - alpha)));
  }
  return d;
}

DriftSummary drift_summary(const Trajectory& traj) {
  const Diagnostics d = diagnostics(traj, false);
  DriftSummary out;
  if (d.t.empty()) return out;
  const MassSystem& sys = *traj.system;
  const PhaseState& s0 = traj.samples.front();
  const double u0 = d.potential.front();
  const double h0 = d.energy.front();
  const double escale = std::abs(h0) > 1e-3 * u0 ? std::abs(h0) : u0;
  const double vnorm = mass_norm(sys, s0.qdot);
  const double lscale = std::max(std::sqrt(sys.total_mass()) * vnorm, 1e-300);
  const double cscale =
      std::max({std::abs(d.angular_momentum.front()), std::sqrt(d.inertia.front()) * vnorm, 1e-300});
  for (std::size_t i = 0; i < d.t.size(); ++i) {
    out.energy = std::max(out.energy, std::abs(d.energy[i] - h0) / escale);
    out.linear_momentum =
        std::max(out.linear_momentum, std::abs(d.linear_momentum[i] - d.linear_momentum[0]) / lscale);
    out.angular_momentum = std::max(
        out.angular_momentum, std::abs(d.angular_momentum[i] - d.angular_momentum[0]) / cscale);
    out.lj_residual = std::max(out.lj_residual, d.lj_residual[i]);
  }
  return out;
}

}  // namespace jmcurv
