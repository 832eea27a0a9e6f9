#include "central_config.hpp"

#include <cmath>
#include <optional>

namespace jmcurv {

double lambda_for(const Configuration& q, const PotentialLaw& law) {
  const CVec grad = mass_gradient(q, law);
  return mass_dot(q.system(), grad, q.positions()) / moment_of_inertia(q);
}

double central_residual(const Configuration& q, const PotentialLaw& law) {
  const CVec grad = mass_gradient(q, law);
  const double lambda = mass_dot(q.system(), grad, q.positions()) / moment_of_inertia(q);
  return mass_norm(q.system(), grad - lambda * q.positions());
}

Configuration project_to_gauge_slice(const Configuration& q) {
  Configuration c = q.recentered();
  c = c.scaled(1.0 / std::sqrt(moment_of_inertia(c)));
  const cplx first = c.positions()[0];
  if (std::abs(first) < 1e-12)
    fail(ErrorCode::degenerate_input,
         "first body sits at the center of mass; the rotation gauge cannot be fixed");
  return c.rotated(-std::arg(first));
}

namespace {

struct SliceSystem {
  Eigen::Index n;
  const MassSystem& sys;
  double alpha;

  // Residual: sqrt(m)-weighted (grad U - lambda q), center of mass, I - 1, Im q_1.
  RVec residual(const CVec& q) const {
    const auto masses = sys.masses();
    CVec grad;
    kernel::gradient(masses, q, alpha, grad);
    const double inertia = mass_dot(sys, q, q);
    const double lambda = mass_dot(sys, grad, q) / inertia;
    RVec g(2 * n + 4);
    for (Eigen::Index k = 0; k < n; ++k) {
      const cplx f = std::sqrt(masses[k]) * (grad[k] - lambda * q[k]);
      g[2 * k] = f.real();
      g[2 * k + 1] = f.imag();
    }
    const cplx com = center_of_mass(sys, q);
    g[2 * n] = com.real();
    g[2 * n + 1] = com.imag();
    g[2 * n + 2] = inertia - 1.0;
    g[2 * n + 3] = q[0].imag();
    return g;
  }

  RMat jacobian(const CVec& q) const {
    const auto masses = sys.masses();
    CVec grad;
    kernel::gradient(masses, q, alpha, grad);
    RMat hess;
    kernel::hessian_matrix(masses, q, alpha, hess);
    const double inertia = mass_dot(sys, q, q);
    const double dUq = mass_dot(sys, grad, q);
    const double lambda = dUq / inertia;
    const auto qr = real_view(q);
    const auto gr = real_view(grad);
    RVec w(2 * n);  // mass weights per real coordinate
    for (Eigen::Index k = 0; k < n; ++k) w[2 * k] = w[2 * k + 1] = masses[k];

    // d lambda = (d<grad U, q>) / I - <grad U, q> dI / I^2, with
    // d<grad U, q>(e) = <Hess e, q> + <grad U, e> and dI(e) = 2 <q, e>.
    RVec hq = hess.transpose() * w.cwiseProduct(qr);  // <Hess e, q>
    RVec dlambda = (hq + w.cwiseProduct(gr)) / inertia -
                   dUq * 2.0 * w.cwiseProduct(qr) / (inertia * inertia);

    RMat jac = RMat::Zero(2 * n + 4, 2 * n);
    RMat dF = hess - lambda * RMat::Identity(2 * n, 2 * n) - qr * dlambda.transpose();
    for (Eigen::Index r = 0; r < 2 * n; ++r) jac.row(r) = std::sqrt(w[r]) * dF.row(r);
    for (Eigen::Index k = 0; k < n; ++k) {
      jac(2 * n, 2 * k) = masses[k] / sys.total_mass();
      jac(2 * n + 1, 2 * k + 1) = masses[k] / sys.total_mass();
    }
    jac.row(2 * n + 2) = 2.0 * w.cwiseProduct(qr).transpose();
    jac(2 * n + 3, 1) = 1.0;
    return jac;
  }
};

}  // namespace

CentralConfigResult solve_central(const Configuration& seed, const PotentialLaw& law, double tol,
                                  const CentralSolverOptions& options) {
  validate(law);
  if (!(tol > 0.0)) fail(ErrorCode::invalid_argument, "tolerance must be positive");
  const MassSystem& sys = seed.system();
  Configuration current = project_to_gauge_slice(seed);
  const SliceSystem slice{static_cast<Eigen::Index>(sys.size()), sys, law.alpha};

  RVec g = slice.residual(current.positions());
  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    const double res = central_residual(current, law);
    if (res <= tol) {
      Configuration final_cfg = project_to_gauge_slice(current);
      return {final_cfg, lambda_for(final_cfg, law), central_residual(final_cfg, law), iter};
    }
    if (iter == options.max_iterations) break;

    const RMat jac = slice.jacobian(current.positions());
    const RVec step = jac.completeOrthogonalDecomposition().solve(-g);
    const double merit = g.squaredNorm();
    double t = 1.0;
    std::optional<Configuration> accepted;
    RVec accepted_g;
    for (int h = 0; h <= options.max_halvings; ++h, t *= 0.5) {
      CVec trial = current.positions();
      real_view(trial) += t * step;
      try {
        Configuration cand = current.with_positions(std::move(trial));
        RVec cand_g = slice.residual(cand.positions());
        if (cand_g.allFinite() && cand_g.squaredNorm() < merit) {
          accepted.emplace(std::move(cand));
          accepted_g = std::move(cand_g);
          break;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::collision) throw;
      }
    }
    if (!accepted) {
      // No descent along the Gauss-Newton direction; the iterate cannot improve.
      break;
    }
    current = *accepted;
    g = std::move(accepted_g);
  }
  fail(ErrorCode::non_convergence,
       "central configuration solver did not reach tolerance " + std::to_string(tol) +
           " (residual " + std::to_string(central_residual(current, law)) + ")");
}

}  // namespace jmcurv
