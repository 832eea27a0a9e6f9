#include "stability.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "central_config.hpp"
#include "ode.hpp"

namespace jmcurv {

namespace {

const cplx I1{0.0, 1.0};

bool is_strong_critical(double alpha) { return std::abs(alpha - 2.0) < 1e-12; }

struct SurfaceData {
  RelativeEquilibrium re;
  PotentialLaw law;  // energy of the relative equilibrium
  double omega_jm;
  double c_squared;
};

SurfaceData surface_data(const Configuration& q, const PotentialLaw& law) {
  const RelativeEquilibrium re = relative_equilibrium(q, law);
  const PotentialLaw at_re{law.alpha, re.energy};
  const CVec& x = q.positions();
  const double k = sectional_curvature(q, TangentPlane::orthonormal(q.system(), x, I1 * x), at_re);
  return {re, at_re, jm_unit_speed_omega(q, at_re), -k};
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::spectrally_unstable: return "spectrally_unstable";
    case Verdict::linearly_unstable: return "linearly_unstable";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

double jm_unit_speed_omega(const Configuration& q_central, const PotentialLaw& law) {
  const double rho = conformal_factor(q_central, law);
  return 1.0 / std::sqrt(rho * moment_of_inertia(q_central));
}

StabilityReport analytic_return_eigs(const Configuration& q_central, const PotentialLaw& law) {
  validate(law);
  const SurfaceData sd = surface_data(q_central, law);
  StabilityReport rep;
  rep.alpha = law.alpha;
  rep.energy = sd.law.energy;
  rep.omega_jm = sd.omega_jm;
  rep.c_squared = sd.c_squared;
  const double jm_period = 2.0 * M_PI / sd.omega_jm;
  if (is_strong_critical(law.alpha)) {
    // c = 0: lambda(s) = lambda0 + s lambdadot0, a unipotent Jordan block.
    rep.c = 0.0;
    rep.c_over_omega = 0.0;
    rep.analytic_eigs = {1.0, 1.0};
    rep.analytic_jordan_block = true;
    rep.verdict = Verdict::linearly_unstable;
  } else if (sd.c_squared > 0.0) {
    rep.c = std::sqrt(sd.c_squared);
    rep.c_over_omega = rep.c / sd.omega_jm;
    rep.analytic_eigs = {std::exp(rep.c * jm_period), std::exp(-rep.c * jm_period)};
    rep.verdict = std::abs(rep.analytic_eigs[0]) > 1.0 + 1e-9 ? Verdict::spectrally_unstable
                                                              : Verdict::inconclusive;
  } else {
    // Positive curvature on the surface: the normal Jacobi field oscillates.
    const double w = std::sqrt(-sd.c_squared);
    rep.c = 0.0;
    rep.c_over_omega = 0.0;
    rep.analytic_eigs = {std::polar(1.0, w * jm_period), std::polar(1.0, -w * jm_period)};
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

JacobiFieldSeries jacobi_field_integrate(const Configuration& q_central, const PotentialLaw& law,
                                         double lambda0, double lambdadot0, double s_final) {
  validate(law);
  if (law.alpha < 2.0 - 1e-12)
    fail(ErrorCode::unsupported_exponent, "the Jacobi field model needs alpha >= 2");
  const SurfaceData sd = surface_data(q_central, law);
  const double c2 = is_strong_critical(law.alpha) ? 0.0 : sd.c_squared;
  JacobiFieldSeries out;
  out.s.push_back(0.0);
  out.value.push_back(lambda0);
  out.derivative.push_back(lambdadot0);
  RVec y0(2);
  y0 << lambda0, lambdadot0;
  ode::Options opt;
  opt.rtol = 1e-13;
  opt.atol = 1e-15;
  ode::dormand_prince(
      [&](double, const RVec& y, RVec& dy) {
        dy.resize(2);
        dy << y[1], c2 * y[0];
      },
      0.0, y0, s_final, opt,
      [&](const ode::DenseStep& step) {
        out.s.push_back(step.t1());
        out.value.push_back(step.y1[0]);
        out.derivative.push_back(step.y1[1]);
        return true;
      });
  return out;
}

namespace {

using CMat = Eigen::MatrixXcd;

// Exchanges the adjacent diagonal entries k, k+1 of an upper triangular t.
void swap_schur(CMat& t, CMat& q, Eigen::Index k) {
  cplx x1 = t(k, k + 1), x2 = t(k + 1, k + 1) - t(k, k);
  const double r = std::hypot(std::abs(x1), std::abs(x2));
  if (r == 0.0) return;
  x1 /= r;
  x2 /= r;
  Eigen::Matrix2cd g;
  g << x1, -std::conj(x2), x2, std::conj(x1);
  t.middleRows(k, 2) = g.adjoint() * t.middleRows(k, 2);
  t.middleCols(k, 2) = t.middleCols(k, 2) * g;
  q.middleCols(k, 2) = q.middleCols(k, 2) * g;
  t(k + 1, k) = 0.0;
}

}  // namespace

UnitSpectrum unit_eigen_structure(const RMat& m, double rel_threshold, double cluster_radius) {
  const Eigen::Index n = m.rows();
  Eigen::ComplexSchur<CMat> schur(m.cast<cplx>());
  CMat t = schur.matrixT(), q = schur.matrixU();
  Eigen::Index cluster = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(t(i, i) - 1.0) >= cluster_radius) continue;
    for (Eigen::Index k = i; k > cluster; --k) swap_schur(t, q, k - 1);
    ++cluster;
  }

  UnitSpectrum out;
  const CMat t11 = t.topLeftCorner(cluster, cluster);
  out.threshold = rel_threshold * std::max(1.0, t11.norm());
  const CMat a = t11 - CMat::Identity(cluster, cluster);
  CMat w = CMat::Identity(cluster, cluster);
  Eigen::Index offset = 0;
  while (offset < cluster) {
    const Eigen::Index rest = cluster - offset;
    const CMat b = (w.adjoint() * a * w).bottomRightCorner(rest, rest);
    Eigen::JacobiSVD<CMat> svd(b, Eigen::ComputeFullV);
    const RVec& sv = svd.singularValues();
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv[i] < out.threshold) ++k;
    if (k == 0) break;
    // Singular values are sorted descending: the last k right vectors span the kernel.
    const CMat& v = svd.matrixV();
    CMat reordered(rest, rest);
    reordered.leftCols(k) = v.rightCols(k);
    reordered.rightCols(rest - k) = v.leftCols(rest - k);
    w.rightCols(rest) = w.rightCols(rest) * reordered;
    out.staircase.push_back(static_cast<int>(k));
    offset += k;
  }
  out.algebraic = static_cast<int>(offset);
  out.geometric = out.staircase.empty() ? 0 : out.staircase.front();
  if (offset < cluster) {
    const CMat rest = (w.adjoint() * t11 * w).bottomRightCorner(cluster - offset, cluster - offset);
    Eigen::ComplexEigenSolver<CMat> es(rest, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.remaining.push_back(es.eigenvalues()[i]);
  }
  for (Eigen::Index i = cluster; i < n; ++i) out.remaining.push_back(t(i, i));
  return out;
}

StabilityReport numerical_monodromy(const Configuration& q_central, const PotentialLaw& law,
                                    double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::invalid_argument, "tolerance must be positive");
  StabilityReport rep = analytic_return_eigs(q_central, law);
  const SurfaceData sd = surface_data(q_central, law);
  const double omega = sd.re.omega;
  const double period = sd.re.period;
  if (!(omega > 0.0) || !std::isfinite(period))
    fail(ErrorCode::non_convergence, "relative equilibrium has no finite period");

  const MassSystem& sys = q_central.system();
  const auto masses = sys.masses();
  const Eigen::Index n = static_cast<Eigen::Index>(sys.size());
  const Eigen::Index dim = 4 * n;
  const CVec& q0 = q_central.positions();
  const double alpha = law.alpha;

  CVec qt(n);
  RMat hess;
  auto rhs = [&](double t, const RVec& y, RVec& dy) {
    qt = std::polar(1.0, omega * t) * q0;
    kernel::hessian_matrix(masses, qt, alpha, hess);
    dy.resize(y.size());
    Eigen::Map<const RMat> phi(y.data(), dim, dim);
    Eigen::Map<RMat> dphi(dy.data(), dim, dim);
    dphi.topRows(2 * n) = phi.bottomRows(2 * n);
    dphi.bottomRows(2 * n).noalias() = hess * phi.topRows(2 * n);
  };
  RMat id = RMat::Identity(dim, dim);
  RVec y0 = Eigen::Map<RVec>(id.data(), dim * dim);
  ode::Options opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;
  RVec yend = y0;
  const ode::Stats st = ode::dormand_prince(rhs, 0.0, y0, period, opt, [&](const ode::DenseStep& s) {
    yend = s.y1;
    return true;
  });
  if (std::abs(st.t_end - period) > 1e-12 * period)
    fail(ErrorCode::non_convergence, "variational integration did not reach the period");

  MonodromyDetails md;
  md.period = period;
  md.steps = st.accepted;
  // Rows and columns: (x_1, y_1, ..., x_N, y_N, vx_1, vy_1, ..., vx_N, vy_N).
  md.matrix = Eigen::Map<RMat>(yend.data(), dim, dim);
  const RMat& mat = md.matrix;

  Eigen::EigenSolver<RMat> es(mat, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) md.raw_eigs.push_back(es.eigenvalues()[i]);

  const UnitSpectrum us = unit_eigen_structure(mat);
  md.rank_threshold = us.threshold;
  md.unit_staircase = us.staircase;
  md.unit_algebraic_multiplicity = us.algebraic;
  md.unit_geometric_multiplicity = us.geometric;
  md.defective_unit = us.algebraic > us.geometric;

  rep.monodromy_eigs.assign(static_cast<std::size_t>(us.algebraic), cplx{1.0, 0.0});
  rep.monodromy_eigs.insert(rep.monodromy_eigs.end(), us.remaining.begin(), us.remaining.end());

  // Canonical coordinates (q, p = m qdot).
  RVec scale(dim);
  for (Eigen::Index k = 0; k < n; ++k) {
    scale[2 * k] = scale[2 * k + 1] = 1.0;
    scale[2 * n + 2 * k] = scale[2 * n + 2 * k + 1] = masses[k];
  }
  const RMat mcan = scale.asDiagonal() * mat * scale.cwiseInverse().asDiagonal();
  RMat jstd = RMat::Zero(dim, dim);
  jstd.topRightCorner(2 * n, 2 * n) = RMat::Identity(2 * n, 2 * n);
  jstd.bottomLeftCorner(2 * n, 2 * n) = -RMat::Identity(2 * n, 2 * n);
  const double mnorm = mcan.operatorNorm();
  md.symplectic_residual =
      (mcan.transpose() * jstd * mcan - jstd).cwiseAbs().maxCoeff() / std::max(1.0, mnorm * mnorm);

  for (const cplx& l : rep.monodromy_eigs) {
    md.unit_circle_deviation = std::max(md.unit_circle_deviation, std::abs(std::abs(l) - 1.0));
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& mu : rep.monodromy_eigs) best = std::min(best, std::abs(l * mu - 1.0));
    md.reciprocal_pair_error = std::max(md.reciprocal_pair_error, best);
  }

  md.surface_match_error = 0.0;
  for (const cplx& a : rep.analytic_eigs) {
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& l : rep.monodromy_eigs) best = std::min(best, std::abs(l - a) / std::abs(a));
    md.surface_match_error = std::max(md.surface_match_error, best);
  }
  rep.monodromy = std::move(md);

  return rep;
}

std::vector<ProbeRow> conjecture_probe(const Configuration& q_central, double alpha,
                                       std::span<const double> energy_grid, int samples,
                                       std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 2.0))
    fail(ErrorCode::unsupported_exponent, "the probe covers 0 < alpha < 2");
  std::vector<ProbeRow> rows;
  for (double h : energy_grid) {
    const PotentialLaw law{alpha, h};
    const PlaneScan scan = plane_scan(q_central, law, samples, seed);
    for (PlaneFamily fam : {PlaneFamily::q_v, PlaneFamily::iq_iv, PlaneFamily::v_iv, PlaneFamily::q_iq}) {
      double best = std::numeric_limits<double>::infinity();
      for (const PlaneSample& e : scan.entries)
        if (e.family == fam) best = std::min(best, e.curvature);
      rows.push_back({h, fam, best, scan.max_identity_residual});
    }
  }
  return rows;
}

}  // namespace jmcurv
