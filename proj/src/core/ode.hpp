#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "common.hpp"

namespace jmcurv::ode {

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: automatic
  double max_step = 0.0;      // 0: unbounded
  std::size_t max_steps = 50'000'000;
  bool throw_on_underflow = true;  // false: stop and flag Stats::underflow
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
  bool stopped_early = false;
  bool underflow = false;
  double t_end = 0.0;
};

/// One accepted step with the fourth-order continuous extension of the
/// Dormand-Prince pair.
class DenseStep {
 public:
  double t0 = 0.0;
  double h = 0.0;
  RVec y0, y1;
  RVec r1, r2, r3, r4;

  double t1() const { return t0 + h; }

  RVec operator()(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return y0 + th * (r1 + th1 * (r2 + th * (r3 + th1 * r4)));
  }
};

/// Adaptive Dormand-Prince 5(4) for y' = f(t, y). The observer is called with
/// each accepted step and returns false to stop integration.
template <class Rhs, class Observer>
Stats dormand_prince(Rhs&& f, double t0, RVec y, double t_final, const Options& opt,
                     Observer&& observer) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  Stats stats;
  stats.t_end = t0;
  const double span = t_final - t0;
  if (span == 0.0) return stats;
  const double dir = span > 0 ? 1.0 : -1.0;
  const Eigen::Index n = y.size();

  auto err_norm = [&](const RVec& e, const RVec& ya, const RVec& yb) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      const double r = e[i] / sc;
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(n));
  };

  RVec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  f(t0, y, k1);
  ++stats.rhs_evals;

  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer-Norsett-Wanner starting step.
    RVec sc = (opt.atol + opt.rtol * y.array().abs()).matrix();
    const double dn0 = std::sqrt((y.array() / sc.array()).square().mean());
    const double dn1 = std::sqrt((k1.array() / sc.array()).square().mean());
    double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
    h0 = std::min(h0, std::abs(span));
    ytmp = y + dir * h0 * k1;
    f(t0 + dir * h0, ytmp, k2);
    ++stats.rhs_evals;
    const double dn2 = std::sqrt(((k2 - k1).array() / sc.array()).square().mean()) / h0;
    const double dmax = std::max(dn1, dn2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min(h, std::abs(span));
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  double t = t0;
  bool last_rejected = false;
  DenseStep step;
  while (dir * (t_final - t) > 0.0) {
    if (stats.accepted + stats.rejected >= opt.max_steps)
      fail(ErrorCode::non_convergence, "integrator exceeded its step budget");
    const double hmin = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0);
    if (h < hmin) {
      if (opt.throw_on_underflow) fail(ErrorCode::step_underflow, "integrator step size underflow");
      stats.underflow = true;
      return stats;
    }
    bool final_step = false;
    if (h >= dir * (t_final - t)) {
      h = dir * (t_final - t);
      final_step = true;
    }
    const double hs = dir * h;

    ytmp = y + hs * (a21 * k1);
    f(t + c2 * hs, ytmp, k2);
    ytmp = y + hs * (a31 * k1 + a32 * k2);
    f(t + c3 * hs, ytmp, k3);
    ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * hs, ytmp, k4);
    ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * hs, ytmp, k5);
    ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + hs, ytmp, k6);
    ynew = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + hs, ynew, k7);
    stats.rhs_evals += 6;
    err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = err_norm(err, y, ynew);

    if (!std::isfinite(en)) {
      h *= 0.25;
      ++stats.rejected;
      last_rejected = true;
      continue;
    }
    if (en <= 1.0) {
      step.t0 = t;
      step.h = hs;
      step.y0 = y;
      step.y1 = ynew;
      step.r1 = ynew - y;
      step.r2 = hs * k1 - step.r1;
      step.r3 = step.r1 - hs * k7 - step.r2;
      step.r4 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      t = final_step ? t_final : t + hs;
      y = ynew;
      k1 = k7;
      ++stats.accepted;
      stats.t_end = t;
      if (!observer(static_cast<const DenseStep&>(step))) {
        stats.stopped_early = true;
        return stats;
      }
      double fac = en == 0.0 ? 10.0 : 0.9 * std::pow(en, -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      h *= fac;
      last_rejected = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      ++stats.rejected;
      last_rejected = true;
    }
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  }
  return stats;
}

}  // namespace jmcurv::ode
