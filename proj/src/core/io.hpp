#pragma once

#include <optional>
#include <string>

#include "dynamics.hpp"

namespace jmcurv::io {

/// {"masses": [...], "positions": [[x, y], ...], "alpha": a, "energy": h,
///  "velocities": [[vx, vy], ...]} with alpha, energy and velocities optional.
struct ProblemFile {
  Configuration configuration;
  std::optional<double> alpha;
  std::optional<double> energy;
  std::optional<CVec> velocities;
};

/// `normalize` moves the center of mass to the origin and, when velocities
/// are present, removes the total momentum.
ProblemFile parse_problem(const std::string& json_text, bool normalize);
ProblemFile load_problem(const std::string& path, bool normalize);

std::string read_file(const std::string& path);

/// CSV with a '# jmcurv-trajectory {json}' metadata line, a header row and
/// columns t, x_k, y_k, vx_k, vy_k, H, L_re, L_im, C, I, U, mu, lj_residual.
/// Floats use 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_csv(const std::string& path);

std::string format_double(double x);

}  // namespace jmcurv::io
