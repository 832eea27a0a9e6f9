#include "io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace jmcurv::io {

using nlohmann::json;

namespace {

CVec parse_points(const json& arr, const char* what) {
  if (!arr.is_array()) fail(ErrorCode::parse_error, std::string(what) + " must be an array");
  CVec out(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const json& p = arr[k];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      fail(ErrorCode::parse_error, std::string(what) + " entries must be [x, y] pairs");
    out[static_cast<Eigen::Index>(k)] = {p[0].get<double>(), p[1].get<double>()};
  }
  return out;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProblemFile parse_problem(const std::string& json_text, bool normalize) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse_error, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::parse_error, "configuration must be a JSON object");
  if (!doc.contains("masses") || !doc["masses"].is_array() || doc["masses"].empty())
    fail(ErrorCode::invalid_masses, "masses must be a non-empty array");
  std::vector<double> masses;
  for (const json& m : doc["masses"]) {
    if (!m.is_number()) fail(ErrorCode::invalid_masses, "masses must be numbers");
    masses.push_back(m.get<double>());
  }
  SystemPtr sys = make_system(std::move(masses));
  if (!doc.contains("positions")) fail(ErrorCode::parse_error, "positions are required");
  CVec q = parse_points(doc["positions"], "positions");
  check_dimension(*sys, q, "positions");

  std::optional<CVec> vel;
  if (doc.contains("velocities")) {
    vel = parse_points(doc["velocities"], "velocities");
    check_dimension(*sys, *vel, "velocities");
  }
  if (normalize) {
    q.array() -= center_of_mass(*sys, q);
    if (vel) vel->array() -= center_of_mass(*sys, *vel);
  }
  ProblemFile out{Configuration(sys, q), std::nullopt, std::nullopt, vel};
  auto number = [&](const char* key) -> std::optional<double> {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    if (!doc[key].is_number()) fail(ErrorCode::parse_error, std::string(key) + " must be a number");
    return doc[key].get<double>();
  };
  out.alpha = number("alpha");
  out.energy = number("energy");
  return out;
}

ProblemFile load_problem(const std::string& path, bool normalize) {
  return parse_problem(read_file(path), normalize);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  const MassSystem& sys = *traj.system;
  const std::size_t n = sys.size();
  json meta;
  meta["masses"] = std::vector<double>(sys.masses().begin(), sys.masses().end());
  meta["alpha"] = traj.law.alpha;
  meta["energy"] = traj.law.energy;
  meta["truncated"] = traj.stats.truncated;
  meta["rtol"] = traj.stats.rtol;
  meta["atol"] = traj.stats.atol;
  out << "# jmcurv-trajectory " << meta.dump() << "\n";
  out << "t";
  for (std::size_t k = 1; k <= n; ++k) out << ",x_" << k << ",y_" << k;
  for (std::size_t k = 1; k <= n; ++k) out << ",vx_" << k << ",vy_" << k;
  out << ",H,L_re,L_im,C,I,U,mu,lj_residual\n";
  const Diagnostics d = diagnostics(traj, false);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const PhaseState& s = traj.samples[i];
    out << format_double(s.t);
    for (std::size_t k = 0; k < n; ++k)
      out << ',' << format_double(s.q[k].real()) << ',' << format_double(s.q[k].imag());
    for (std::size_t k = 0; k < n; ++k)
      out << ',' << format_double(s.qdot[k].real()) << ',' << format_double(s.qdot[k].imag());
    for (double v : {d.energy[i], d.linear_momentum[i].real(), d.linear_momentum[i].imag(),
                     d.angular_momentum[i], d.inertia[i], d.potential[i], d.mu[i],
                     d.lj_residual[i]})
      out << ',' << format_double(v);
    out << '\n';
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  const std::string tag = "# jmcurv-trajectory ";
  if (!std::getline(in, line) || line.rfind(tag, 0) != 0)
    fail(ErrorCode::parse_error, "missing trajectory metadata line");
  json meta;
  try {
    meta = json::parse(line.substr(tag.size()));
  } catch (const json::exception& e) {
    fail(ErrorCode::parse_error, std::string("malformed trajectory metadata: ") + e.what());
  }
  Trajectory traj;
  traj.system = make_system(meta.at("masses").get<std::vector<double>>());
  traj.law = {meta.at("alpha").get<double>(), meta.at("energy").get<double>()};
  traj.stats.truncated = meta.value("truncated", false);
  traj.stats.rtol = meta.value("rtol", 0.0);
  traj.stats.atol = meta.value("atol", 0.0);
  const std::size_t n = traj.system->size();
  if (!std::getline(in, line)) fail(ErrorCode::parse_error, "missing header row");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      // strtod, unlike stod, accepts subnormal values.
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        fail(ErrorCode::parse_error, "non-numeric trajectory cell: " + cell);
      vals.push_back(x);
    }
    if (vals.size() < 1 + 4 * n) fail(ErrorCode::parse_error, "short trajectory row");
    PhaseState s{CVec(n), CVec(n), vals[0]};
    for (std::size_t k = 0; k < n; ++k) {
      s.q[k] = {vals[1 + 2 * k], vals[2 + 2 * k]};
      s.qdot[k] = {vals[1 + 2 * n + 2 * k], vals[2 + 2 * n + 2 * k]};
    }
    traj.samples.push_back(std::move(s));
  }
  return traj;
}

}  // namespace jmcurv::io
