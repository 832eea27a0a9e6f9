// Runs the command-line tool as a subprocess.
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using nlohmann::json;

namespace {

struct Result {
  int exit_code = -1;
  std::string out;
  std::string err;
};

const std::string kData = JMCURV_TEST_DATA;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result run(const std::string& args) {
  const std::string err_path = "cli_stderr.txt";
  const std::string cmd = std::string(JMCURV_CLI) + " " + args + " 2>" + err_path;
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  std::remove(err_path.c_str());
  return r;
}

json error_of(const Result& r) { return json::parse(r.err).at("error"); }

}  // namespace

TEST_CASE("cc verify on the equilateral triangle") {
  auto r = run("cc verify --input " + kData + "/lag.json --alpha 1 --energy -1.5");
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(j["residual"].get<double>() < 1e-12);
  CHECK(j["lambda"].get<double>() == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(j["is_central"].get<bool>());
  CHECK(j["prop3"].get<bool>());
}

TEST_CASE("cc find converges from a scalene seed") {
  auto r = run("cc find --input " + kData + "/scalene.json --tol 1e-12");
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(j["residual"].get<double>() <= 1e-12);
  CHECK(j["positions"].size() == 3);
}

TEST_CASE("stability analytic reports the hyperbolic multiplier") {
  auto r = run("stability analytic --input " + kData + "/lag.json --alpha 3");
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(j["analytic_eigenvalues"][0]["re"].get<double>() == doctest::Approx(535.4917).epsilon(1e-7));
  CHECK(j["verdict"] == "spectrally_unstable");
  CHECK(j["c_over_omega"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("validation failures exit with status 2") {
  auto r = run("cc verify --input " + kData + "/empty_masses.json --alpha 1");
  CHECK(r.exit_code == 2);
  CHECK(error_of(r)["code"] == "invalid_masses");
  r = run("cc verify --input " + kData + "/missing.json --alpha 1");
  CHECK(r.exit_code == 2);
  CHECK(error_of(r)["code"] == "io_error");
  r = run("cc verify --input " + kData + "/lag.json --alpha -1");
  CHECK(r.exit_code == 2);
  r = run("curvature sectional --input " + kData + "/lag.json --alpha 1 --energy -10 --plane q,iq");
  CHECK(r.exit_code == 2);
  CHECK(error_of(r)["code"] == "outside_hill_region");
  r = run("stability analytic --input " + kData + "/scalene.json");
  CHECK(r.exit_code == 2);
  CHECK(error_of(r)["code"] == "non_central");
  r = run("frobnicate");
  CHECK(r.exit_code == 2);
}

TEST_CASE("numerical failures exit with status 1") {
  auto r = run("cc verify --input " + kData + "/coincident.json --alpha 1");
  CHECK(r.exit_code == 1);
  CHECK(error_of(r)["code"] == "collision");
  r = run("cc find --input " + kData + "/scalene.json --max-iter 1 --tol 1e-14");
  CHECK(r.exit_code == 1);
  CHECK(error_of(r)["code"] == "non_convergence");
}

TEST_CASE("evolve, diagnose and saari check chain") {
  const std::string traj = "cli_chain_traj.csv", saari = "cli_chain_saari.csv";
  auto r = run("evolve --input " + kData + "/lag.json --alpha 1 --relative-equilibrium --periods 1 "
               "--dt 0.05 --out " + traj);
  REQUIRE(r.exit_code == 0);
  CHECK(std::filesystem::exists(traj + ".manifest.json"));
  r = run("diagnose --traj " + traj);
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(j["drift"]["energy"].get<double>() < 1e-11);
  r = run("saari check --traj " + traj + " --out " + saari);
  REQUIRE(r.exit_code == 0);
  j = json::parse(r.out);
  CHECK(j["max_abs_curvature"].get<double>() < 1e-9);
  for (const auto& f : {traj, traj + ".manifest.json", saari, saari + ".manifest.json"})
    std::filesystem::remove(f);
}

TEST_CASE("seeded outputs are bit-identical across runs") {
  const std::string a = "cli_scan_a.csv", b = "cli_scan_b.csv";
  const std::string base = "curvature scan --input " + kData + "/lag.json --alpha 1 --energy -1 "
                           "--samples 20 --seed 11 --out ";
  auto ra = run(base + a);
  auto rb = run(base + b);
  REQUIRE(ra.exit_code == 0);
  REQUIRE(rb.exit_code == 0);
  CHECK(ra.out == rb.out);
  CHECK(slurp(a) == slurp(b));
  auto m = json::parse(slurp(a + ".manifest.json"));
  CHECK(m["seed"] == 11);
  CHECK(m.contains("input_hash_fnv1a64"));
  CHECK(m.contains("command_line"));
  for (const auto& f : {a, b, a + ".manifest.json", b + ".manifest.json"}) std::filesystem::remove(f);
  CHECK(run("curvature scan --input " + kData + "/lag.json --alpha 1 --samples 2 --out x.csv")
            .exit_code == 2);
}

TEST_CASE("help names the formulas") {
  auto r = run("saari check --help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("C (dU/dt)^2 = (h+U)^3") != std::string::npos);
  r = run("diagnose --help");
  CHECK(r.out.find("Lagrange-Jacobi") != std::string::npos);
}
