#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("qproj_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run(const std::string& args) {
  const std::string cmd = std::string(QPROJ_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string gaussian_csv(double mean, double sd) {
  std::ostringstream o;
  o << "x,density\n";
  for (int i = 0; i <= 2000; ++i) {
    const double x = -10.0 + 0.01 * i;
    const double z = (x - mean) / sd;
    o << x << ',' << std::exp(-0.5 * z * z) / (sd * std::sqrt(2 * 3.141592653589793)) << '\n';
  }
  return o.str();
}

}  // namespace

TEST_CASE("usage errors return exit code 2") {
  CHECK(run("") == 2);
  CHECK(run("no-such-command") == 2);
  CHECK(run("--precision quad phi-curve") == 2);
  const auto d = fresh_dir("bad_alpha");
  CHECK(run("--out-dir " + d.string() + " phi-curve --alpha-max 0") == 2);
  CHECK(run("--out-dir " + d.string() + " phi-curve --alpha-max 1 --delta 2") == 2);
}

TEST_CASE("phi-curve writes CSV, JSON and SVG deterministically") {
  const auto a = fresh_dir("phi_a"), b = fresh_dir("phi_b");
  const std::string args = " phi-curve --alpha-max 3 --points 6 --fit-min 1";
  REQUIRE(run("--out-dir " + a.string() + args) == 0);
  REQUIRE(run("--out-dir " + b.string() + " --threads 1" + args) == 0);
  for (const char* f : {"phi_curve.csv", "phi_curve.json", "phi_curve.svg"}) {
    CHECK(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const auto j = read_json(a / "phi_curve.json");
  CHECK(j["schema"] == 1);
  CHECK(j["failures"] == 0);
  CHECK(j["linear_bound_violations"] == 0);
  std::istringstream csv(slurp(a / "phi_curve.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 7);
}

TEST_CASE("classical command on Gaussian marginals") {
  const auto d = fresh_dir("classical");
  write(d / "mu.csv", gaussian_csv(0.0, 0.7));
  write(d / "nu.csv", gaussian_csv(0.0, 0.7));
  REQUIRE(run("--out-dir " + d.string() + " classical --mu " + (d / "mu.csv").string() + " --nu " +
              (d / "nu.csv").string() + " --oracle 2000") == 0);
  const auto j = read_json(d / "classical.json");
  CHECK(j["p_star"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(j["oracle"]["difference"].get<double>()) < 5e-3);
  CHECK(run("--out-dir " + d.string() + " classical --mu " + (d / "missing.csv").string() + " --nu " +
            (d / "nu.csv").string()) == 2);
  CHECK(run("--out-dir " + d.string() + " classical --mu " + (d / "mu.csv").string()) == 2);
}

TEST_CASE("rocket command") {
  const auto d = fresh_dir("rocket");
  write(d / "ok.json", R"({"M": 2, "l": 1, "lambda": 0.5, "burns": [{"t": 0, "m": 1}, {"t": 1, "m": 0.5}], "t_final": 3})");
  REQUIRE(run("--out-dir " + d.string() + " rocket --schedule " + (d / "ok.json").string()) == 0);
  const auto j = read_json(d / "rocket.json");
  CHECK(j["beta"].get<double>() == doctest::Approx(5.0));
  CHECK(j["bound"].get<double>() <= 0.0725);
  write(d / "bad.json", R"({"M": 1, "l": 1, "lambda": 0, "burns": [{"t": 1, "m": 0.5}, {"t": 0.5, "m": 0.1}], "t_final": 3})");
  CHECK(run("--out-dir " + d.string() + " rocket --schedule " + (d / "bad.json").string()) == 2);
  write(d / "junk.json", "{not json");
  CHECK(run("--out-dir " + d.string() + " rocket --schedule " + (d / "junk.json").string()) == 2);
}

TEST_CASE("cbm upper bound on a short scan") {
  const auto d = fresh_dir("cbm");
  REQUIRE(run("--out-dir " + d.string() + " cbm --skip-lower --eta-min -2 --eta-max 2 --eta-step 0.5 --no-refine") == 0);
  const auto j = read_json(d / "cbm.json");
  CHECK(j["upper_bound"]["value"].get<double>() > 0.0);
  CHECK(fs::exists(d / "cbm_scan.csv"));
  CHECK(run("--out-dir " + d.string() + " cbm --skip-lower --weights 0.1") == 2);
}

TEST_CASE("restricted and wigner commands") {
  const auto d = fresh_dir("restricted");
  REQUIRE(run("--out-dir " + d.string() + " restricted --N 10 --export-operator") == 0);
  const auto j = read_json(d / "restricted.json");
  CHECK(j["seed_bound"].get<double>() > 0.0);
  CHECK(fs::exists(d / "triple_theta.csv"));
  REQUIRE(run("--out-dir " + d.string() + " wigner --state number --n 1 --points 21") == 0);
  CHECK(fs::exists(d / "wigner.csv"));
  CHECK(run("--out-dir " + d.string() + " wigner --state nope") == 2);
}
