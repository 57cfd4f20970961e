#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "khess/io.hpp"
#include "khess/radial_profiles.hpp"

namespace fs = std::filesystem;
using khess::cli::run;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("khess_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

Run call(const TempDir& dir, std::vector<std::string> args) {
  args.insert(args.begin(), {"--out-dir", dir.path.string()});
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::json manifest(const TempDir& d, const std::string& stem) {
  return nlohmann::json::parse(slurp(d.path / (stem + ".manifest.json")));
}

}  // namespace

TEST_CASE("exponents command") {
  TempDir d;
  auto r = call(d, {"exponents", "--n", "1", "--k", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("a0 = 6.2831853071795862") != std::string::npos);
  CHECK(r.out.find("beta = none") != std::string::npos);
  r = call(d, {"exponents", "--n", "2", "--k", "1", "--p", "3"});
  CHECK(r.out.find("p >= gamma = 3: nonexistence") != std::string::npos);
  r = call(d, {"exponents", "--n", "6", "--k", "5"});
  CHECK(r.out.find("classification = spiral") != std::string::npos);
  r = call(d, {"exponents", "--n", "6", "--k", "2", "--d", "4"});
  CHECK(r.out.find("gamma = 7/2") != std::string::npos);
  CHECK(r.out.find("mt_residual") != std::string::npos);
  const auto m = manifest(d, "exponents_n6_k2");
  CHECK(m["command"] == "exponents");
  CHECK(m["parameters"]["d"] == "4");
  CHECK(m["outputs"].contains("exponents_n6_k2.json"));

  CHECK(call(d, {"exponents", "--n", "2", "--k", "3"}).code == 2);
  CHECK(call(d, {"exponents", "--n", "2"}).code == 2);
  CHECK(call(d, {"exponents", "--n", "2", "--k", "1", "--p", "-1"}).code == 2);
  CHECK(call(d, {"exponents", "--n", "2", "--k", "1", "--d", "3"}).code == 2);
  CHECK(call(d, {"bogus"}).code == 2);
  CHECK(call(d, {}).code == 2);
}

TEST_CASE("phase command writes csv, svg and manifest") {
  TempDir d;
  for (const auto& [n, k] : {std::pair{"6", "6"}, {"6", "1"}, {"6", "5"}}) {
    const auto r = call(d, {"phase", "--n", n, "--k", k});
    CHECK(r.code == 0);
  }
  std::ifstream csv(d.path / "phase_n6_k5.csv");
  const auto table = khess::io::read_csv(csv);
  CHECK(table.header == std::vector<std::string>{"t", "v", "w"});
  CHECK(table.rows.size() > 100);
  const auto svg = slurp(d.path / "phase_n6_k1.svg");
  CHECK(svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);
  const auto m = manifest(d, "phase_n6_k5");
  CHECK(m["outputs"].size() == 2);
  CHECK(m["tolerances"]["rel_tol"] == "1e-10");

  const auto r = call(d, {"phase", "--n", "6", "--k", "5", "--csv", "custom.csv", "--tol", "1e-9"});
  CHECK(r.code == 0);
  CHECK(fs::exists(d.path / "custom.csv"));
  CHECK(call(d, {"phase", "--n", "6", "--k", "5", "--tol", "0"}).code == 2);
  CHECK(call(d, {"phase", "--n", "6", "--k", "5", "--t-max", "-1"}).code == 2);
}

TEST_CASE("outputs are deterministic") {
  TempDir a, b;
  for (const auto* dir : {&a, &b}) {
    CHECK(call(*dir, {"phase", "--n", "6", "--k", "5"}).code == 0);
    CHECK(call(*dir, {"profile", "--n", "2", "--explicit", "0.5"}).code == 0);
  }
  for (const char* f : {"phase_n6_k5.csv", "profile_n2_k2.csv", "profile_n2_k2.json",
                        "profile_n2_k2.report.json"})
    CHECK(slurp(a.path / f) == slurp(b.path / f));
  auto ma = manifest(a, "phase_n6_k5");
  auto mb = manifest(b, "phase_n6_k5");
  ma.erase("timestamp");
  mb.erase("timestamp");
  CHECK(ma == mb);
}

TEST_CASE("bifurcation command") {
  TempDir d;
  auto r = call(d, {"bifurcation", "--n", "6", "--k", "6", "--count", "40"});
  CHECK(r.code == 0);
  CHECK(r.out.find("max_count = 1") != std::string::npos);
  r = call(d, {"bifurcation", "--n", "6", "--k", "1", "--count", "30"});
  CHECK(r.code == 0);
  CHECK(r.out.find("max_count = 1") != std::string::npos);
  r = call(d, {"bifurcation", "--n", "6", "--k", "5", "--a", "29000,29300,29600", "--eq-radius",
               "1e-10"});
  CHECK(r.code == 0);
  std::ifstream csv(d.path / "bifurcation_n6_k5.csv");
  const auto t = khess::io::read_csv(csv);
  CHECK(t.rows.size() == 3);
  CHECK(call(d, {"bifurcation", "--n", "6", "--k", "1", "--count", "0"}).code == 2);
  CHECK(call(d, {"bifurcation", "--n", "6", "--k", "1", "--a", "3,2"}).code == 2);
  CHECK(call(d, {"bifurcation", "--n", "6", "--k", "1", "--a-min", "5", "--a-max", "1"}).code == 2);
}

TEST_CASE("profile command") {
  TempDir d;
  auto r = call(d, {"profile", "--n", "2", "--explicit", "0.5"});
  CHECK(r.code == 0);
  const auto rep = nlohmann::json::parse(slurp(d.path / "profile_n2_k2.report.json"));
  CHECK(rep.contains("a"));
  CHECK(rep.contains("lambda"));
  CHECK(khess::io::parse_number(rep["hessian_residual"].get<std::string>()) <= 1e-6);
  CHECK(rep["verdict"] == "identity-satisfied");

  r = call(d, {"profile", "--n", "6", "--k", "5", "--at-v", "1.1"});
  CHECK(r.code == 0);
  CHECK(call(d, {"profile", "--n", "6", "--k", "5", "--at-v", "0"}).code == 2);
  CHECK(call(d, {"profile", "--n", "6", "--k", "1", "--at-v", "1.5"}).code == 2);
  CHECK(call(d, {"profile", "--n", "6", "--k", "1", "--explicit", "0.5"}).code == 2);
  CHECK(call(d, {"profile", "--n", "6"}).code == 2);
  CHECK(call(d, {"profile", "--n", "2", "--explicit", "0.5", "--at-v", "0.5"}).code == 2);
  // an impossible tolerance fails the check but still writes the files
  r = call(d, {"profile", "--n", "3", "--explicit", "1", "--check-tol", "1e-20"});
  CHECK(r.code == 1);
  CHECK(fs::exists(d.path / "profile_n3_k3.manifest.json"));
}

TEST_CASE("shoot command") {
  TempDir d;
  auto r = call(d, {"shoot", "--n", "2", "--k", "1", "--p", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("status = zero-found") != std::string::npos);
  CHECK(fs::exists(d.path / "shoot_n2_k1.unit.csv"));
  r = call(d, {"shoot", "--n", "2", "--k", "1", "--p", "3"});
  CHECK(r.out.find("status = no-zero-within-cap") != std::string::npos);
  r = call(d, {"shoot", "--n", "3", "--k", "2", "--p", "2"});
  CHECK(r.out.find("eigenvalue regime") != std::string::npos);
  r = call(d, {"shoot", "--n", "2", "--k", "1", "--sweep", "--p-min", "1.5", "--p-max", "3.3",
               "--count", "7"});
  CHECK(r.code == 0);
  CHECK(r.out.find("monotone = true") != std::string::npos);
  CHECK(r.out.find("3.2999999999999998,no-zero-within-cap") != std::string::npos);
  CHECK(call(d, {"shoot", "--n", "2", "--k", "1"}).code == 2);
  CHECK(call(d, {"shoot", "--n", "2", "--k", "1", "--p", "2", "--m", "0"}).code == 2);
  CHECK(call(d, {"shoot", "--n", "2", "--k", "1", "--sweep", "--p-min", "3", "--p-max", "2"}).code ==
        2);
}

TEST_CASE("audit command") {
  TempDir d;
  const auto e = khess::explicit_ma(3, 0.5);
  {
    std::ofstream f(d.path / "ueps.csv");
    khess::io::write_profile_csv(f, e.profile);
  }
  const std::string file = (d.path / "ueps.csv").string();
  auto r = call(d, {"audit", "--profile", file, "--n", "3", "--k", "3", "--exp",
                    khess::io::format_number(e.a_eps)});
  CHECK(r.code == 0);
  const auto rep = nlohmann::json::parse(slurp(d.path / "audit_n3_k3.json"));
  CHECK(rep["verdict"] == "identity-satisfied");
  CHECK(rep.contains("boundary_term"));
  CHECK(rep.contains("alpha1"));

  {
    std::ofstream f(d.path / "zero.csv");
    f << "s,u,u_s\n0.25,0,0\n0.5,0,0\n1,0,0\n";
  }
  r = call(d, {"audit", "--profile", (d.path / "zero.csv").string(), "--n", "3", "--k", "1",
               "--power", "2"});
  CHECK(r.code == 0);

  {
    std::ofstream f(d.path / "broken.csv");
    f << "s,u,u_s\n0.25,-1,1\n0.5,-0.5\n1,0,1\n";
  }
  r = call(d, {"audit", "--profile", (d.path / "broken.csv").string(), "--n", "3", "--k", "1",
               "--power", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);

  {
    std::ofstream f(d.path / "lifted.csv");
    f << "s,u,u_s\n0.25,-1,1\n0.5,-0.5,1\n1,0.125,1\n";
  }
  CHECK(call(d, {"audit", "--profile", (d.path / "lifted.csv").string(), "--n", "3", "--k", "1",
                 "--power", "2"})
            .code == 2);
  CHECK(call(d, {"audit", "--profile", "/nonexistent.csv", "--n", "3", "--k", "1", "--power", "2"})
            .code == 2);
  CHECK(call(d, {"audit", "--profile", file, "--n", "3", "--k", "3"}).code == 2);
}

TEST_CASE("output directory from the environment") {
  TempDir d;
  ::setenv(khess::cli::kOutDirEnv, d.path.string().c_str(), 1);
  std::ostringstream out, err;
  CHECK(run({"exponents", "--n", "3", "--k", "1"}, out, err) == 0);
  ::unsetenv(khess::cli::kOutDirEnv);
  CHECK(fs::exists(d.path / "exponents_n3_k1.manifest.json"));
}
