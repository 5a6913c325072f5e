#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("DISKLAB_CLI");
  return p ? p : "./tools/disklab";
}

int run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "disklab_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kSolveConfig = R"({
  "command": "solve",
  "density": {"family": "exp_square"},
  "boundary_density": {"family": "quadratic"},
  "regime": "geodesic",
  "guess": {"phi_prime0": -0.8},
  "stop": {"max_length": 6.0}
})";

}  // namespace

TEST_CASE("solve writes a convergent bundle") {
  const auto dir = fresh_dir("solve");
  write(dir / "cfg.json", kSolveConfig);
  const int rc = run_cli("solve -c " + (dir / "cfg.json").string() + " -o " +
                         (dir / "out").string());
  CHECK(rc == 0);
  CHECK(fs::exists(dir / "out" / "profile.csv"));
  CHECK(fs::exists(dir / "out" / "surface.obj"));
  const auto rep = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(rep.at("critical").get<bool>());
  CHECK(std::abs(rep.at("residuals").at("el2").get<double>()) < 1e-6);
  CHECK(std::abs(rep.at("rescaling_defect").get<double>()) < 1e-6);
  CHECK(rep.at("regime") == "geodesic");
}

TEST_CASE("repeated runs are byte identical") {
  const auto dir = fresh_dir("determinism");
  write(dir / "cfg.json", kSolveConfig);
  REQUIRE(run_cli("solve -c " + (dir / "cfg.json").string() + " -o " +
                  (dir / "a").string()) == 0);
  REQUIRE(run_cli("solve -c " + (dir / "cfg.json").string() + " -o " +
                  (dir / "b").string()) == 0);
  for (const char* name : {"profile.csv", "surface.obj", "report.json", "run_meta.json"}) {
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  }
}

TEST_CASE("config errors name the field and exit 1") {
  const auto dir = fresh_dir("config_errors");
  // sigma <= 0
  write(dir / "bad_sigma.json", R"({
    "command": "solve",
    "density": {"family": "p_willmore", "sigma": -1.0, "c0": 0.0, "p": 2},
    "boundary_density": {"family": "quadratic"},
    "regime": "geodesic",
    "guess": {"phi_prime0": -1.0}
  })");
  CHECK(run_cli("solve -c " + (dir / "bad_sigma.json").string() + " -o " +
                (dir / "out").string()) == 1);

  // unknown key
  write(dir / "unknown.json", R"({
    "command": "solve",
    "density": {"family": "exp_square"},
    "boundary_density": {"family": "quadratic"},
    "regime": "geodesic",
    "guess": {"phi_prime0": -1.0},
    "bogus": 1
  })");
  CHECK(run_cli("solve -c " + (dir / "unknown.json").string() + " -o " +
                (dir / "out").string()) == 1);

  // malformed JSON
  write(dir / "syntax.json", "{ not json");
  CHECK(run_cli("solve -c " + (dir / "syntax.json").string() + " -o " +
                (dir / "out").string()) == 1);
}

TEST_CASE("no convergence exits 2") {
  const auto dir = fresh_dir("noconv");
  write(dir / "cfg.json", R"({
    "command": "solve",
    "density": {"family": "exp_square"},
    "boundary_density": {"family": "quadratic"},
    "regime": "geodesic",
    "guess": {"phi_prime0": 0.0},
    "stop": {"max_length": 3.0}
  })");
  CHECK(run_cli("solve -c " + (dir / "cfg.json").string() + " -o " +
                (dir / "out").string()) == 2);
}

TEST_CASE("cap-check feasibility and exit codes") {
  const auto dir = fresh_dir("cap");
  write(dir / "feasible.json", R"({
    "command": "cap-check",
    "p": 3, "sigma": 1.0, "c0": 1.0,
    "boundary_density": {"family": "quadratic"},
    "beta": 9.0
  })");
  CHECK(run_cli("cap-check -c " + (dir / "feasible.json").string() + " -o " +
                (dir / "a").string()) == 0);
  const auto rep = nlohmann::json::parse(slurp(dir / "a" / "report.json"));
  CHECK(rep.at("eta").get<double>() == doctest::Approx(27.0 / 4.0));
  CHECK(rep.at("kappa0").get<double>() == doctest::Approx(3.0));

  // kappa0 = 1 < -H0 = 2: infeasible
  write(dir / "infeasible.json", R"({
    "command": "cap-check",
    "p": 3, "sigma": 1.0, "c0": 1.0,
    "boundary_density": {"family": "quadratic"},
    "beta": 1.0
  })");
  CHECK(run_cli("cap-check -c " + (dir / "infeasible.json").string() + " -o " +
                (dir / "b").string()) == 2);

  // p = 2 with c0 != 0: forced to zero, flagged
  write(dir / "forced.json", R"({
    "command": "cap-check",
    "p": 2, "sigma": 1.0, "c0": 0.5,
    "boundary_density": {"family": "quadratic"},
    "beta": 4.0, "kappa0": 2.0
  })");
  CHECK(run_cli("cap-check -c " + (dir / "forced.json").string() + " -o " +
                (dir / "c").string()) == 0);
  const auto rep2 = nlohmann::json::parse(slurp(dir / "c" / "report.json"));
  CHECK(rep2.at("c0_forced_zero").get<bool>());
}

TEST_CASE("weingarten bundle") {
  const auto dir = fresh_dir("weingarten");
  write(dir / "cfg.json", R"({
    "command": "weingarten", "c0": 1.0, "d": 2.0, "n": 200, "n_theta": 64
  })");
  CHECK(run_cli("weingarten -c " + (dir / "cfg.json").string() + " -o " +
                (dir / "out").string()) == 0);
  const auto rep = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(rep.at("regularity") == "C0_at_axis");
  CHECK(std::abs(rep.at("weingarten").at("max_weingarten_residual").get<double>()) < 1e-6);
  CHECK(rep.at("weingarten").at("boundary_kappa_n").get<double>() ==
        doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("elastica-circle roots and the degenerate family") {
  const auto dir = fresh_dir("elastica");
  write(dir / "cfg.json", R"({
    "command": "elastica-circle",
    "boundary_density": {"family": "quadratic"},
    "beta": 3.0, "sigma_area": 2.0, "sign": 1
  })");
  CHECK(run_cli("elastica-circle -c " + (dir / "cfg.json").string() + " -o " +
                (dir / "a").string()) == 0);
  const auto rep = nlohmann::json::parse(slurp(dir / "a" / "report.json"));
  REQUIRE(rep.at("roots").size() == 1);
  CHECK(rep.at("roots")[0].get<double>() == doctest::Approx(1.0).epsilon(1e-10));

  write(dir / "degenerate.json", R"({
    "command": "elastica-circle",
    "boundary_density": {"family": "total_curvature", "alpha": 2.0},
    "beta": 0.0
  })");
  CHECK(run_cli("elastica-circle -c " + (dir / "degenerate.json").string() + " -o " +
                (dir / "b").string()) == 2);
}

TEST_CASE("energy report round trip") {
  const auto dir = fresh_dir("energy");
  // A hemisphere via cap-check, then its Willmore energy = 2 pi.
  write(dir / "cap.json", R"({
    "command": "cap-check",
    "p": 2, "sigma": 1.0, "c0": 0.0,
    "boundary_density": {"family": "quadratic"},
    "beta": 1.0, "kappa0": 1.0, "n_samples": 601
  })");
  REQUIRE(run_cli("cap-check -c " + (dir / "cap.json").string() + " -o " +
                  (dir / "cap").string()) == 0);
  const std::string energy_cfg = std::string(R"({
    "command": "energy-report",
    "profile_csv": ")") + (dir / "cap" / "profile.csv").string() + R"(",
    "density": {"family": "p_willmore", "sigma": 1.0, "c0": 0.0, "p": 2},
    "boundary_density": {"family": "quadratic"},
    "quad_tol": 1e-7
  })";
  write(dir / "energy.json", energy_cfg);
  CHECK(run_cli("energy-report -c " + (dir / "energy.json").string() + " -o " +
                (dir / "out").string()) == 0);
  const auto rep = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(rep.at("surface_P").get<double>() == doctest::Approx(2.0 * 3.14159265358979).epsilon(1e-5));
}

namespace {

std::string repo_dir() {
  const char* p = std::getenv("DISKLAB_REPO");
  return p ? p : ".";
}

// Validates a criticality report against the subset of JSON Schema that
// docs/report.schema.json uses: required keys, typed properties, and the
// closed-world additionalProperties rule.
void validate_against_schema(const nlohmann::json& schema, const nlohmann::json& doc,
                             const std::string& where) {
  auto type_ok = [](const nlohmann::json& tspec, const nlohmann::json& v) {
    auto one = [&](const std::string& t) {
      if (t == "number") return v.is_number();
      if (t == "integer") return v.is_number_integer();
      if (t == "string") return v.is_string();
      if (t == "boolean") return v.is_boolean();
      if (t == "object") return v.is_object();
      if (t == "null") return v.is_null();
      return false;
    };
    if (tspec.is_string()) return one(tspec.get<std::string>());
    for (const auto& t : tspec)
      if (one(t.get<std::string>())) return true;
    return false;
  };
  if (schema.contains("required"))
    for (const auto& key : schema.at("required"))
      CHECK_MESSAGE(doc.contains(key.get<std::string>()),
                    (where + " missing " + key.get<std::string>()));
  if (!schema.contains("properties")) return;
  const auto& props = schema.at("properties");
  const bool closed = schema.value("additionalProperties", true) == false;
  for (const auto& [key, value] : doc.items()) {
    if (!props.contains(key)) {
      CHECK_MESSAGE(!closed, (where + " has undeclared key " + key));
      continue;
    }
    const auto& pschema = props.at(key);
    if (pschema.contains("type"))
      CHECK_MESSAGE(type_ok(pschema.at("type"), value),
                    (where + "." + key + " type mismatch"));
    if (pschema.contains("properties") && value.is_object())
      validate_against_schema(pschema, value, where + "." + key);
  }
}

}  // namespace

TEST_CASE("shipped configs converge") {
  const fs::path cfgdir = fs::path(repo_dir()) / "configs";
  const auto dir = fresh_dir("shipped");
  CHECK(run_cli("solve -c " + (cfgdir / "shifted_quadratic_nongeodesic.json").string() +
                " -o " + (dir / "b").string()) == 0);
  CHECK(run_cli("solve -c " + (cfgdir / "log_square_nongeodesic.json").string() + " -o " +
                (dir / "c").string()) == 0);
  for (const char* sub : {"b", "c"}) {
    const auto rep = nlohmann::json::parse(slurp(dir / sub / "report.json"));
    CHECK(rep.at("regime") == "nongeodesic");
    CHECK(std::abs(rep.at("residuals").at("el3").get<double>()) < 1e-6);
    CHECK(std::abs(rep.at("rescaling_defect").get<double>()) < 1e-6);
  }
}

TEST_CASE("sweep output is independent of the worker count") {
  const auto dir = fresh_dir("jobs");
  write(dir / "cfg.json", R"({
    "command": "solve",
    "density": {"family": "exp_square"},
    "boundary_density": {"family": "quadratic"},
    "regime": "geodesic",
    "guess": {"phi_prime0": -0.8},
    "stop": {"max_length": 4.0},
    "sweep": {"min": -2.0, "max": -0.2, "n": 12}
  })");
  REQUIRE(run_cli("solve -j 1 -c " + (dir / "cfg.json").string() + " -o " +
                  (dir / "a").string()) == 0);
  REQUIRE(run_cli("solve -j 3 -c " + (dir / "cfg.json").string() + " -o " +
                  (dir / "b").string()) == 0);
  CHECK(slurp(dir / "a" / "sweep.json") == slurp(dir / "b" / "sweep.json"));
}

TEST_CASE("emitted reports validate against the shipped schema") {
  const auto schema = nlohmann::json::parse(
      slurp(fs::path(repo_dir()) / "docs" / "report.schema.json"));
  const auto dir = fresh_dir("schema");
  write(dir / "solve.json", kSolveConfig);
  REQUIRE(run_cli("solve -c " + (dir / "solve.json").string() + " -o " +
                  (dir / "a").string()) == 0);
  validate_against_schema(schema, nlohmann::json::parse(slurp(dir / "a" / "report.json")),
                          "solve report");

  write(dir / "wein.json", R"({"command":"weingarten","c0":1.0,"d":2.0,"n":150})");
  REQUIRE(run_cli("weingarten -c " + (dir / "wein.json").string() + " -o " +
                  (dir / "b").string()) == 0);
  validate_against_schema(schema, nlohmann::json::parse(slurp(dir / "b" / "report.json")),
                          "weingarten report");

  write(dir / "cap.json", R"({
    "command": "cap-check", "p": 2, "sigma": 1.0, "c0": 0.0,
    "boundary_density": {"family": "quadratic"}, "beta": 4.0, "kappa0": 2.0
  })");
  REQUIRE(run_cli("cap-check -c " + (dir / "cap.json").string() + " -o " +
                  (dir / "c").string()) == 0);
  validate_against_schema(
      schema, nlohmann::json::parse(slurp(dir / "c" / "report.json")).at("report"),
      "cap report");
}
