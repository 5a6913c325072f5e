#include "disklab/commands.hpp"

#include <filesystem>
#include <fstream>

#include "disklab/config.hpp"
#include "disklab/curve.hpp"
#include "disklab/energy.hpp"
#include "disklab/special.hpp"
#include "disklab/surface.hpp"

namespace disklab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw Error("cannot write " + (dir / name).string());
  out << content;
}

void write_meta(const fs::path& dir, const std::string& command) {
  nlohmann::ordered_json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["command"] = command;
  write_file(dir, "run_meta.json", meta.dump(2) + "\n");
}

void check_command_tag(const json& cfg, const std::string& expected) {
  if (cfg.contains("command") && cfg.at("command").get<std::string>() != expected)
    throw ConfigError("config.command is '" + cfg.at("command").get<std::string>() +
                      "' but the subcommand is '" + expected + "'");
}

nlohmann::ordered_json sweep_to_json(const std::vector<SweepPoint>& pts) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& p : pts) {
    nlohmann::ordered_json row;
    row["phi_prime0"] = p.phi_prime0;
    row["ok"] = p.ok;
    row["max_first_integral_residual"] = p.max_first_integral_residual;
    row["length"] = p.length;
    row["error"] = p.error;
    arr.push_back(row);
  }
  return arr;
}

}  // namespace

int cmd_axisym_solve(const std::string& config_text, const std::string& out_dir, int jobs) {
  const json cfg = parse_config_text(config_text);
  require_keys(cfg, "config",
               {"density", "boundary_density", "regime", "guess"},
               {"command", "varpi", "stop", "solver", "n_theta", "sweep"});
  check_command_tag(cfg, "solve");
  const DensitySpec density = density_from_json(cfg.at("density"), "config.density");
  const CurveDensitySpec lambda =
      curve_density_from_json(cfg.at("boundary_density"), "config.boundary_density");
  const std::string regime = require_string(cfg, "config", "regime");
  if (regime != "geodesic" && regime != "nongeodesic")
    throw ConfigError("config.regime must be 'geodesic' or 'nongeodesic'");
  const double varpi = optional_number(cfg, "varpi", 0.0);
  const StopSpec stop = stop_from_json(cfg.value("stop", json()), "config.stop");
  const SolverOptions opts = solver_from_json(cfg.value("solver", json()), "config.solver");
  const int n_theta = optional_int(cfg, "n_theta", 128);

  require_keys(cfg.at("guess"), "config.guess", {"phi_prime0"}, {"length"});
  ShootingGuess guess;
  guess.phi_prime0 = require_number(cfg.at("guess"), "config.guess", "phi_prime0");
  if (cfg.at("guess").contains("length") && !cfg.at("guess").at("length").is_null())
    guess.length = require_number(cfg.at("guess"), "config.guess", "length");

  const fs::path dir(out_dir);

  // Optional conservation sweep alongside the solve.
  if (cfg.contains("sweep") && !cfg.at("sweep").is_null()) {
    const json& sw = cfg.at("sweep");
    require_keys(sw, "config.sweep", {"min", "max", "n"}, {});
    const auto pts = sweep_phi0(density, require_number(sw, "config.sweep", "min"),
                                require_number(sw, "config.sweep", "max"),
                                optional_int(sw, "n", 64), stop, opts, jobs);
    write_file(dir, "sweep.json", sweep_to_json(pts).dump(2) + "\n");
  }

  ShootingResult result;
  try {
    result = regime == "geodesic"
                 ? shoot_geodesic(density, lambda, guess, stop, opts, varpi)
                 : shoot_nongeodesic(density, lambda, guess, stop, opts, varpi);
  } catch (const SingularBC&) {
    return 3;
  } catch (const RegimeViolation&) {
    return 3;
  } catch (const NoConvergence&) {
    return 2;
  }

  write_file(dir, "profile.csv", profile_to_csv(result.trajectory));
  write_file(dir, "surface.obj", mesh_to_obj(revolve(result.trajectory, n_theta)));
  nlohmann::ordered_json out = json::parse(result.report.to_json());
  out["shooting"] = {{"phi_prime0", result.phi_prime0},
                     {"length", result.length},
                     {"iterations", result.iterations},
                     {"target_residual", {result.target_residual[0], result.target_residual[1]}},
                     {"max_first_integral_residual",
                      result.trajectory.max_first_integral_residual}};
  write_file(dir, "report.json", out.dump(2) + "\n");
  write_meta(dir, "solve");
  return 0;
}

int cmd_cap_check(const std::string& config_text, const std::string& out_dir) {
  const json cfg = parse_config_text(config_text);
  require_keys(cfg, "config", {"p", "sigma", "c0", "boundary_density", "beta"},
               {"command", "kappa0", "n_samples"});
  check_command_tag(cfg, "cap-check");
  CapSpec spec;
  spec.p = require_number(cfg, "config", "p");
  spec.sigma = require_number(cfg, "config", "sigma");
  if (!(spec.sigma > 0.0)) throw ConfigError("config.sigma must be > 0");
  spec.c0 = require_number(cfg, "config", "c0");
  const double beta = require_number(cfg, "config", "beta");
  const CurveDensitySpec lambda =
      curve_density_from_json(cfg.at("boundary_density"), "config.boundary_density");
  const int n = optional_int(cfg, "n_samples", 201);
  const fs::path dir(out_dir);

  // Boundary curvature from the circle condition unless given explicitly.
  if (cfg.contains("kappa0")) {
    spec.kappa0 = require_number(cfg, "config", "kappa0");
  } else {
    std::vector<double> roots;
    try {
      roots = solve_circle_curvature(lambda, beta, 0.0, 0);
    } catch (const NoRoot& e) {
      nlohmann::ordered_json out;
      out["feasible"] = false;
      out["reason"] = std::string("no boundary circle: ") + e.what();
      write_file(dir, "report.json", out.dump(2) + "\n");
      write_meta(dir, "cap-check");
      return 2;
    }
    spec.kappa0 = roots.back();
  }

  nlohmann::ordered_json out;
  out["kappa0"] = spec.kappa0;
  try {
    const auto cap = build_cap(spec, lambda, beta, n);
    out["feasible"] = true;
    out["eta"] = cap.criticality.eta;
    if (cap.criticality.H0) out["H0"] = *cap.criticality.H0;
    out["c0_forced_zero"] = cap.criticality.c0_forced_zero;
    out["eta_sign_ok"] = cap.criticality.eta_sign_ok;
    out["report"] = json::parse(cap.report.to_json());
    write_file(dir, "report.json", out.dump(2) + "\n");
    write_file(dir, "profile.csv", profile_to_csv(cap.trajectory));
    write_meta(dir, "cap-check");
    return 0;
  } catch (const InfeasibleCap& e) {
    out["feasible"] = false;
    out["reason"] = e.what();
    write_file(dir, "report.json", out.dump(2) + "\n");
    write_meta(dir, "cap-check");
    return 2;
  }
}

int cmd_weingarten(const std::string& config_text, const std::string& out_dir) {
  const json cfg = parse_config_text(config_text);
  require_keys(cfg, "config", {"c0", "d"}, {"command", "n", "n_theta"});
  check_command_tag(cfg, "weingarten");
  WeingartenSpec spec;
  spec.c0 = require_number(cfg, "config", "c0");
  if (!(spec.c0 > 0.0)) throw ConfigError("config.c0 must be > 0");
  spec.d = require_number(cfg, "config", "d");
  if (!(spec.d >= spec.c0 * spec.c0))
    throw ConfigError("config.d must be >= c0^2");
  const int n = optional_int(cfg, "n", 400);
  const int n_theta = optional_int(cfg, "n_theta", 128);

  const auto w = weingarten_profile(spec, n);
  const fs::path dir(out_dir);
  write_file(dir, "profile.csv", profile_to_csv(w.trajectory));
  write_file(dir, "surface.obj", mesh_to_obj(revolve(w.trajectory, n_theta)));
  nlohmann::ordered_json out = json::parse(w.report.to_json());
  out["weingarten"] = {{"c0", spec.c0},
                       {"d", spec.d},
                       {"max_weingarten_residual", w.max_weingarten_residual},
                       {"boundary_kappa_n", w.boundary_kappa_n},
                       {"chi_first", w.chi.front()},
                       {"chi_last", w.chi.back()}};
  write_file(dir, "report.json", out.dump(2) + "\n");
  write_meta(dir, "weingarten");
  return 0;
}

int cmd_elastica_circle(const std::string& config_text, const std::string& out_dir) {
  const json cfg = parse_config_text(config_text);
  require_keys(cfg, "config", {"boundary_density", "beta"},
               {"command", "sigma_area", "sign"});
  check_command_tag(cfg, "elastica-circle");
  const CurveDensitySpec lambda =
      curve_density_from_json(cfg.at("boundary_density"), "config.boundary_density");
  const double beta = require_number(cfg, "config", "beta");
  const double sigma_area = optional_number(cfg, "sigma_area", 0.0);
  const int sign = optional_int(cfg, "sign", 0);
  if (sign != -1 && sign != 0 && sign != 1)
    throw ConfigError("config.sign must be -1, 0 or 1");

  nlohmann::ordered_json out;
  const fs::path dir(out_dir);
  try {
    const auto roots = solve_circle_curvature(lambda, beta, sigma_area, sign);
    out["roots"] = roots;
    write_file(dir, "report.json", out.dump(2) + "\n");
    write_meta(dir, "elastica-circle");
    return 0;
  } catch (const NoRoot& e) {
    out["roots"] = json::array();
    out["reason"] = e.what();
    write_file(dir, "report.json", out.dump(2) + "\n");
    write_meta(dir, "elastica-circle");
    return 2;
  }
}

int cmd_energy_report(const std::string& config_text, const std::string& out_dir) {
  const json cfg = parse_config_text(config_text);
  require_keys(cfg, "config", {"profile_csv", "density", "boundary_density"},
               {"command", "eta", "varpi", "beta", "quad_tol"});
  check_command_tag(cfg, "energy-report");
  EnergyParams params;
  params.density = density_from_json(cfg.at("density"), "config.density");
  params.boundary_density =
      curve_density_from_json(cfg.at("boundary_density"), "config.boundary_density");
  params.eta = optional_number(cfg, "eta", 0.0);
  params.varpi = optional_number(cfg, "varpi", 0.0);
  params.beta = optional_number(cfg, "beta", 0.0);
  const double quad_tol = optional_number(cfg, "quad_tol", 1e-9);

  const std::string path = require_string(cfg, "config", "profile_csv");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config.profile_csv: cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const ProfileTrajectory traj = profile_from_csv(text);

  const auto e = total_energy(traj, params, quad_tol);
  nlohmann::ordered_json out;
  out["surface_P"] = e.surface_P;
  out["surface_K"] = e.surface_K;
  out["boundary_lambda"] = e.boundary_lambda;
  out["boundary_tau"] = e.boundary_tau;
  out["boundary_beta"] = e.boundary_beta;
  out["total"] = e.total;
  out["params"] = {{"eta", params.eta}, {"varpi", params.varpi}, {"beta", params.beta}};
  out["density"] = density_to_json(params.density);
  out["boundary_density"] = curve_density_to_json(params.boundary_density);
  const fs::path dir(out_dir);
  write_file(dir, "report.json", out.dump(2) + "\n");
  write_meta(dir, "energy-report");
  return 0;
}

}  // namespace disklab
