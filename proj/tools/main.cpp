#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "disklab/commands.hpp"
#include "disklab/config.hpp"
#include "disklab/errors.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw disklab::ConfigError("cannot open config file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run(int argc, char** argv) {
  CLI::App app{
      "disklab: critical disk-type surfaces of revolution with elastic boundary energies"};
  app.set_version_flag("--version",
                       std::string("disklab 0.1.0 (config schema ") +
                           disklab::kSchemaVersion + ")");
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int jobs = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "JSON config file")->required();
    cmd->add_option("-o,--out", out_dir, "output directory (default: out)");
  };

  auto* solve = app.add_subcommand(
      "solve", "integrate the profile equations and shoot for a critical disk");
  add_common(solve);
  solve->add_option("-j,--jobs", jobs, "worker threads for sweeps");

  auto* cap = app.add_subcommand("cap-check", "spherical-cap criticality for a p-Willmore density");
  add_common(cap);

  auto* wein = app.add_subcommand("weingarten", "build a linear Weingarten disk (K = 2 c0 H)");
  add_common(wein);

  auto* ela = app.add_subcommand("elastica-circle",
                                 "circle curvatures solving the boundary condition");
  add_common(ela);

  auto* ene = app.add_subcommand("energy-report", "energy breakdown of a stored profile");
  add_common(ene);

  CLI11_PARSE(app, argc, argv);

  const std::string cfg = read_file(config_path);
  if (solve->parsed()) return disklab::cmd_axisym_solve(cfg, out_dir, jobs);
  if (cap->parsed()) return disklab::cmd_cap_check(cfg, out_dir);
  if (wein->parsed()) return disklab::cmd_weingarten(cfg, out_dir);
  if (ela->parsed()) return disklab::cmd_elastica_circle(cfg, out_dir);
  if (ene->parsed()) return disklab::cmd_energy_report(cfg, out_dir);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const disklab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const disklab::SingularBC& e) {
    std::cerr << "regime violation: " << e.what() << "\n";
    return 3;
  } catch (const disklab::RegimeViolation& e) {
    std::cerr << "regime violation: " << e.what() << "\n";
    return 3;
  } catch (const disklab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
