#pragma once

#include <string>

namespace disklab {

// CLI command bodies. Each reads a validated JSON config, writes
// deterministic artifacts under out_dir, and returns the process exit code:
// 0 success, 2 no convergence / infeasible / no root, 3 regime violation.
// Config errors throw ConfigError; the CLI maps them to exit code 1.
int cmd_axisym_solve(const std::string& config_text, const std::string& out_dir, int jobs);
int cmd_cap_check(const std::string& config_text, const std::string& out_dir);
int cmd_weingarten(const std::string& config_text, const std::string& out_dir);
int cmd_elastica_circle(const std::string& config_text, const std::string& out_dir);
int cmd_energy_report(const std::string& config_text, const std::string& out_dir);

}  // namespace disklab
