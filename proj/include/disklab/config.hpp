#pragma once

#include <optional>
#include <string>

#include "disklab/densities.hpp"
#include "disklab/solver.hpp"

#include "json.hpp"

namespace disklab {

inline constexpr const char* kSchemaVersion = "1";

// Strict parsing: unknown keys are rejected, offending fields are named, and
// JSON syntax errors carry line/column positions.
nlohmann::json parse_config_text(const std::string& text);

DensitySpec density_from_json(const nlohmann::json& j, const std::string& where);
CurveDensitySpec curve_density_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::ordered_json density_to_json(const DensitySpec& spec);
nlohmann::ordered_json curve_density_to_json(const CurveDensitySpec& spec);

StopSpec stop_from_json(const nlohmann::json& j, const std::string& where);
SolverOptions solver_from_json(const nlohmann::json& j, const std::string& where);

void require_keys(const nlohmann::json& j, const std::string& where,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional);

double require_number(const nlohmann::json& j, const std::string& where, const char* key);
double optional_number(const nlohmann::json& j, const char* key, double fallback);
int optional_int(const nlohmann::json& j, const char* key, int fallback);
std::string require_string(const nlohmann::json& j, const std::string& where,
                           const char* key);

}  // namespace disklab
