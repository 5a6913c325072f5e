#include "disklab/config.hpp"

#include <set>

namespace disklab {

using nlohmann::json;

json parse_config_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line/column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
}

void require_keys(const json& j, const std::string& where,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> known;
  for (const char* k : required) {
    known.insert(k);
    if (!j.contains(k)) throw ConfigError(where + " is missing required field '" + k + "'");
  }
  for (const char* k : optional) known.insert(k);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) throw ConfigError(where + " has unknown field '" + key + "'");
  }
}

double require_number(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError(where + " is missing required field '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

double optional_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

int optional_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  if (!j.at(key).is_number_integer())
    throw ConfigError(std::string("field '") + key + "' must be an integer");
  return j.at(key).get<int>();
}

std::string require_string(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError(where + " is missing required field '" + key + "'");
  if (!j.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
  return j.at(key).get<std::string>();
}

DensitySpec density_from_json(const json& j, const std::string& where) {
  const std::string family = require_string(j, where, "family");
  if (family == "p_willmore") {
    require_keys(j, where, {"family", "sigma", "c0", "p"}, {});
    const double sigma = require_number(j, where, "sigma");
    if (!(sigma > 0.0)) throw ConfigError(where + ".sigma must be > 0");
    const double p = require_number(j, where, "p");
    if (p < 0.0) throw ConfigError(where + ".p must be >= 0");
    return PWillmore{sigma, require_number(j, where, "c0"), p};
  }
  if (family == "exp_square") {
    require_keys(j, where, {"family"}, {});
    return ExpSquare{};
  }
  if (family == "log_square") {
    require_keys(j, where, {"family"}, {});
    return LogSquare{};
  }
  if (family == "polynomial") {
    require_keys(j, where, {"family", "coefficients"}, {});
    if (!j.at("coefficients").is_array() || j.at("coefficients").empty())
      throw ConfigError(where + ".coefficients must be a non-empty array");
    PolyDensity poly;
    for (const auto& v : j.at("coefficients")) {
      if (!v.is_number()) throw ConfigError(where + ".coefficients must contain numbers");
      poly.coefficients.push_back(v.get<double>());
    }
    return poly;
  }
  throw ConfigError(where + ".family '" + family +
                    "' is not one of p_willmore|exp_square|log_square|polynomial");
}

CurveDensitySpec curve_density_from_json(const json& j, const std::string& where) {
  const std::string family = require_string(j, where, "family");
  if (family == "quadratic") {
    require_keys(j, where, {"family"}, {});
    return QuadraticBend{};
  }
  if (family == "total_curvature") {
    require_keys(j, where, {"family", "alpha"}, {});
    return TotalCurvatureBend{require_number(j, where, "alpha")};
  }
  if (family == "polynomial") {
    require_keys(j, where, {"family", "coefficients"}, {});
    if (!j.at("coefficients").is_array() || j.at("coefficients").empty())
      throw ConfigError(where + ".coefficients must be a non-empty array");
    PolyBend poly;
    for (const auto& v : j.at("coefficients")) {
      if (!v.is_number()) throw ConfigError(where + ".coefficients must contain numbers");
      poly.coefficients.push_back(v.get<double>());
    }
    return poly;
  }
  throw ConfigError(where + ".family '" + family +
                    "' is not one of quadratic|total_curvature|polynomial");
}

nlohmann::ordered_json density_to_json(const DensitySpec& spec) {
  nlohmann::ordered_json j;
  j["family"] = density_family_name(spec);
  if (const auto* pw = std::get_if<PWillmore>(&spec)) {
    j["sigma"] = pw->sigma;
    j["c0"] = pw->c0;
    j["p"] = pw->p;
  } else if (const auto* poly = std::get_if<PolyDensity>(&spec)) {
    j["coefficients"] = poly->coefficients;
  }
  return j;
}

nlohmann::ordered_json curve_density_to_json(const CurveDensitySpec& spec) {
  nlohmann::ordered_json j;
  j["family"] = curve_density_family_name(spec);
  if (const auto* tc = std::get_if<TotalCurvatureBend>(&spec)) {
    j["alpha"] = tc->alpha;
  } else if (const auto* poly = std::get_if<PolyBend>(&spec)) {
    j["coefficients"] = poly->coefficients;
  }
  return j;
}

StopSpec stop_from_json(const json& j, const std::string& where) {
  StopSpec stop;
  if (j.is_null()) return stop;
  require_keys(j, where, {},
               {"max_length", "r_collapse", "H_blowup", "min_abs_H",
                "stop_at_vertical_tangent"});
  stop.max_length = optional_number(j, "max_length", stop.max_length);
  if (!(stop.max_length > 0.0)) throw ConfigError(where + ".max_length must be > 0");
  stop.r_collapse = optional_number(j, "r_collapse", stop.r_collapse);
  stop.H_blowup = optional_number(j, "H_blowup", stop.H_blowup);
  stop.min_abs_H = optional_number(j, "min_abs_H", stop.min_abs_H);
  stop.stop_at_vertical_tangent =
      optional_int(j, "stop_at_vertical_tangent", stop.stop_at_vertical_tangent);
  return stop;
}

SolverOptions solver_from_json(const json& j, const std::string& where) {
  SolverOptions opts;
  if (j.is_null()) return opts;
  require_keys(j, where, {},
               {"rtol", "atol", "series_step", "first_integral_tol", "h_max"});
  opts.rtol = optional_number(j, "rtol", opts.rtol);
  opts.atol = optional_number(j, "atol", opts.atol);
  opts.series_step = optional_number(j, "series_step", opts.series_step);
  opts.first_integral_tol = optional_number(j, "first_integral_tol", opts.first_integral_tol);
  opts.h_max = optional_number(j, "h_max", opts.h_max);
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0))
    throw ConfigError(where + ".rtol and .atol must be > 0");
  return opts;
}

}  // namespace disklab
