#pragma once

// Run configuration of the feykac tool: defaults, JSON config files and
// key=value overrides. Every key accepted by --set is also a JSON key.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "feykac/detail/parse_spec.hpp"
#include "feykac/errors.hpp"
#include "feykac/fkmc.hpp"
#include "feykac/grid.hpp"
#include "feykac/pde.hpp"

namespace feykac::cli {

using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  std::string potential = "zero";
  std::string v0 = "gaussian(1)";
  std::vector<double> t{0.5};
  std::vector<double> x{0.0, 1.0};

  std::size_t n_paths = 200000;
  std::size_t m_steps = 512;
  std::uint64_t seed = 20240611;
  bool antithetic = false;
  bool control_variate = false;
  unsigned workers = 1;
  double t_max_alt = 0.5;

  int quad_order = 128;
  std::size_t n = 64;
  int p_max = 7;
  int dyadic_level = 2;
  bool intermediate = false;  // converge: also emit rows at interior dyadic times

  double x_min = -12.0;
  double x_max = 12.0;
  std::size_t n_points = 1201;
  double dt = 1e-4;

  Format format = Format::Csv;
  std::string out;  // empty: stdout

  Grid grid() const { return {x_min, x_max, n_points}; }
  PdeConfig pde() const { return {grid(), dt}; }

  McConfig mc() const {
    McConfig cfg;
    cfg.n_paths = n_paths;
    cfg.m_steps = m_steps;
    cfg.seed = seed;
    cfg.antithetic = antithetic;
    cfg.control_variate = control_variate;
    cfg.workers = workers;
    cfg.t_max_alt = t_max_alt;
    return cfg;
  }
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"oracle", "mc", "split", "pde", "compare", "converge"};
  return names;
}

namespace detail {

inline std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  text = feykac::detail::trim(text);
  if (!text.empty() && text.front() == '[' && text.back() == ']') text = text.substr(1, text.size() - 2);
  if (feykac::detail::trim(text).empty()) return out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(feykac::detail::parse_number(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

template <class Int>
Int parse_count(std::string_view key, double value, Int lo) {
  if (!(value >= static_cast<double>(lo)) || value != std::floor(value) || value > 9.0e15) {
    throw ConfigError(std::string(key) + " must be an integer >= " + std::to_string(lo));
  }
  return static_cast<Int>(value);
}

inline bool parse_bool(std::string_view key, std::string_view text) {
  text = feykac::detail::trim(text);
  if (text == "true" || text == "1" || text == "on") return true;
  if (text == "false" || text == "0" || text == "off") return false;
  throw ConfigError(std::string(key) + " must be true or false");
}

inline double number(std::string_view key, std::string_view text) {
  try {
    return feykac::detail::parse_number(text);
  } catch (const CatalogError&) {
    throw ConfigError(std::string(key) + ": malformed number '" + std::string(text) + "'");
  }
}

}  // namespace detail

/// Applies one key=value setting. Lists are comma separated ("0.1,0.5") or
/// bracketed; catalog specs keep their commas ("gauss_cos(1,2)").
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  using detail::number;
  value = feykac::detail::trim(value);
  if (key == "potential") {
    cfg.potential = std::string(value);
  } else if (key == "v0") {
    cfg.v0 = std::string(value);
  } else if (key == "t" || key == "x") {
    std::vector<double> list;
    try {
      list = detail::parse_list(value);
    } catch (const CatalogError&) {
      throw ConfigError(std::string(key) + ": malformed list '" + std::string(value) + "'");
    }
    (key == "t" ? cfg.t : cfg.x) = std::move(list);
  } else if (key == "n_paths") {
    cfg.n_paths = detail::parse_count<std::size_t>(key, number(key, value), 1);
  } else if (key == "m_steps") {
    cfg.m_steps = detail::parse_count<std::size_t>(key, number(key, value), 1);
  } else if (key == "seed") {
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ConfigError("seed must be a non-negative 64-bit integer");
    }
    cfg.seed = seed;
  } else if (key == "antithetic") {
    cfg.antithetic = detail::parse_bool(key, value);
  } else if (key == "control_variate") {
    cfg.control_variate = detail::parse_bool(key, value);
  } else if (key == "workers") {
    cfg.workers = detail::parse_count<unsigned>(key, number(key, value), 1);
  } else if (key == "t_max_alt") {
    cfg.t_max_alt = number(key, value);
  } else if (key == "quad_order") {
    cfg.quad_order = detail::parse_count<int>(key, number(key, value), 1);
  } else if (key == "n") {
    cfg.n = detail::parse_count<std::size_t>(key, number(key, value), 1);
  } else if (key == "p_max") {
    cfg.p_max = detail::parse_count<int>(key, number(key, value), 1);
  } else if (key == "dyadic_level") {
    cfg.dyadic_level = detail::parse_count<int>(key, number(key, value), 0);
  } else if (key == "intermediate") {
    cfg.intermediate = detail::parse_bool(key, value);
  } else if (key == "x_min") {
    cfg.x_min = number(key, value);
  } else if (key == "x_max") {
    cfg.x_max = number(key, value);
  } else if (key == "n_points") {
    cfg.n_points = detail::parse_count<std::size_t>(key, number(key, value), 2);
  } else if (key == "h") {
    // grid spacing; fixes n_points for the current extent
    const double h = number(key, value);
    const double cells = (cfg.x_max - cfg.x_min) / h;
    if (!(h > 0.0) || std::abs(cells - std::round(cells)) > 1e-9 * cells) {
      throw ConfigError("h must divide x_max - x_min");
    }
    cfg.n_points = static_cast<std::size_t>(std::round(cells)) + 1;
  } else if (key == "dt") {
    cfg.dt = number(key, value);
  } else if (key == "format") {
    if (value == "csv") {
      cfg.format = Format::Csv;
    } else if (value == "json") {
      cfg.format = Format::Json;
    } else {
      throw ConfigError("format must be csv or json");
    }
  } else if (key == "out") {
    cfg.out = std::string(value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

// "key=value"
inline void apply_assignment(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
  }
  apply_setting(cfg, feykac::detail::trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

inline std::string json_scalar_text(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_unsigned()) return std::to_string(value.get<std::uint64_t>());
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  if (value.is_number_float()) return feykac::detail::format_arg(value.get<double>());
  throw ConfigError("unsupported JSON value " + value.dump());
}

/// Merges a JSON object of settings into cfg. Arrays are accepted for t and x.
inline void apply_json(RunConfig& cfg, const Json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") {
      if (!value.is_string()) throw ConfigError("command must be a string");
      cfg.command = value.get<std::string>();
      continue;
    }
    if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!item.is_number()) throw ConfigError(key + " must be a list of numbers");
        if (!joined.empty()) joined += ',';
        joined += json_scalar_text(item);
      }
      if (key != "t" && key != "x") throw ConfigError(key + " does not take a list");
      apply_setting(cfg, key, joined.empty() ? std::string_view{} : std::string_view(joined));
    } else {
      apply_setting(cfg, key, json_scalar_text(value));
    }
  }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  apply_json(cfg, doc);
}

/// Checks the constraints that do not depend on the command.
inline void validate(const RunConfig& cfg) {
  bool known = false;
  for (const auto& name : command_names()) known = known || name == cfg.command;
  if (!known) throw ConfigError("unknown command '" + cfg.command + "'");
  for (double t : cfg.t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("every t must be a positive number");
  }
  for (double x : cfg.x) {
    if (!std::isfinite(x)) throw ConfigError("every x must be finite");
  }
  if (!(cfg.x_min < cfg.x_max)) throw ConfigError("x_min must be below x_max");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.t_max_alt > 0.0)) throw ConfigError("t_max_alt must be positive");
  if (cfg.p_max > 8) throw ConfigError("p_max must be at most 8");
}

inline Json to_json(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["potential"] = cfg.potential;
  j["v0"] = cfg.v0;
  j["t"] = cfg.t;
  j["x"] = cfg.x;
  j["n_paths"] = cfg.n_paths;
  j["m_steps"] = cfg.m_steps;
  j["seed"] = cfg.seed;
  j["antithetic"] = cfg.antithetic;
  j["control_variate"] = cfg.control_variate;
  j["workers"] = cfg.workers;
  j["t_max_alt"] = cfg.t_max_alt;
  j["quad_order"] = cfg.quad_order;
  j["n"] = cfg.n;
  j["p_max"] = cfg.p_max;
  j["dyadic_level"] = cfg.dyadic_level;
  j["intermediate"] = cfg.intermediate;
  j["x_min"] = cfg.x_min;
  j["x_max"] = cfg.x_max;
  j["n_points"] = cfg.n_points;
  j["dt"] = cfg.dt;
  j["format"] = cfg.format == Format::Csv ? "csv" : "json";
  j["out"] = cfg.out;
  return j;
}

}  // namespace feykac::cli
