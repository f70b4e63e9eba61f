// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scenario files: which geometry, which drive points, which outputs.

#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wqed/model.hpp"

namespace wqed::cli {

/// Malformed or inconsistent scenario input (exit status 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemSpec {
  enum class Kind { Explicit, Canonical, NAtom };
  Kind kind = Kind::Canonical;
  SystemConfig atoms;  ///< Explicit only
  double gamma = 0.01;
  double Gamma = 1.0;
  double d = 0.25;
  int N = 1;

  SystemConfig build() const;
};

/// Units of the detuning grid: absolute (units of the mirror rate),
/// coupling sqrt(2 N Gamma gamma), or the real part of the lower
/// single-excitation polariton of the geometry.
enum class DeltaUnits { Absolute, Coupling, Polariton };

inline const std::vector<std::string> kOutputs{"spectrum", "g2_zero", "g2_tau", "modes", "census", "oracle"};
inline const std::vector<std::string> kSweepAxes{"gamma", "epsilon", "delta", "d", "N"};

struct Scenario {
  std::string name;
  SystemSpec system;
  std::vector<double> epsilon;
  bool epsilon_over_gamma = false;  ///< epsilon values are multiples of the medium rate
  std::vector<double> delta;
  DeltaUnits delta_units = DeltaUnits::Absolute;
  std::vector<double> tau;
  std::vector<double> gamma_grid;
  std::vector<std::string> outputs;
  std::optional<int> max_excitations;

  bool wants(const std::string& output) const;
  /// Canonical JSON form; the input hash is computed from it.
  nlohmann::json to_json() const;
};

/// One scenario object or {"scenarios": [...]}. Throws ConfigError.
std::vector<Scenario> parse_scenarios(const nlohmann::json& doc);

/// Built-in scenario names in listing order.
std::vector<std::string> builtin_names();
std::string builtin_description(const std::string& name);
std::vector<Scenario> builtin(const std::string& name);

/// A readable file path, else a built-in name. Throws ConfigError.
std::vector<Scenario> load_scenarios(const std::string& path_or_name);

/// Copy of the scenario with one axis pinned to a single value.
Scenario with_axis_value(const Scenario& base, const std::string& axis, double value);

/// Parse "0.01,0.1,1" into numbers; empty lists are a ConfigError.
std::vector<double> parse_value_list(const std::string& text);

std::vector<double> linspace(double from, double to, int count);

}  // namespace wqed::cli
