// SPDX-License-Identifier: Apache-2.0
#include "wqed_cli/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace wqed::cli {

using nlohmann::json;

namespace {

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
  return v;
}

std::vector<double> grid(const json& j, const std::string& what) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(number(v, what + " entry"));
  } else if (j.is_object()) {
    if (j.contains("values")) return grid(j.at("values"), what);
    for (const char* key : {"from", "to", "count"})
      if (!j.contains(key)) throw ConfigError(what + " range needs from, to and count");
    if (!j.at("count").is_number_integer()) throw ConfigError(what + ".count must be an integer");
    const int count = j.at("count").get<int>();
    if (count < 1) throw ConfigError(what + ".count must be at least 1");
    out = linspace(number(j.at("from"), what + ".from"), number(j.at("to"), what + ".to"), count);
  } else if (j.is_number()) {
    out.push_back(number(j, what));
  } else {
    throw ConfigError(what + " must be a list, a number or {from, to, count}");
  }
  if (out.empty()) throw ConfigError(what + " must not be empty");
  return out;
}

SystemSpec parse_system(const json& j) {
  if (!j.is_object()) throw ConfigError("system must be an object");
  SystemSpec s;
  if (j.contains("atoms")) {
    s.kind = SystemSpec::Kind::Explicit;
    if (!j.at("atoms").is_array() || j.at("atoms").empty()) throw ConfigError("system.atoms must be a non-empty list");
    for (const auto& a : j.at("atoms")) {
      if (!a.is_object()) throw ConfigError("each atom must be an object");
      AtomSpec atom;
      atom.position = number(a.value("position", json()), "atom.position");
      atom.rate = number(a.value("rate", json()), "atom.rate");
      try {
        atom.role = role_from_string(a.value("role", std::string("mirror")));
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
      s.atoms.atoms.push_back(atom);
    }
    return s;
  }
  const std::string builder = j.value("builder", std::string("canonical"));
  if (builder == "canonical") s.kind = SystemSpec::Kind::Canonical;
  else if (builder == "n_atom") s.kind = SystemSpec::Kind::NAtom;
  else throw ConfigError("unknown system builder '" + builder + "' (canonical, n_atom)");
  if (j.contains("gamma")) s.gamma = number(j.at("gamma"), "system.gamma");
  if (j.contains("Gamma")) s.Gamma = number(j.at("Gamma"), "system.Gamma");
  if (j.contains("d")) s.d = number(j.at("d"), "system.d");
  if (j.contains("N")) {
    if (!j.at("N").is_number_integer()) throw ConfigError("system.N must be an integer");
    s.N = j.at("N").get<int>();
  }
  return s;
}

DeltaUnits parse_units(const std::string& u) {
  if (u == "absolute") return DeltaUnits::Absolute;
  if (u == "coupling") return DeltaUnits::Coupling;
  if (u == "polariton") return DeltaUnits::Polariton;
  throw ConfigError("unknown delta_units '" + u + "' (absolute, coupling, polariton)");
}

std::string units_name(DeltaUnits u) {
  switch (u) {
    case DeltaUnits::Absolute: return "absolute";
    case DeltaUnits::Coupling: return "coupling";
    case DeltaUnits::Polariton: return "polariton";
  }
  return "absolute";
}

Scenario parse_one(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario must be an object");
  static const std::set<std::string> known{"name", "system", "drive", "tau", "gamma_grid", "outputs", "max_excitations"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("unknown scenario field '" + key + "'");
  Scenario s;
  if (!j.contains("name") || !j.at("name").is_string() || j.at("name").get<std::string>().empty())
    throw ConfigError("scenario needs a non-empty string name");
  s.name = j.at("name").get<std::string>();
  for (char c : s.name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
      throw ConfigError("scenario name '" + s.name + "' may only contain letters, digits, '_', '-', '.'");
  s.system = parse_system(j.value("system", json::object()));

  if (!j.contains("outputs") || !j.at("outputs").is_array() || j.at("outputs").empty())
    throw ConfigError(s.name + ": outputs must be a non-empty list");
  for (const auto& o : j.at("outputs")) {
    if (!o.is_string() || std::find(kOutputs.begin(), kOutputs.end(), o.get<std::string>()) == kOutputs.end())
      throw ConfigError(s.name + ": unknown output " + o.dump());
    s.outputs.push_back(o.get<std::string>());
  }

  if (j.contains("drive")) {
    const auto& d = j.at("drive");
    if (!d.is_object()) throw ConfigError(s.name + ": drive must be an object");
    if (d.contains("epsilon") && d.contains("epsilon_over_gamma"))
      throw ConfigError(s.name + ": give either epsilon or epsilon_over_gamma");
    if (d.contains("epsilon")) s.epsilon = grid(d.at("epsilon"), "drive.epsilon");
    if (d.contains("epsilon_over_gamma")) {
      s.epsilon = grid(d.at("epsilon_over_gamma"), "drive.epsilon_over_gamma");
      s.epsilon_over_gamma = true;
    }
    if (d.contains("delta")) s.delta = grid(d.at("delta"), "drive.delta");
    if (d.contains("delta_units")) s.delta_units = parse_units(d.at("delta_units").get<std::string>());
    for (double e : s.epsilon)
      if (e < 0.0) throw ConfigError(s.name + ": epsilon must be non-negative");
  }
  if (j.contains("tau")) s.tau = grid(j.at("tau"), "tau");
  if (j.contains("gamma_grid")) s.gamma_grid = grid(j.at("gamma_grid"), "gamma_grid");
  if (j.contains("max_excitations")) {
    if (!j.at("max_excitations").is_number_integer()) throw ConfigError(s.name + ": max_excitations must be an integer");
    s.max_excitations = j.at("max_excitations").get<int>();
  }

  const bool driven = s.wants("g2_zero") || s.wants("g2_tau") || s.wants("oracle");
  if (driven && (s.epsilon.empty() || s.delta.empty()))
    throw ConfigError(s.name + ": drive.epsilon and drive.delta grids are required for the requested outputs");
  if (s.wants("g2_tau") && s.tau.empty()) throw ConfigError(s.name + ": tau grid required for g2_tau");
  for (std::size_t i = 1; i < s.tau.size(); ++i)
    if (s.tau[i] < s.tau[i - 1] || s.tau[0] < 0.0) throw ConfigError(s.name + ": tau grid must be ascending from >= 0");
  if (s.wants("spectrum") && s.gamma_grid.empty())
    s.gamma_grid = linspace(0.001, 8.0, 200);
  if (s.wants("spectrum") && s.system.kind != SystemSpec::Kind::Canonical)
    throw ConfigError(s.name + ": spectrum output requires the canonical builder");
  for (double g : s.gamma_grid)
    if (!(g > 0.0)) throw ConfigError(s.name + ": gamma_grid values must be positive");
  return s;
}

}  // namespace

SystemConfig SystemSpec::build() const {
  try {
    switch (kind) {
      case Kind::Explicit: return atoms;
      case Kind::Canonical: return canonical_three_atom(gamma, Gamma, d);
      case Kind::NAtom: return n_atom_mirror_config(N, gamma, Gamma);
    }
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return atoms;
}

bool Scenario::wants(const std::string& output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

json Scenario::to_json() const {
  json j;
  j["name"] = name;
  json sys;
  switch (system.kind) {
    case SystemSpec::Kind::Explicit: {
      json atoms = json::array();
      for (const auto& a : system.atoms.atoms)
        atoms.push_back({{"position", a.position}, {"rate", a.rate}, {"role", wqed::to_string(a.role)}});
      sys["atoms"] = atoms;
      break;
    }
    case SystemSpec::Kind::Canonical:
      sys = {{"builder", "canonical"}, {"gamma", system.gamma}, {"Gamma", system.Gamma}, {"d", system.d}};
      break;
    case SystemSpec::Kind::NAtom:
      sys = {{"builder", "n_atom"}, {"gamma", system.gamma}, {"Gamma", system.Gamma}, {"N", system.N}};
      break;
  }
  j["system"] = sys;
  json drive = json::object();
  if (!epsilon.empty()) drive[epsilon_over_gamma ? "epsilon_over_gamma" : "epsilon"] = epsilon;
  if (!delta.empty()) {
    drive["delta"] = delta;
    drive["delta_units"] = units_name(delta_units);
  }
  j["drive"] = drive;
  if (!tau.empty()) j["tau"] = tau;
  if (!gamma_grid.empty()) j["gamma_grid"] = gamma_grid;
  j["outputs"] = outputs;
  if (max_excitations) j["max_excitations"] = *max_excitations;
  return j;
}

std::vector<Scenario> parse_scenarios(const json& doc) {
  std::vector<Scenario> out;
  if (doc.is_object() && doc.contains("scenarios")) {
    if (!doc.at("scenarios").is_array() || doc.at("scenarios").empty())
      throw ConfigError("scenarios must be a non-empty list");
    for (const auto& s : doc.at("scenarios")) out.push_back(parse_one(s));
  } else {
    out.push_back(parse_one(doc));
  }
  std::set<std::string> names;
  for (const auto& s : out)
    if (!names.insert(s.name).second) throw ConfigError("duplicate scenario name '" + s.name + "'");
  return out;
}

std::vector<double> linspace(double from, double to, int count) {
  std::vector<double> v;
  if (count == 1) return {from};
  for (int i = 0; i < count; ++i) v.push_back(from + (to - from) * static_cast<double>(i) / (count - 1));
  return v;
}

std::vector<std::string> builtin_names() { return {"fig2", "fig3a", "fig3b", "fig3c", "fig3d", "nmirror", "oracle"}; }

std::string builtin_description(const std::string& name) {
  if (name == "fig2") return "single- and two-excitation spectra vs gamma in [0.001, 8] Gamma";
  if (name == "fig3a") return "g2(0) vs detuning, gamma = 0.01 Gamma, epsilon in {0.1, 1, 10} gamma";
  if (name == "fig3b") return "g2(0) vs detuning, gamma = Gamma, epsilon in {0.1, 1, 10} gamma";
  if (name == "fig3c") return "resolvent vs master-equation g2(0), gamma = 0.01 Gamma (sweep gamma for the rest)";
  if (name == "fig3d") return "g2(tau) at the lower polariton for gamma in {0.01, 0.02} Gamma, d in {1/4, 1/10}";
  if (name == "nmirror") return "N = 2 atomic mirrors: modes, census and g2(0) (sweep N for the trend)";
  if (name == "oracle") return "oracle cross-checks for the canonical geometry at the blockade dips";
  throw ConfigError("unknown built-in scenario '" + name + "'");
}

std::vector<Scenario> builtin(const std::string& name) {
  json doc;
  const json coupling_grid = {{"from", -3.0}, {"to", 3.0}, {"count", 121}};
  if (name == "fig2") {
    doc = {{"name", "fig2"},
           {"system", {{"builder", "canonical"}, {"gamma", 1.0}}},
           {"gamma_grid", {{"from", 0.001}, {"to", 8.0}, {"count", 200}}},
           {"outputs", {"spectrum"}}};
  } else if (name == "fig3a" || name == "fig3b") {
    doc = {{"name", name},
           {"system", {{"builder", "canonical"}, {"gamma", name == "fig3a" ? 0.01 : 1.0}}},
           {"drive", {{"epsilon_over_gamma", {0.1, 1.0, 10.0}}, {"delta", coupling_grid}, {"delta_units", "coupling"}}},
           {"outputs", {"g2_zero"}}};
  } else if (name == "fig3c") {
    doc = {{"name", "fig3c"},
           {"system", {{"builder", "canonical"}, {"gamma", 0.01}}},
           {"drive",
            {{"epsilon_over_gamma", {1e-3}},
             {"delta", {{"from", -3.0}, {"to", 3.0}, {"count", 41}}},
             {"delta_units", "polariton"}}},
           {"outputs", {"g2_zero"}}};
  } else if (name == "fig3d") {
    json list = json::array();
    for (double g : {0.01, 0.02})
      for (double d : {0.25, 0.1}) {
        std::ostringstream n;
        n << "fig3d_gamma" << g << "_d" << d;
        list.push_back({{"name", n.str()},
                        {"system", {{"builder", "canonical"}, {"gamma", g}, {"d", d}}},
                        {"drive", {{"epsilon_over_gamma", {1e-3}}, {"delta", {-1.0}}, {"delta_units", "polariton"}}},
                        {"tau", {{"from", 0.0}, {"to", 4000.0}, {"count", 8001}}},
                        {"outputs", {"g2_tau"}}});
      }
    doc = {{"scenarios", list}};
  } else if (name == "nmirror") {
    doc = {{"name", "nmirror"},
           {"system", {{"builder", "n_atom"}, {"gamma", 0.01}, {"N", 2}}},
           {"drive",
            {{"epsilon_over_gamma", {1e-3}},
             {"delta", {{"from", -2.0}, {"to", 2.0}, {"count", 81}}},
             {"delta_units", "coupling"}}},
           {"outputs", {"modes", "census", "g2_zero"}}};
  } else if (name == "oracle") {
    doc = {{"name", "oracle"},
           {"system", {{"builder", "canonical"}, {"gamma", 0.01}}},
           {"drive", {{"epsilon_over_gamma", {1e-3}}, {"delta", {-1.0, 1.0}}, {"delta_units", "polariton"}}},
           {"outputs", {"oracle"}}};
  } else {
    throw ConfigError("unknown built-in scenario '" + name + "'");
  }
  return parse_scenarios(doc);
}

std::vector<Scenario> load_scenarios(const std::string& path_or_name) {
  if (std::filesystem::is_regular_file(path_or_name)) {
    std::ifstream in(path_or_name);
    if (!in) throw ConfigError("cannot read " + path_or_name);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(path_or_name + ": " + e.what());
    }
    return parse_scenarios(doc);
  }
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), path_or_name) != names.end()) return builtin(path_or_name);
  throw ConfigError("'" + path_or_name + "' is neither a readable scenario file nor a built-in scenario");
}

Scenario with_axis_value(const Scenario& base, const std::string& axis, double value) {
  Scenario s = base;
  if (axis == "gamma") {
    if (!(value > 0.0)) throw ConfigError("gamma values must be positive");
    if (s.system.kind == SystemSpec::Kind::Explicit) s.system.atoms = with_medium_rate(s.system.atoms, value);
    else s.system.gamma = value;
  } else if (axis == "epsilon") {
    if (value < 0.0) throw ConfigError("epsilon values must be non-negative");
    s.epsilon = {value};
  } else if (axis == "delta") {
    s.delta = {value};
  } else if (axis == "d") {
    if (s.system.kind != SystemSpec::Kind::Canonical) throw ConfigError("axis d requires the canonical builder");
    s.system.d = value;
  } else if (axis == "N") {
    if (value != std::floor(value)) throw ConfigError("N values must be integers");
    if (s.system.kind == SystemSpec::Kind::Explicit) throw ConfigError("axis N requires a builder system");
    if (s.system.kind == SystemSpec::Kind::Canonical && s.system.d != 0.25)
      throw ConfigError("axis N requires mirrors at quarter-wave spacing (d = 0.25)");
    s.system.kind = SystemSpec::Kind::NAtom;
    s.system.N = static_cast<int>(value);
    if (s.wants("spectrum")) throw ConfigError("spectrum output cannot be swept over N");
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "' (gamma, epsilon, delta, d, N)");
  }
  return s;
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse value '" + item + "'");
    }
    if (used != item.size() || !std::isfinite(v)) throw ConfigError("cannot parse value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--values must list at least one value");
  return out;
}

}  // namespace wqed::cli
