// SPDX-License-Identifier: Apache-2.0
#include "wqed_cli/runner.hpp"

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "wqed/collective.hpp"
#include "wqed/correlations.hpp"
#include "wqed/errors.hpp"
#include "wqed/oracle.hpp"
#include "wqed/spectral.hpp"
#include "wqed/version.hpp"

namespace wqed::cli {

using nlohmann::json;

namespace {

struct DrivePoint {
  double epsilon;
  double delta;
};

struct PointResult {
  std::vector<std::vector<Cell>> g2_zero;
  std::vector<std::vector<Cell>> g2_tau;
  std::vector<std::string> json_lines;
  std::vector<std::string> warnings;
  std::optional<Failure> failure;
};

std::string describe(const DrivePoint& p) {
  return "epsilon=" + format_number(p.epsilon) + " delta=" + format_number(p.delta);
}

double delta_unit(const Scenario& s, const ValidatedSystem& sys) {
  switch (s.delta_units) {
    case DeltaUnits::Absolute: return 1.0;
    case DeltaUnits::Coupling: {
      const auto mirrors = sys.mirror_indices();
      if (mirrors.empty()) throw ConfigError(s.name + ": coupling units need mirror atoms");
      const double n = static_cast<double>(mirrors.size()) / 2.0;
      return std::sqrt(2.0 * n * sys.atom(mirrors[0]).rate * sys.medium_rate());
    }
    case DeltaUnits::Polariton: return std::abs(single_excitation_polariton(sys).real());
  }
  return 1.0;
}

Basis driven_basis(const Scenario& s, const ValidatedSystem& sys) {
  try {
    return enumerate_basis(static_cast<int>(sys.size()), s.max_excitations ? s.max_excitations : default_truncation(sys));
  } catch (const DomainError& e) {
    throw ConfigError(s.name + ": " + e.what());
  }
}

PointResult run_point(const Scenario& s, const ValidatedSystem& sys, const Basis& basis, const AnalyticG2* analytic,
                      const DrivePoint& p) {
  PointResult r;
  try {
    const auto sol = solve_driven(sys, {p.epsilon, p.delta}, basis);
    r.warnings = sol.liouvillian.warnings;
    if (s.wants("g2_zero")) {
      const double tau0[] = {0.0};
      const double mean = g1(sol.steady, sol.emission);
      double reg = std::numeric_limits<double>::quiet_NaN();
      if (mean >= 1e-30) reg = g2_regression(sol.liouvillian, sol.steady, sol.emission, tau0).values[0];
      const double an = analytic ? (*analytic)(p.delta) : std::numeric_limits<double>::quiet_NaN();
      r.g2_zero.push_back({p.epsilon, p.delta, mean, reg, an});
    }
    if (s.wants("g2_tau")) {
      const auto curve = g2_regression(sol.liouvillian, sol.steady, sol.emission, s.tau);
      for (std::size_t i = 0; i < curve.tau.size(); ++i)
        r.g2_tau.push_back({p.epsilon, p.delta, curve.tau[i], curve.values[i]});
    }
    if (s.wants("oracle")) {
      double min_rate = std::numeric_limits<double>::infinity();
      for (const auto& a : sys.atoms()) min_rate = std::min(min_rate, a.rate);
      const auto oracle = long_time_steady_oracle(sys, {p.epsilon, p.delta}, 2000.0 / min_rate, basis);
      const double dev = (oracle.matrix - sol.steady.matrix).cwiseAbs().maxCoeff();
      auto rep = compare(s.name + " " + describe(p), "steady state max-norm deviation", dev, 0.0, 1e-9, true);
      r.json_lines.push_back(rep.to_json_line());
      const double pts[] = {p.delta};
      for (const auto& c : g2_cross_validation(sys, pts, p.epsilon, s.name)) r.json_lines.push_back(c.to_json_line());
    }
  } catch (const NumericalError& e) {
    r.failure = Failure{s.name + " " + describe(p), e.what(), false};
  } catch (const Error& e) {
    r.failure = Failure{s.name + " " + describe(p), e.what(), true};
  }
  return r;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) out << format_number(v);
            else out << v;
          },
          row[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

ScenarioResult run_scenario(const Scenario& s, unsigned threads) {
  ScenarioResult out;
  ValidatedSystem sys = [&] {
    try {
      return validate(s.system.build());
    } catch (const ValidationError& e) {
      throw ConfigError(s.name + ": " + e.what());
    }
  }();

  if (s.wants("spectrum")) {
    Table t{"spectrum.csv", spectrum_report_header(), {}};
    for (const auto& row : spectrum_report(sys, s.gamma_grid)) {
      std::vector<Cell> cells;
      for (double v : spectrum_report_values(row)) cells.emplace_back(v);
      t.rows.push_back(std::move(cells));
      if (row.error) out.warnings.push_back("gamma=" + format_number(row.gamma) + ": " + *row.error);
    }
    out.tables.push_back(std::move(t));
  }

  if (s.wants("modes")) {
    Table t{"modes.csv",
            {"mode", "label", "re_eigenvalue", "im_eigenvalue", "coupling", "atom", "position", "re_coefficient",
             "im_coefficient"},
            {}};
    try {
      const auto set = collective_modes(sys);
      for (std::size_t m = 0; m < set.modes.size(); ++m) {
        const auto& mode = set.modes[m];
        for (std::size_t a = 0; a < set.mirror_atoms.size(); ++a) {
          const cplx c = mode.coefficients[static_cast<Eigen::Index>(a)];
          t.rows.push_back({static_cast<long long>(m), to_string(mode.label), mode.eigenvalue.real(),
                            mode.eigenvalue.imag(), mode.coupling, static_cast<long long>(set.mirror_atoms[a]),
                            sys.atom(set.mirror_atoms[a]).position, c.real(), c.imag()});
        }
      }
    } catch (const NumericalError& e) {
      out.failures.push_back({s.name + " modes", e.what(), false});
    } catch (const Error& e) {
      out.failures.push_back({s.name + " modes", e.what(), true});
    }
    out.tables.push_back(std::move(t));
  }

  if (s.wants("census")) {
    Table t{"census.csv", {"quantity", "value"}, {}};
    try {
      const auto mirror = two_excitation_census(sys);
      const auto pol = polariton_census(sys);
      const double nan = std::numeric_limits<double>::quiet_NaN();
      t.rows.push_back({std::string("mirror_two_excitation_bright"), static_cast<long long>(mirror.bright)});
      t.rows.push_back({std::string("mirror_two_excitation_dark"), static_cast<long long>(mirror.dark)});
      t.rows.push_back({std::string("two_excitation_states"), static_cast<long long>(pol.states)});
      t.rows.push_back({std::string("two_excitation_participating"), static_cast<long long>(pol.participating.size())});
      t.rows.push_back({std::string("polariton_delta"), pol.delta ? *pol.delta : nan});
      t.rows.push_back({std::string("polariton_narrow_im"), pol.narrow_pair ? pol.narrow_pair->imag() : nan});
      t.rows.push_back({std::string("broad_state_re"), pol.broad_state ? pol.broad_state->real() : nan});
      t.rows.push_back({std::string("broad_state_im"), pol.broad_state ? pol.broad_state->imag() : nan});
    } catch (const NumericalError& e) {
      out.failures.push_back({s.name + " census", e.what(), false});
    } catch (const Error& e) {
      out.failures.push_back({s.name + " census", e.what(), true});
    }
    out.tables.push_back(std::move(t));
  }

  const bool driven = s.wants("g2_zero") || s.wants("g2_tau") || s.wants("oracle");
  if (driven) {
    const double unit = delta_unit(s, sys);
    std::vector<DrivePoint> points;
    for (double e : s.epsilon)
      for (double d : s.delta) points.push_back({s.epsilon_over_gamma ? e * sys.medium_rate() : e, d * unit});
    const Basis basis = driven_basis(s, sys);
    std::optional<AnalyticG2> analytic;
    if (s.wants("g2_zero")) analytic.emplace(sys);
    if (s.wants("oracle") && s.system.kind == SystemSpec::Kind::Canonical)
      out.json_lines.push_back(mode_basis_reduction_check(s.system.gamma, s.system.Gamma, s.system.d).to_json_line());

    const auto results = parallel_map<PointResult>(points.size(), threads, [&](std::size_t i) {
      return run_point(s, sys, basis, analytic ? &*analytic : nullptr, points[i]);
    });
    Table zero{"g2_zero.csv", {"epsilon", "delta", "g1", "g2_regression", "g2_analytic"}, {}};
    Table tau{"g2_tau.csv", {"epsilon", "delta", "tau", "g2"}, {}};
    std::set<std::string> seen;
    for (const auto& r : results) {
      zero.rows.insert(zero.rows.end(), r.g2_zero.begin(), r.g2_zero.end());
      tau.rows.insert(tau.rows.end(), r.g2_tau.begin(), r.g2_tau.end());
      out.json_lines.insert(out.json_lines.end(), r.json_lines.begin(), r.json_lines.end());
      for (const auto& w : r.warnings)
        if (seen.insert(w).second) out.warnings.push_back(w);
      if (r.failure) out.failures.push_back(*r.failure);
    }
    if (s.wants("g2_zero")) out.tables.push_back(std::move(zero));
    if (s.wants("g2_tau")) out.tables.push_back(std::move(tau));
  }
  return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
}

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

int status_of(const ScenarioResult& r) {
  int status = 0;
  for (const auto& f : r.failures) status = std::max(status, f.config ? 1 : 2);
  return status;
}

void write_result(const std::filesystem::path& dir, const ScenarioResult& r, json manifest) {
  std::filesystem::create_directories(dir);
  json files = json::array();
  for (const auto& t : r.tables) {
    write_text(dir / t.file, to_csv(t));
    files.push_back(t.file);
  }
  if (!r.json_lines.empty()) {
    std::string text;
    for (const auto& l : r.json_lines) text += l + "\n";
    write_text(dir / "oracle.jsonl", text);
    files.push_back("oracle.jsonl");
  }
  manifest["outputs"] = files;
  manifest["warnings"] = r.warnings;
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"point", f.point}, {"error", f.error}, {"kind", f.config ? "config" : "numerical"}});
  manifest["failures"] = failures;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

json base_manifest(const RunOptions& options) {
  json m;
  m["tool"] = "wqed";
  m["version"] = std::string(wqed::version());
  m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  m["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                       "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH);
  m["threads"] = options.threads;
  m["seed"] = options.seed;
  return m;
}

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    log << "config error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    log << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    log << "numerical error: " << e.what() << "\n";
    return 2;
  }
}

void report(std::ostream& log, const std::string& name, const ScenarioResult& r, const std::filesystem::path& dir) {
  for (const auto& w : r.warnings) log << name << ": warning: " << w << "\n";
  for (const auto& f : r.failures)
    log << name << ": " << (f.config ? "config" : "numerical") << " error at " << f.point << ": " << f.error << "\n";
  log << name << ": wrote " << dir.string() << "\n";
}

}  // namespace

int run_command(const std::string& path_or_name, const RunOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const auto scenarios = load_scenarios(path_or_name);
    int status = 0;
    for (const auto& s : scenarios) {
      int scenario_status = 0;
      const auto t0 = std::chrono::steady_clock::now();
      ScenarioResult r;
      try {
        r = run_scenario(s, options.threads);
      } catch (const ConfigError& e) {
        log << s.name << ": config error: " << e.what() << "\n";
        status = std::max(status, 1);
        continue;
      } catch (const NumericalError& e) {
        log << s.name << ": numerical error: " << e.what() << "\n";
        status = std::max(status, 2);
        continue;
      } catch (const Error& e) {
        log << s.name << ": config error: " << e.what() << "\n";
        status = std::max(status, 1);
        continue;
      }
      json m = base_manifest(options);
      m["scenario"] = s.to_json();
      m["input_hash"] = hex(fnv1a(s.to_json().dump()));
      m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const auto dir = options.out_dir / s.name;
      write_result(dir, r, m);
      report(log, s.name, r, dir);
      scenario_status = status_of(r);
      status = std::max(status, scenario_status);
    }
    return status;
  });
}

int sweep_command(const std::string& path_or_name, const std::string& axis, const std::vector<double>& values,
                  const RunOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    if (std::find(kSweepAxes.begin(), kSweepAxes.end(), axis) == kSweepAxes.end())
      throw ConfigError("unknown sweep axis '" + axis + "' (gamma, epsilon, delta, d, N)");
    const auto scenarios = load_scenarios(path_or_name);
    int status = 0;
    for (const auto& base : scenarios) {
      std::vector<Scenario> variants;
      for (double v : values) variants.push_back(with_axis_value(base, axis, v));
      for (const auto& v : variants) validate(v.system.build());

      const auto t0 = std::chrono::steady_clock::now();
      const auto results = parallel_map<ScenarioResult>(variants.size(), options.threads, [&](std::size_t i) {
        try {
          return run_scenario(variants[i], 1);
        } catch (const std::exception& e) {
          ScenarioResult r;
          const bool config = dynamic_cast<const NumericalError*>(&e) == nullptr;
          r.failures.push_back({base.name + " " + axis + "=" + format_number(values[i]), e.what(), config});
          return r;
        }
      });

      ScenarioResult merged;
      std::map<std::string, std::size_t> index;
      std::set<std::string> seen;
      for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        for (const auto& t : r.tables) {
          auto it = index.find(t.file);
          if (it == index.end()) {
            Table tagged{t.file, {axis}, {}};
            tagged.header.insert(tagged.header.end(), t.header.begin(), t.header.end());
            merged.tables.push_back(std::move(tagged));
            it = index.emplace(t.file, merged.tables.size() - 1).first;
          }
          for (const auto& row : t.rows) {
            std::vector<Cell> tagged{values[i]};
            tagged.insert(tagged.end(), row.begin(), row.end());
            merged.tables[it->second].rows.push_back(std::move(tagged));
          }
        }
        merged.json_lines.insert(merged.json_lines.end(), r.json_lines.begin(), r.json_lines.end());
        for (const auto& w : r.warnings)
          if (seen.insert(w).second) merged.warnings.push_back(w);
        merged.failures.insert(merged.failures.end(), r.failures.begin(), r.failures.end());
      }

      json m = base_manifest(options);
      m["scenario"] = base.to_json();
      m["axis"] = axis;
      m["values"] = values;
      m["input_hash"] = hex(fnv1a(base.to_json().dump() + "|" + axis + "|" + json(values).dump()));
      m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const auto dir = options.out_dir / (base.name + "-sweep-" + axis);
      write_result(dir, merged, m);
      report(log, base.name, merged, dir);
      status = std::max(status, status_of(merged));
    }
    return status;
  });
}

}  // namespace wqed::cli
