// SPDX-License-Identifier: Apache-2.0
#include "wqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

// sin(pi r) and cos(pi r) with the argument reduced before scaling by pi.
double sin_pi(double r) {
  const double sign = r < 0.0 ? -1.0 : 1.0;
  r = std::fmod(std::abs(r), 2.0);
  double s = 1.0;
  if (r > 1.0) {
    r -= 1.0;
    s = -1.0;
  }
  double v;
  if (r <= 0.25) v = std::sin(std::numbers::pi * r);
  else if (r <= 0.75) v = std::cos(std::numbers::pi * (r - 0.5));
  else v = std::sin(std::numbers::pi * (1.0 - r));
  return sign * s * v;
}

double cos_pi(double r) {
  r = std::fmod(std::abs(r), 2.0);
  if (r > 1.0) r = 2.0 - r;
  if (r <= 0.25) return std::cos(std::numbers::pi * r);
  if (r < 0.75) return std::sin(std::numbers::pi * (0.5 - r));
  return -std::cos(std::numbers::pi * (1.0 - r));
}

}  // namespace

std::complex<double> waveguide_phase(double x) { return {cos_pi(2.0 * x), sin_pi(2.0 * x)}; }


std::string to_string(Role role) { return role == Role::Medium ? "medium" : "mirror"; }

Role role_from_string(const std::string& name) {
  if (name == "medium") return Role::Medium;
  if (name == "mirror") return Role::Mirror;
  throw DomainError("unknown atom role '" + name + "' (expected medium or mirror)");
}

void validate_drive(const DriveSpec& drive) {
  if (!std::isfinite(drive.epsilon) || drive.epsilon < 0.0)
    throw DomainError("drive amplitude epsilon must be finite and >= 0");
  if (!std::isfinite(drive.delta)) throw DomainError("drive detuning must be finite");
}

std::vector<std::size_t> ValidatedSystem::mirror_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (i != medium_) out.push_back(i);
  return out;
}

ValidatedSystem validate(const SystemConfig& config) {
  std::vector<std::string> issues;
  const auto n_medium = std::count_if(config.atoms.begin(), config.atoms.end(),
                                      [](const AtomSpec& a) { return a.role == Role::Medium; });
  if (n_medium != 1) issues.push_back("exactly one medium atom required (found " + std::to_string(n_medium) + ")");

  for (std::size_t i = 0; i < config.atoms.size(); ++i) {
    const auto& a = config.atoms[i];
    if (!std::isfinite(a.rate) || a.rate <= 0.0)
      issues.push_back("atom " + std::to_string(i) + ": rate must be positive");
    if (!std::isfinite(a.position))
      issues.push_back("atom " + std::to_string(i) + ": position must be finite");
  }

  auto sorted = config.atoms;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const AtomSpec& a, const AtomSpec& b) { return a.position < b.position; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].position == sorted[i - 1].position)
      issues.push_back("duplicate atom position " + std::to_string(sorted[i].position));
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  ValidatedSystem sys;
  sys.config_ = config;
  sys.atoms_ = std::move(sorted);
  sys.phases_.reserve(sys.atoms_.size());
  for (std::size_t i = 0; i < sys.atoms_.size(); ++i) {
    sys.phases_.push_back(2.0 * std::numbers::pi * sys.atoms_[i].position);
    if (sys.atoms_[i].role == Role::Medium) sys.medium_ = i;
  }
  return sys;
}

SystemConfig canonical_three_atom(double gamma, double Gamma, double d) {
  if (!(gamma > 0.0) || !(Gamma > 0.0)) throw DomainError("canonical_three_atom: rates must be positive");
  if (!(d > 0.0 && d < 0.5)) throw DomainError("canonical_three_atom: d must lie in (0, 1/2)");
  SystemConfig cfg;
  cfg.atoms = {
      {-d, Gamma, Role::Mirror},
      {0.0, gamma, Role::Medium},
      {-d + 0.5, Gamma, Role::Mirror},
  };
  return cfg;
}

SystemConfig n_atom_mirror_config(int N, double gamma, double Gamma) {
  if (N < 1) throw DomainError("n_atom_mirror_config: N must be >= 1");
  if (!(gamma > 0.0) || !(Gamma > 0.0)) throw DomainError("n_atom_mirror_config: rates must be positive");
  SystemConfig cfg;
  for (int k = N - 1; k >= 0; --k) cfg.atoms.push_back({-(2.0 * k + 1.0) / 4.0, Gamma, Role::Mirror});
  cfg.atoms.push_back({0.0, gamma, Role::Medium});
  for (int k = 0; k < N; ++k) cfg.atoms.push_back({(2.0 * k + 1.0) / 4.0, Gamma, Role::Mirror});
  return cfg;
}

SystemConfig with_medium_rate(const SystemConfig& config, double gamma) {
  auto out = config;
  for (auto& a : out.atoms)
    if (a.role == Role::Medium) a.rate = gamma;
  return out;
}

}  // namespace wqed
