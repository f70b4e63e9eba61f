// SPDX-License-Identifier: Apache-2.0
#pragma once

// System geometry and drive descriptions.
//
// Units: positions in units of the atomic transition wavelength lambda0,
// rates in units of the mirror decay rate, hbar = v_g = 1. The waveguide
// phase between two atoms is therefore k0*x = 2*pi*position.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wqed {

/// exp(i k0 x) for x in units of lambda0. Quarter-wave multiples are exact,
/// so sin and cos vanish identically where the geometry demands it.
std::complex<double> waveguide_phase(double x);

enum class Role { Medium, Mirror };

std::string to_string(Role role);
Role role_from_string(const std::string& name);

struct AtomSpec {
  double position = 0.0;  ///< units of lambda0
  double rate = 1.0;      ///< decay rate into the waveguide
  Role role = Role::Mirror;

  bool operator==(const AtomSpec&) const = default;
};

struct SystemConfig {
  std::vector<AtomSpec> atoms;

  bool operator==(const SystemConfig&) const = default;
};

/// Coherent probe on the medium atom: amplitude epsilon, detuning
/// delta = omega_d - omega_0.
struct DriveSpec {
  double epsilon = 0.0;
  double delta = 0.0;
};

void validate_drive(const DriveSpec& drive);

/// A configuration that passed validation. Atoms are held in ascending
/// position order; the medium atom is located by role.
class ValidatedSystem {
 public:
  std::size_t size() const noexcept { return atoms_.size(); }
  std::span<const AtomSpec> atoms() const noexcept { return atoms_; }
  const AtomSpec& atom(std::size_t i) const { return atoms_.at(i); }
  std::size_t medium_index() const noexcept { return medium_; }
  double medium_rate() const noexcept { return atoms_[medium_].rate; }
  /// k0 * x_i in radians.
  double phase(std::size_t i) const { return phases_.at(i); }
  std::vector<std::size_t> mirror_indices() const;
  const SystemConfig& config() const noexcept { return config_; }

 private:
  friend ValidatedSystem validate(const SystemConfig& config);
  ValidatedSystem() = default;

  SystemConfig config_;
  std::vector<AtomSpec> atoms_;
  std::vector<double> phases_;
  std::size_t medium_ = 0;
};

/// Check every invariant and collect all violations into a ValidationError.
ValidatedSystem validate(const SystemConfig& config);

/// Two mirror atoms at -d and -d + 1/2 around a medium atom at the origin.
/// Requires 0 < d < 1/2.
SystemConfig canonical_three_atom(double gamma, double Gamma, double d = 0.25);

/// 2N mirror atoms at +-(2k+1)/4, k = 0..N-1, medium atom at the origin.
SystemConfig n_atom_mirror_config(int N, double gamma, double Gamma);

/// Copy of the configuration with the medium atom's rate replaced.
SystemConfig with_medium_rate(const SystemConfig& config, double gamma);

}  // namespace wqed
