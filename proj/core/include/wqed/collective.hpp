// SPDX-License-Identifier: Apache-2.0
#pragma once

// Bright and dark collective modes of the mirror atoms and their coupling
// to the medium atom.

#include <optional>
#include <string>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/subspace.hpp"

namespace wqed {

enum class ModeLabel { Bright, DarkCoupled, DarkDecoupled };

std::string to_string(ModeLabel label);

/// Thresholds separating bright from dark and coupled from decoupled.
inline constexpr double kDarkThreshold = 1e-10;

struct Mode {
  CVector coefficients;  ///< over the mirror atoms, unit norm
  cplx eigenvalue;       ///< of the mirror-only effective Hamiltonian
  double coupling = 0.0;  ///< |<e_p| H_eff |mode>|
  ModeLabel label = ModeLabel::Bright;
};

struct ModeSet {
  std::vector<std::size_t> mirror_atoms;  ///< system indices of the coefficients
  std::vector<Mode> modes;

  std::size_t count(ModeLabel label) const;
};

/// Diagonalize the single-excitation mirror-only effective Hamiltonian and
/// resolve the medium coupling per mode. Within a degenerate cluster the
/// basis is rotated so that at most one mode couples to the medium. Requires
/// at least two mirrors and a normal mirror-only Hamiltonian.
ModeSet collective_modes(const ValidatedSystem& system);

struct Census {
  std::size_t bright = 0;
  std::size_t dark = 0;
  std::vector<cplx> eigenvalues;
};

/// Two-excitation eigenstates of the mirror atoms alone.
Census two_excitation_census(const ValidatedSystem& system);

struct PolaritonCensus {
  std::size_t states = 0;  ///< dimension of the full two-excitation block
  std::vector<cplx> eigenvalues;
  /// Eigenvalues of the part of the block reachable by driving the medium atom.
  std::vector<cplx> participating;
  /// Real part magnitude of the narrowest participating pair at +-delta.
  std::optional<double> delta;
  std::optional<cplx> narrow_pair;  ///< the +delta member
  /// Participating state with the smallest |Re| and the largest linewidth.
  std::optional<cplx> broad_state;
};

PolaritonCensus polariton_census(const ValidatedSystem& system);

/// The lower single-excitation polariton (negative real part, narrowest
/// line) among the states reachable by driving the medium atom. For the
/// canonical geometry this is lambda-.
cplx single_excitation_polariton(const ValidatedSystem& system);

}  // namespace wqed
