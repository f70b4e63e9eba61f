// SPDX-License-Identifier: Apache-2.0
#pragma once

// Waveguide-mediated couplings after Markovian elimination of the photons.
//
//   coherent      J_mn = sqrt(G_m G_n) sin(k0 |x_m - x_n|)
//   dissipative   g_mn = sqrt(G_m G_n) cos(k0 (x_m - x_n))
//   H_eff         = -i sum_mn sqrt(G_m G_n) exp(i k0 |x_n - x_m|) s_m^+ s_n
//
// Driven Hamiltonians are written in the frame rotating at the drive
// frequency, so they carry -delta * N and no explicit time dependence.

#include <span>

#include "wqed/model.hpp"
#include "wqed/subspace.hpp"

namespace wqed {

struct CouplingMatrices {
  RMatrix coherent;
  RMatrix dissipative;
};

CouplingMatrices coupling_matrices(const ValidatedSystem& system);
CouplingMatrices coupling_matrices(std::span<const AtomSpec> atoms);

/// Single-particle matrix of H_eff (the coefficients of s_m^+ s_n).
CMatrix effective_coefficients(std::span<const AtomSpec> atoms);

OperatorRep effective_hamiltonian(const ValidatedSystem& system, const Basis& basis);
OperatorRep effective_hamiltonian(std::span<const AtomSpec> atoms, const Basis& basis);

/// H_c = sum J_mn s_m^+ s_n.
OperatorRep coherent_hamiltonian(const ValidatedSystem& system, const Basis& basis);

/// D = sum g_mn s_m^+ s_n, the anti-Hermitian part of H_eff up to -i.
OperatorRep dissipative_form(const ValidatedSystem& system, const Basis& basis);

/// -delta N + H_c + epsilon (s_p + s_p^+), Hermitian.
OperatorRep driven_hamiltonian(const ValidatedSystem& system, const DriveSpec& drive, const Basis& basis);

}  // namespace wqed
