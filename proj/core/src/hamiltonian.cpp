// SPDX-License-Identifier: Apache-2.0
#include "wqed/hamiltonian.hpp"

#include <cmath>

#include "wqed/errors.hpp"

namespace wqed {

namespace {


void check_basis(std::size_t n_atoms, const Basis& basis) {
  if (static_cast<std::size_t>(basis.n_atoms()) != n_atoms)
    throw DomainError("basis atom count does not match the system");
}

}  // namespace

CouplingMatrices coupling_matrices(std::span<const AtomSpec> atoms) {
  const auto n = static_cast<Eigen::Index>(atoms.size());
  CouplingMatrices out{RMatrix::Zero(n, n), RMatrix::Zero(n, n)};
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = m; k < n; ++k) {
      const double amp = std::sqrt(atoms[m].rate * atoms[k].rate);
      const cplx e = waveguide_phase(std::abs(atoms[m].position - atoms[k].position));
      const double j = m == k ? 0.0 : amp * e.imag();
      const double g = m == k ? amp : amp * e.real();
      out.coherent(m, k) = out.coherent(k, m) = j;
      out.dissipative(m, k) = out.dissipative(k, m) = g;
    }
  }
  return out;
}

CouplingMatrices coupling_matrices(const ValidatedSystem& system) { return coupling_matrices(system.atoms()); }

CMatrix effective_coefficients(std::span<const AtomSpec> atoms) {
  const auto n = static_cast<Eigen::Index>(atoms.size());
  CMatrix h(n, n);
  const cplx minus_i{0.0, -1.0};
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index k = 0; k < n; ++k) {
      const double amp = std::sqrt(atoms[m].rate * atoms[k].rate);
      h(m, k) = minus_i * amp * waveguide_phase(std::abs(atoms[k].position - atoms[m].position));
    }
  return h;
}

OperatorRep effective_hamiltonian(std::span<const AtomSpec> atoms, const Basis& basis) {
  check_basis(atoms.size(), basis);
  return hopping_operator(basis, effective_coefficients(atoms));
}

OperatorRep effective_hamiltonian(const ValidatedSystem& system, const Basis& basis) {
  return effective_hamiltonian(system.atoms(), basis);
}

OperatorRep coherent_hamiltonian(const ValidatedSystem& system, const Basis& basis) {
  check_basis(system.size(), basis);
  return hopping_operator(basis, coupling_matrices(system).coherent.cast<cplx>());
}

OperatorRep dissipative_form(const ValidatedSystem& system, const Basis& basis) {
  check_basis(system.size(), basis);
  return hopping_operator(basis, coupling_matrices(system).dissipative.cast<cplx>());
}

OperatorRep driven_hamiltonian(const ValidatedSystem& system, const DriveSpec& drive, const Basis& basis) {
  validate_drive(drive);
  auto h = coherent_hamiltonian(system, basis);
  h.matrix -= drive.delta * number_operator(basis).matrix;
  if (drive.epsilon != 0.0) {
    const auto sp = ladder_operator(basis, system.medium_index()).matrix;
    h.matrix += drive.epsilon * (sp + sp.adjoint());
  }
  h.matrix = 0.5 * (h.matrix + h.matrix.adjoint()).eval();
  return h;
}

}  // namespace wqed
