// SPDX-License-Identifier: Apache-2.0
#include "wqed/collective.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>

#include "wqed/errors.hpp"
#include "wqed/hamiltonian.hpp"
#include "wqed/spectral.hpp"

namespace wqed {

namespace {

std::vector<AtomSpec> mirror_atoms(const ValidatedSystem& system, std::vector<std::size_t>& idx) {
  idx = system.mirror_indices();
  std::vector<AtomSpec> atoms;
  for (auto i : idx) atoms.push_back(system.atom(i));
  return atoms;
}

// Fix the global phase: largest component real and positive.
void canonical_phase(CVector& v) {
  Eigen::Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  if (std::abs(v[at]) > 0.0) v *= std::conj(v[at]) / std::abs(v[at]);
}

}  // namespace

std::string to_string(ModeLabel label) {
  switch (label) {
    case ModeLabel::Bright: return "bright";
    case ModeLabel::DarkCoupled: return "dark-coupled";
    case ModeLabel::DarkDecoupled: return "dark-decoupled";
  }
  return "unknown";
}

std::size_t ModeSet::count(ModeLabel label) const {
  return static_cast<std::size_t>(std::count_if(modes.begin(), modes.end(), [&](const Mode& m) { return m.label == label; }));
}

ModeSet collective_modes(const ValidatedSystem& system) {
  ModeSet set;
  const auto atoms = mirror_atoms(system, set.mirror_atoms);
  if (atoms.size() < 2) throw DomainError("collective_modes requires at least two mirror atoms");
  const CMatrix h = effective_coefficients(atoms);
  const double scale = h.cwiseAbs().maxCoeff();
  if ((h * h.adjoint() - h.adjoint() * h).cwiseAbs().maxCoeff() > 1e-12 * scale * scale)
    throw DomainError("mirror-only effective Hamiltonian is not normal; modes are not orthogonal");

  // Medium row of the full single-excitation coefficient matrix.
  const CMatrix full = effective_coefficients(system.atoms());
  const auto p = static_cast<Eigen::Index>(system.medium_index());
  CVector hp(static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t m = 0; m < set.mirror_atoms.size(); ++m)
    hp[static_cast<Eigen::Index>(m)] = full(p, static_cast<Eigen::Index>(set.mirror_atoms[m]));

  Eigen::ComplexSchur<CMatrix> schur(h);
  CMatrix u = schur.matrixU();
  CVector values = schur.matrixT().diagonal();
  const auto order = spectral_order(values, 1e-10);
  {
    CMatrix su(u.rows(), u.cols());
    CVector sv(values.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
      su.col(static_cast<Eigen::Index>(j)) = u.col(order[j]);
      sv[static_cast<Eigen::Index>(j)] = values[order[j]];
    }
    u = su;
    values = sv;
  }

  const auto n = values.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && std::abs(values[end] - values[start]) <= 1e-10 * std::max(1.0, scale)) ++end;
    const auto size = end - start;
    if (size > 1) {
      // Rotate the cluster so its first column carries the whole coupling.
      const CVector w = u.middleCols(start, size).transpose() * hp;
      const double wn = w.norm();
      if (wn > 0.0) {
        CMatrix seed = CMatrix::Identity(size, size);
        seed.col(0) = w.conjugate() / wn;
        Eigen::HouseholderQR<CMatrix> qr(seed);
        CMatrix v = qr.householderQ() * CMatrix::Identity(size, size);
        v.col(0) = w.conjugate() / wn;
        u.middleCols(start, size) = (u.middleCols(start, size) * v).eval();
      }
    }
    start = end;
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    Mode mode;
    mode.coefficients = u.col(j);
    canonical_phase(mode.coefficients);
    mode.eigenvalue = values[j];
    mode.coupling = std::abs(mode.coefficients.dot(hp.conjugate()));
    if (std::abs(mode.eigenvalue.imag()) > kDarkThreshold) mode.label = ModeLabel::Bright;
    else mode.label = mode.coupling > kDarkThreshold ? ModeLabel::DarkCoupled : ModeLabel::DarkDecoupled;
    set.modes.push_back(std::move(mode));
  }
  return set;
}

Census two_excitation_census(const ValidatedSystem& system) {
  std::vector<std::size_t> idx;
  const auto atoms = mirror_atoms(system, idx);
  if (atoms.size() < 2) throw DomainError("two_excitation_census requires at least two mirror atoms");
  const auto basis = enumerate_basis(static_cast<int>(atoms.size()), 2);
  const CMatrix block = restrict(effective_hamiltonian(atoms, basis), 2);
  Eigen::ComplexEigenSolver<CMatrix> es(block, false);
  if (es.info() != Eigen::Success) throw NumericalError("two-excitation eigensolver did not converge");
  Census c;
  const CVector values = es.eigenvalues();
  for (auto j : spectral_order(values)) {
    c.eigenvalues.push_back(values[j]);
    if (std::abs(values[j].imag()) > kDarkThreshold) ++c.bright;
    else ++c.dark;
  }
  return c;
}

PolaritonCensus polariton_census(const ValidatedSystem& system) {
  const int n = static_cast<int>(system.size());
  if (n < 2) throw DomainError("polariton_census requires at least two atoms");
  const auto basis = enumerate_basis(n, 2);
  const auto heff = effective_hamiltonian(system, basis);
  const CMatrix h1 = restrict(heff, 1);
  const CMatrix h2 = restrict(heff, 2);

  PolaritonCensus out;
  out.states = static_cast<std::size_t>(h2.rows());
  Eigen::ComplexEigenSolver<CMatrix> all(h2, false);
  if (all.info() != Eigen::Success) throw NumericalError("two-excitation eigensolver did not converge");
  for (auto j : spectral_order(all.eigenvalues())) out.eigenvalues.push_back(all.eigenvalues()[j]);

  // Two-excitation states reachable from |g> by driving the medium atom.
  const CMatrix up = ladder_operator(basis, system.medium_index()).matrix.adjoint();
  const auto b0 = basis.block(0), b1 = basis.block(1), b2 = basis.block(2);
  const CVector up10 = up.block(static_cast<Eigen::Index>(b1.begin), static_cast<Eigen::Index>(b0.begin),
                                static_cast<Eigen::Index>(b1.size), 1);
  const CMatrix up21 = up.block(static_cast<Eigen::Index>(b2.begin), static_cast<Eigen::Index>(b1.begin),
                                static_cast<Eigen::Index>(b2.size), static_cast<Eigen::Index>(b1.size));
  const std::vector<CMatrix> g1{h1}, g2{h2};
  const CMatrix v1 = invariant_closure({up10}, g1);
  std::vector<CVector> seeds;
  for (Eigen::Index j = 0; j < v1.cols(); ++j) seeds.push_back(up21 * v1.col(j));
  const CMatrix v2 = invariant_closure(seeds, g2);
  Eigen::ComplexEigenSolver<CMatrix> part(v2.adjoint() * h2 * v2, false);
  if (part.info() != Eigen::Success) throw NumericalError("two-excitation eigensolver did not converge");
  for (auto j : spectral_order(part.eigenvalues())) out.participating.push_back(part.eigenvalues()[j]);

  const double tol = 1e-10;
  for (const auto& z : out.participating) {
    if (z.real() <= tol) continue;
    const bool paired = std::any_of(out.participating.begin(), out.participating.end(), [&](const cplx& w) {
      return std::abs(w.real() + z.real()) <= 1e-8 * std::max(1.0, z.real()) &&
             std::abs(w.imag() - z.imag()) <= 1e-8 * std::max(1.0, std::abs(z.imag()));
    });
    if (paired && (!out.narrow_pair || std::abs(z.imag()) < std::abs(out.narrow_pair->imag()))) out.narrow_pair = z;
  }
  if (out.narrow_pair) out.delta = out.narrow_pair->real();
  for (const auto& z : out.participating) {
    if (!out.broad_state || std::abs(z.real()) < std::abs(out.broad_state->real()) - tol ||
        (std::abs(z.real()) <= std::abs(out.broad_state->real()) + tol && std::abs(z.imag()) > std::abs(out.broad_state->imag())))
      out.broad_state = z;
  }
  return out;
}

cplx single_excitation_polariton(const ValidatedSystem& system) {
  const int n = static_cast<int>(system.size());
  const auto basis = enumerate_basis(n, 1);
  const CMatrix h1 = restrict(effective_hamiltonian(system, basis), 1);
  CVector seed = CVector::Zero(h1.rows());
  seed[static_cast<Eigen::Index>(*basis.index_of(1u << system.medium_index()) - basis.block(1).begin)] = 1.0;
  const std::vector<CMatrix> gens{h1};
  const CMatrix v = invariant_closure({seed}, gens);
  Eigen::ComplexEigenSolver<CMatrix> es(v.adjoint() * h1 * v, false);
  if (es.info() != Eigen::Success) throw NumericalError("single-excitation eigensolver did not converge");
  std::optional<cplx> best;
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    const cplx z = es.eigenvalues()[j];
    if (z.real() >= -1e-12) continue;
    if (!best || std::abs(z.imag()) < std::abs(best->imag())) best = z;
  }
  if (!best) throw DomainError("no detuned single-excitation polariton in this geometry");
  return *best;
}

}  // namespace wqed
