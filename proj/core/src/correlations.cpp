// SPDX-License-Identifier: Apache-2.0
#include "wqed/correlations.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>

#include "wqed/errors.hpp"
#include "wqed/hamiltonian.hpp"

namespace wqed {

namespace {

CMatrix block_of(const CMatrix& m, const Basis& basis, int row_k, int col_k) {
  const auto r = basis.block(row_k);
  const auto c = basis.block(col_k);
  return m.block(static_cast<Eigen::Index>(r.begin), static_cast<Eigen::Index>(c.begin),
                 static_cast<Eigen::Index>(r.size), static_cast<Eigen::Index>(c.size));
}

CVector solve_resolvent(const CMatrix& shifted, const CVector& rhs) {
  Eigen::PartialPivLU<CMatrix> lu(shifted);
  if (!(lu.rcond() > 1e-14)) throw SingularResolventError("resolvent is singular at this detuning");
  return lu.solve(rhs);
}

}  // namespace

EmissionOperator emission_operator(const ValidatedSystem& system, const Basis& basis) {
  if (static_cast<std::size_t>(basis.n_atoms()) != system.size())
    throw DomainError("basis atom count does not match the system");
  CVector c(static_cast<Eigen::Index>(system.size()));
  for (std::size_t n = 0; n < system.size(); ++n)
    c[static_cast<Eigen::Index>(n)] = std::sqrt(system.atom(n).rate) * waveguide_phase(system.atom(n).position);
  return {lowering_combination(basis, c), c};
}

EmissionOperator rescaled(const EmissionOperator& sig, cplx factor) {
  return {{factor * sig.op.matrix, sig.op.basis}, factor * sig.coefficients};
}

double g1(const DensityMatrix& rho, const EmissionOperator& sig) {
  const CMatrix n = rho.frame.project(sig.op.matrix.adjoint() * sig.op.matrix);
  return (n * rho.matrix).trace().real();
}

G2Curve g2_regression(const Superoperator& liouvillian, const DensityMatrix& rho_ss, const EmissionOperator& sig,
                      std::span<const double> tau_grid, const PropagationOptions& options) {
  const auto& frame = liouvillian.frame;
  const double mean = g1(rho_ss, sig);
  if (!(mean >= 1e-30)) throw DivisionUnderflowError("mean emitted intensity below 1e-30; g2 undefined");

  // The frame is invariant under s~, so the conditional state stays in it.
  const CMatrix s = frame.project(sig.op.matrix);
  const CMatrix n = frame.project(sig.op.matrix.adjoint() * sig.op.matrix);
  CMatrix cond = s * rho_ss.matrix * s.adjoint();
  cond = 0.5 * (cond + cond.adjoint()).eval();
  const double norm = cond.trace().real();
  if (!(norm > 0.0)) throw DivisionUnderflowError("conditional state has zero weight");
  cond /= norm;

  const auto states = propagate(liouvillian, {cond, frame}, tau_grid, options);
  G2Curve curve;
  curve.tau.assign(tau_grid.begin(), tau_grid.end());
  curve.metadata = {liouvillian.drive.delta, liouvillian.drive.epsilon, "", "regression"};
  for (const auto& st : states) {
    const double v = (n * st.matrix).trace().real() * norm / (mean * mean);
    if (!std::isfinite(v)) throw NumericalError("g2 evaluated to a non-finite value");
    curve.values.push_back(v);
  }
  return curve;
}

std::optional<int> default_truncation(const ValidatedSystem& system) {
  if (system.size() <= 3) return std::nullopt;
  return 3;
}

DrivenSolution solve_driven(const ValidatedSystem& system, const DriveSpec& drive, const Basis& basis,
                            FrameKind frame) {
  auto l = build_liouvillian(system, drive, basis, {frame, std::nullopt});
  auto rho = steady_state(l);
  return {std::move(l), std::move(rho), emission_operator(system, basis)};
}

DrivenSolution solve_driven(const ValidatedSystem& system, const DriveSpec& drive) {
  return solve_driven(system, drive, enumerate_basis(static_cast<int>(system.size()), default_truncation(system)));
}

AnalyticG2::AnalyticG2(const ValidatedSystem& system, cplx gauge) {
  const int n = static_cast<int>(system.size());
  if (n < 2) {
    // A lone atom cannot hold two excitations.
    const auto basis = enumerate_basis(1);
    const auto h = effective_hamiltonian(system, basis);
    h1_ = restrict(h, 1);
    v1_ = CMatrix::Identity(1, 1);
    up10_ = CVector::Ones(1);
    down01_ = gauge * CVector::Constant(1, std::sqrt(system.atom(0).rate));
    return;
  }
  const auto basis = enumerate_basis(n, 2);
  const auto h = effective_hamiltonian(system, basis);
  h1_ = restrict(h, 1);
  h2_ = restrict(h, 2);
  const CMatrix up = ladder_operator(basis, system.medium_index()).matrix.adjoint();
  const CMatrix down = gauge * emission_operator(system, basis).op.matrix;
  up10_ = block_of(up, basis, 1, 0).col(0);
  up21_ = block_of(up, basis, 2, 1);
  down01_ = block_of(down, basis, 0, 1).row(0).transpose();
  down12_ = block_of(down, basis, 1, 2);

  const std::vector<CMatrix> g1{h1_};
  v1_ = invariant_closure({up10_}, g1);
  std::vector<CVector> seeds;
  for (Eigen::Index j = 0; j < v1_.cols(); ++j) seeds.push_back(up21_ * v1_.col(j));
  const std::vector<CMatrix> g2{h2_};
  v2_ = invariant_closure(seeds, g2);
}

CVector AnalyticG2::solve1(double delta) const {
  const CMatrix hv = v1_.adjoint() * h1_ * v1_;
  const CMatrix shifted = delta * CMatrix::Identity(hv.rows(), hv.cols()) - hv;
  return v1_ * solve_resolvent(shifted, v1_.adjoint() * up10_);
}

cplx AnalyticG2::single_amplitude(double delta) const { return down01_.transpose() * solve1(delta); }

CVector AnalyticG2::two_photon_drive(double delta) const {
  if (h2_.size() == 0) return CVector();
  return up21_ * solve1(delta);
}

cplx AnalyticG2::double_amplitude(double delta) const {
  if (h2_.size() == 0) return 0.0;
  const CVector w = two_photon_drive(delta);
  const CMatrix hv = v2_.adjoint() * h2_ * v2_;
  const CMatrix shifted = 2.0 * delta * CMatrix::Identity(hv.rows(), hv.cols()) - hv;
  const CVector y = v2_ * solve_resolvent(shifted, v2_.adjoint() * w);
  return down01_.transpose() * (down12_ * y);
}

double AnalyticG2::operator()(double delta) const {
  const cplx den = single_amplitude(delta);
  const cplx num = double_amplitude(delta);
  if (den == cplx{0.0, 0.0}) return num == cplx{0.0, 0.0} ? 0.0 : std::numeric_limits<double>::infinity();
  const double d2 = std::norm(den);
  return std::norm(num) / (d2 * d2);
}

double g2_zero_analytic(const ValidatedSystem& system, double delta) { return AnalyticG2(system)(delta); }

const ZenoEntry& ZenoReport::entry(const std::string& label) const {
  for (const auto& e : states)
    if (e.label == label) return e;
  throw DomainError("no two-excitation state labelled " + label);
}

ZenoReport zeno_diagnostics(const ValidatedSystem& system, double delta) {
  const auto mirrors = system.mirror_indices();
  if (system.size() != 3 || mirrors.size() != 2 || system.atom(mirrors[0]).rate != system.atom(mirrors[1]).rate)
    throw DomainError("zeno_diagnostics requires the canonical three-atom geometry");
  const double gamma = system.medium_rate();
  const double Gamma = system.atom(mirrors[0]).rate;

  const AnalyticG2 analytic(system);
  const auto basis = enumerate_basis(3, 2);
  const CMatrix h2 = restrict(effective_hamiltonian(system, basis), 2);
  const auto spec = biorthogonal_decompose(h2, true);
  const auto closed = closed_form_two(gamma, Gamma);
  const auto perm = match_eigenvalues(spec.eigenvalues, closed);
  const CVector w = analytic.two_photon_drive(delta);

  ZenoReport report;
  report.delta = delta;
  const char* labels[] = {"beta+", "beta-", "beta3"};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto j = perm[i];
    ZenoEntry e;
    e.label = labels[i];
    e.eigenvalue = spec.eigenvalues[j];
    e.amplitude = spec.left.row(j) * w;
    e.ratio = std::abs(e.amplitude) / std::abs(e.eigenvalue.imag());
    report.states.push_back(e);
  }

  const auto p = system.medium_index();
  const auto block = basis.block(2);
  const auto ia = *basis.index_of((1u << p) | (1u << mirrors[0])) - block.begin;
  const auto ib = *basis.index_of((1u << p) | (1u << mirrors[1])) - block.begin;
  report.ep_bright_amplitude = (w[static_cast<Eigen::Index>(ia)] - w[static_cast<Eigen::Index>(ib)]) / std::sqrt(2.0);
  return report;
}

}  // namespace wqed
