// SPDX-License-Identifier: Apache-2.0
#include "wqed/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <algorithm>
#include <cmath>

#include "wqed/errors.hpp"
#include "wqed/integrator.hpp"

namespace wqed {

namespace {

struct FullOperators {
  CMatrix hamiltonian;
  CMatrix coherent;
  CMatrix dissipative;
  std::vector<CMatrix> jumps;
  std::vector<double> rates;
};

FullOperators full_operators(const ValidatedSystem& system, const DriveSpec& drive, const Basis& basis,
                             const std::optional<RMatrix>& override_dissipative) {
  const auto n = static_cast<Eigen::Index>(system.size());
  RMatrix g = coupling_matrices(system).dissipative;
  if (override_dissipative) {
    if (override_dissipative->rows() != n || override_dissipative->cols() != n)
      throw DomainError("dissipative override has the wrong dimension");
    if ((*override_dissipative - override_dissipative->transpose()).cwiseAbs().maxCoeff() > 0.0)
      throw DomainError("dissipative override must be symmetric");
    g = *override_dissipative;
  }
  FullOperators ops;
  ops.hamiltonian = driven_hamiltonian(system, drive, basis).matrix;
  ops.coherent = coherent_hamiltonian(system, basis).matrix;
  ops.dissipative = hopping_operator(basis, g.cast<cplx>()).matrix;

  Eigen::SelfAdjointEigenSolver<RMatrix> es(g);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double c = es.eigenvalues()[k];
    if (c < -1e-12 * top) throw DomainError("dissipative coupling matrix is not positive semidefinite");
    if (c <= 1e-12 * top) continue;
    ops.rates.push_back(c);
    ops.jumps.push_back(lowering_combination(basis, es.eigenvectors().col(k).cast<cplx>()).matrix);
  }
  return ops;
}

Frame make_reachable(const ValidatedSystem& system, const DriveSpec& drive, const Basis& basis,
                     const FullOperators& ops) {
  std::vector<CMatrix> gens{ops.coherent, ops.dissipative};
  if (drive.epsilon > 0.0) {
    const auto sp = ladder_operator(basis, system.medium_index()).matrix;
    gens.push_back(sp);
    gens.push_back(sp.adjoint());
  }
  for (const auto& j : ops.jumps) gens.push_back(j);
  CVector g = CVector::Zero(static_cast<Eigen::Index>(basis.size()));
  g[0] = 1.0;
  CMatrix q = invariant_closure({g}, gens);
  std::vector<int> exc;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    Eigen::Index at = 0;
    q.col(j).cwiseAbs().maxCoeff(&at);
    exc.push_back(basis.excitation(static_cast<std::size_t>(at)));
  }
  return Frame(basis, std::move(q), std::move(exc));
}

Eigen::Index vec_index(Eigen::Index row, Eigen::Index col, Eigen::Index n) { return row + col * n; }

CMatrix unvec(const CVector& v, Eigen::Index n) { return Eigen::Map<const CMatrix>(v.data(), n, n); }

CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

}  // namespace

Frame Frame::full(const Basis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::vector<int> exc;
  for (std::size_t i = 0; i < basis.size(); ++i) exc.push_back(basis.excitation(i));
  Frame f(basis, CMatrix::Identity(n, n), std::move(exc));
  f.full_ = true;
  return f;
}

Frame::Frame(Basis basis, CMatrix isometry, std::vector<int> excitations)
    : basis_(std::move(basis)), q_(std::move(isometry)), excitations_(std::move(excitations)) {
  if (q_.rows() != static_cast<Eigen::Index>(basis_.size()) || q_.cols() != static_cast<Eigen::Index>(excitations_.size()))
    throw DomainError("frame isometry does not match its basis");
}

CMatrix Frame::project(const CMatrix& op) const { return full_ ? op : CMatrix(q_.adjoint() * op * q_); }

CMatrix Frame::lift(const CMatrix& x) const { return full_ ? x : CMatrix(q_ * x * q_.adjoint()); }

CVector Frame::project_vector(const CVector& v) const { return full_ ? v : CVector(q_.adjoint() * v); }

Frame reachable_frame(const ValidatedSystem& system, const DriveSpec& drive, const Basis& basis) {
  validate_drive(drive);
  return make_reachable(system, drive, basis, full_operators(system, drive, basis, std::nullopt));
}

CMatrix apply_lindblad(const LindbladTerms& terms, const CMatrix& rho) {
  const cplx i{0.0, 1.0};
  const CMatrix k = terms.hamiltonian - i * terms.dissipative;
  CMatrix out = -i * (k * rho) + i * (rho * k.adjoint());
  for (std::size_t j = 0; j < terms.jumps.size(); ++j)
    out += 2.0 * terms.rates[j] * terms.jumps[j] * rho * terms.jumps[j].adjoint();
  return out;
}

Superoperator build_liouvillian(const ValidatedSystem& system, const DriveSpec& drive, const Basis& basis,
                                const LiouvillianOptions& options) {
  validate_drive(drive);
  if (static_cast<std::size_t>(basis.n_atoms()) != system.size())
    throw DomainError("basis atom count does not match the system");
  const auto ops = full_operators(system, drive, basis, options.dissipative_override);
  Frame frame = options.frame == FrameKind::Full ? Frame::full(basis) : make_reachable(system, drive, basis, ops);

  LindbladTerms terms;
  terms.hamiltonian = frame.project(ops.hamiltonian);
  terms.hamiltonian = 0.5 * (terms.hamiltonian + terms.hamiltonian.adjoint()).eval();
  terms.dissipative = frame.project(ops.dissipative);
  terms.rates = ops.rates;
  for (const auto& j : ops.jumps) terms.jumps.push_back(frame.project(j));

  const auto n = frame.size();
  const CMatrix id = CMatrix::Identity(n, n);
  const cplx i{0.0, 1.0};
  const CMatrix k = terms.hamiltonian - i * terms.dissipative;
  CMatrix l = -i * Eigen::kroneckerProduct(id, k) + i * Eigen::kroneckerProduct(k.conjugate(), id);
  for (std::size_t j = 0; j < terms.jumps.size(); ++j)
    l += 2.0 * terms.rates[j] * Eigen::kroneckerProduct(terms.jumps[j].conjugate(), terms.jumps[j]);

  Superoperator out{std::move(l), std::move(frame), drive, std::move(terms), {}, 1.0};
  if (basis.truncated() && drive.epsilon > 0.0)
    out.warnings.push_back("excitation truncation at " + std::to_string(basis.max_excitation()) +
                           " with epsilon > 0; neglected amplitudes scale as (epsilon/gamma)^2");
  if (drive.epsilon > 0.0) {
    double min_rate = system.atom(0).rate;
    for (const auto& a : system.atoms()) min_rate = std::min(min_rate, a.rate);
    out.grading = std::clamp(drive.epsilon / min_rate, 1e-8, 1.0);
  }
  return out;
}

DensityMatrix ground_state(const Frame& frame) {
  CVector g = CVector::Zero(static_cast<Eigen::Index>(frame.basis().size()));
  g[0] = 1.0;
  const CVector v = frame.project_vector(g);
  return {v * v.adjoint(), frame};
}

double steady_state_gap(const Superoperator& liouvillian) {
  const auto& l = liouvillian.matrix;
  if (l.rows() < 2) return 1.0;
  Eigen::BDCSVD<CMatrix> svd(l);
  const auto& s = svd.singularValues();
  if (s[0] == 0.0) return 0.0;
  return s[s.size() - 2] / s[0];
}

DensityMatrix steady_state(const Superoperator& liouvillian) {
  const auto n = liouvillian.dim();
  if (n == 1) return {CMatrix::Ones(1, 1), liouvillian.frame};
  const double gap = steady_state_gap(liouvillian);
  if (!(gap > 1e-8))
    throw DegenerateSteadyStateError("Liouvillian null space is not one-dimensional (gap " + std::to_string(gap) + ")");

  // Border the system with the trace functional in place of the first row.
  // The trace functional is a left null vector of L, so the replaced row is
  // redundant and the bordered matrix is regular whenever the kernel is
  // one-dimensional. LU keeps small populations accurate componentwise.
  CMatrix a = liouvillian.matrix;
  a.row(0).setZero();
  for (Eigen::Index d = 0; d < n; ++d) a(0, vec_index(d, d, n)) = 1.0;
  CVector b = CVector::Zero(n * n);
  b[0] = 1.0;
  Eigen::PartialPivLU<CMatrix> lu(a);
  CVector x = lu.solve(b);
  x += lu.solve(CVector(b - a * x));

  CMatrix rho = unvec(x, n);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return {rho, liouvillian.frame};
}

std::vector<DensityMatrix> propagate(const Superoperator& liouvillian, const DensityMatrix& rho0,
                                     std::span<const double> t_grid, const PropagationOptions& options) {
  const auto n = liouvillian.dim();
  if (rho0.matrix.rows() != n || rho0.matrix.cols() != n) throw DomainError("propagate: state does not match frame");

  // Weak-drive grading: entry (a, b) scales as s^(n_a + n_b), so integrate
  // the rescaled state to keep error control meaningful for every entry.
  const double s = liouvillian.grading;
  const auto& exc = liouvillian.frame.excitations();
  Eigen::VectorXd weight(n * n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r)
      weight[vec_index(r, c, n)] = std::pow(s, exc[static_cast<std::size_t>(r)] + exc[static_cast<std::size_t>(c)]);

  CMatrix a = liouvillian.matrix;
  if (s != 1.0) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) *= weight[j] / weight[i];
  }
  const CVector y0 = vec(rho0.matrix).cwiseQuotient(weight.cast<cplx>());
  const double scale = y0.cwiseAbs().maxCoeff();

  IntegratorOptions io;
  io.rtol = options.rtol;
  io.atol = std::max(options.atol_scale * options.rtol * scale, 1e-300);
  io.min_step = options.min_step;
  io.max_steps = options.max_steps;
  const auto ys = integrate_linear(a, y0, t_grid, io);

  std::vector<DensityMatrix> out;
  out.reserve(ys.size());
  for (const auto& y : ys) out.push_back({unvec(y.cwiseProduct(weight.cast<cplx>()), n), liouvillian.frame});
  return out;
}

}  // namespace wqed
