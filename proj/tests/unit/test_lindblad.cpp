// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "wqed/errors.hpp"
#include "wqed/integrator.hpp"
#include "wqed/lindblad.hpp"
#include "wqed/spectral.hpp"

using namespace wqed;

namespace {

CMatrix random_hermitian(Eigen::Index n, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {nd(rng), nd(rng)};
  return (a + a.adjoint()) / 2.0;
}

double excited_population(const DensityMatrix& rho) {
  const auto& b = rho.frame.basis();
  const CMatrix full = rho.full();
  double p = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) p += b.excitation(i) * full(i, i).real();
  return p;
}

double medium_population(const DensityMatrix& rho, const ValidatedSystem& sys) {
  const auto& b = rho.frame.basis();
  const CMatrix full = rho.full();
  double p = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.state(i) & (1u << sys.medium_index())) p += full(i, i).real();
  return p;
}

CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

}  // namespace

TEST(Liouvillian, DimensionOfFullFrame) {
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  const auto L = build_liouvillian(sys, {0.1, 0.0}, enumerate_basis(3));
  EXPECT_EQ(L.matrix.rows(), 64);
  EXPECT_EQ(L.dim(), 8);
  EXPECT_TRUE(L.warnings.empty());
}

TEST(Liouvillian, TracePreserving) {
  const auto sys = validate(canonical_three_atom(0.3, 1.0));
  const auto L = build_liouvillian(sys, {0.2, 0.4}, enumerate_basis(3));
  std::mt19937 rng(17);
  for (int t = 0; t < 20; ++t) {
    const CMatrix rho = random_hermitian(8, rng);
    const CVector out = L.matrix * vec(rho);
    const CMatrix m = Eigen::Map<const CMatrix>(out.data(), 8, 8);
    EXPECT_LT(std::abs(m.trace()), 1e-13);
  }
}

TEST(Liouvillian, MatchesMatrixForm) {
  const auto sys = validate(canonical_three_atom(0.05, 1.0, 0.1));
  const auto L = build_liouvillian(sys, {0.3, -0.2}, enumerate_basis(3));
  std::mt19937 rng(23);
  const CMatrix rho = random_hermitian(8, rng);
  const CVector a = L.matrix * vec(rho);
  const CVector b = vec(apply_lindblad(L.terms, rho));
  EXPECT_LT((a - b).norm(), 1e-13 * a.norm());
}

TEST(Liouvillian, MatchesPairwiseDissipator) {
  const auto sys = validate(canonical_three_atom(0.2, 1.0, 0.15));
  const auto b = enumerate_basis(3);
  const auto L = build_liouvillian(sys, {0.1, 0.3}, b);
  const auto g = coupling_matrices(sys).dissipative;
  std::mt19937 rng(29);
  const CMatrix rho = random_hermitian(8, rng);
  const CMatrix h = driven_hamiltonian(sys, L.drive, b).matrix;
  CMatrix ref = cplx(0, -1) * (h * rho - rho * h);
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) {
      const CMatrix sm = ladder_operator(b, m).matrix, sn = ladder_operator(b, n).matrix;
      ref += g(m, n) * (2.0 * sm * rho * sn.adjoint() - sn.adjoint() * sm * rho - rho * sn.adjoint() * sm);
    }
  EXPECT_LT((apply_lindblad(L.terms, rho) - ref).norm(), 1e-13 * ref.norm());
}

TEST(Liouvillian, TruncationWarns) {
  const auto sys = validate(n_atom_mirror_config(2, 0.01, 1.0));
  const auto b = enumerate_basis(5, 3);
  EXPECT_FALSE(build_liouvillian(sys, {1e-5, 0.0}, b).warnings.empty());
  EXPECT_TRUE(build_liouvillian(sys, {0.0, 0.0}, b).warnings.empty());
}

TEST(Liouvillian, RejectsBadOverride) {
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  LiouvillianOptions opt;
  opt.dissipative_override = RMatrix::Identity(2, 2);
  EXPECT_THROW(build_liouvillian(sys, {}, enumerate_basis(3), opt), DomainError);
  RMatrix neg = RMatrix::Identity(3, 3);
  neg(1, 1) = -1.0;
  opt.dissipative_override = neg;
  EXPECT_THROW(build_liouvillian(sys, {}, enumerate_basis(3), opt), DomainError);
}

TEST(ReachableFrame, CanonicalIsFullSpace) {
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  const auto f = reachable_frame(sys, {1e-3, 0.1}, enumerate_basis(3));
  EXPECT_EQ(f.size(), 8);
  const CMatrix q = f.isometry();
  EXPECT_LT((q.adjoint() * q - CMatrix::Identity(8, 8)).norm(), 1e-13);
}

TEST(ReachableFrame, DimensionsForMirrorArrays) {
  const auto s2 = validate(n_atom_mirror_config(2, 0.01, 1.0));
  EXPECT_EQ(reachable_frame(s2, {1e-3, 0.1}, enumerate_basis(5, 3)).size(), 14);
  const auto s3 = validate(n_atom_mirror_config(3, 0.01, 1.0));
  EXPECT_EQ(reachable_frame(s3, {1e-3, 0.1}, enumerate_basis(7, 3)).size(), 16);
}

TEST(ReachableFrame, UndrivenIsGroundOnly) {
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  EXPECT_EQ(reachable_frame(sys, {0.0, 0.3}, enumerate_basis(3)).size(), 1);
}

TEST(SteadyState, UndrivenIsGround) {
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  const auto L = build_liouvillian(sys, {0.0, 0.0}, enumerate_basis(3));
  const auto rho = steady_state(L);
  CMatrix g = CMatrix::Zero(8, 8);
  g(0, 0) = 1.0;
  EXPECT_LT((rho.full() - g).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SteadyState, Invariants) {
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  const auto L = build_liouvillian(sys, {0.05, 0.1}, enumerate_basis(3));
  const auto rho = steady_state(L);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
  EXPECT_LT((rho.matrix - rho.matrix.adjoint()).norm(), 1e-15);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
  EXPECT_LT((apply_lindblad(L.terms, rho.matrix)).norm(), 1e-12);
}

TEST(SteadyState, MatchesReferenceMediumPopulation) {
  // independent dense solve, gamma = 0.01, eps = 1e-5, delta = sqrt(2 Gamma gamma)
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  const auto L = build_liouvillian(sys, {1e-5, std::sqrt(0.02)}, enumerate_basis(3));
  EXPECT_NEAR(medium_population(steady_state(L), sys), 9.999960025282337e-07, 1e-17);
}

TEST(SteadyState, CrossDissipatorMatters) {
  const auto sys = validate(canonical_three_atom(1.0, 1.0));
  const auto b = enumerate_basis(3);
  const double delta = closed_form_single(1.0, 1.0)[1].real();
  const DriveSpec drive{0.1, delta};
  const auto with = steady_state(build_liouvillian(sys, drive, b));
  LiouvillianOptions opt;
  RMatrix g = coupling_matrices(sys).dissipative;
  g(0, 2) = g(2, 0) = 0.0;
  opt.dissipative_override = g;
  const auto without = steady_state(build_liouvillian(sys, drive, b, opt));
  const double pw = medium_population(with, sys), po = medium_population(without, sys);
  EXPECT_NEAR(pw, 0.009302959727389518, 1e-12);
  EXPECT_NEAR(po, 0.0031895160156023934, 1e-12);
  EXPECT_GT(std::abs(pw - po), 1e-6);
}

TEST(SteadyState, DegenerateFullFrameRaises) {
  const auto sys = validate(n_atom_mirror_config(2, 0.01, 1.0));
  const auto b = enumerate_basis(5, 3);
  const auto full = build_liouvillian(sys, {1e-5, 0.1}, b);
  EXPECT_LT(steady_state_gap(full), 1e-8);
  EXPECT_THROW(steady_state(full), DegenerateSteadyStateError);
  LiouvillianOptions opt;
  opt.frame = FrameKind::ReachableFromGround;
  const auto reach = build_liouvillian(sys, {1e-5, 0.1}, b, opt);
  EXPECT_GT(steady_state_gap(reach), 1e-8);
  EXPECT_NO_THROW(steady_state(reach));
}

TEST(SteadyState, WeakDriveScaling) {
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  const auto b = enumerate_basis(3);
  const double delta = std::sqrt(0.02);
  std::vector<double> pops;
  for (double r : {1e-4, 1e-3, 1e-2}) pops.push_back(excited_population(steady_state(build_liouvillian(sys, {r * 0.01, delta}, b))));
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(std::log10(pops[i + 1] / pops[i]), 2.0, 0.02);
}

TEST(SteadyState, TruncationConsistency) {
  const auto sys = validate(n_atom_mirror_config(2, 0.01, 1.0));
  const DriveSpec drive{1e-5, 0.1};
  LiouvillianOptions opt;
  opt.frame = FrameKind::ReachableFromGround;
  const auto r3 = steady_state(build_liouvillian(sys, drive, enumerate_basis(5, 3), opt)).full();
  const auto r4 = steady_state(build_liouvillian(sys, drive, enumerate_basis(5, 4), opt)).full();
  const auto b3 = enumerate_basis(5, 3), b4 = enumerate_basis(5, 4);
  for (std::size_t i = 0; i < b3.size(); ++i) {
    const std::size_t j = *b4.index_of(b3.state(i));
    EXPECT_NEAR(r3(i, i).real(), r4(j, j).real(), 1e-8);
  }
}

TEST(Propagate, GridAtZeroReturnsInitial) {
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  const auto L = build_liouvillian(sys, {0.1, 0.0}, enumerate_basis(3));
  const auto rho0 = ground_state(L.frame);
  const double t[] = {0.0};
  const auto out = propagate(L, rho0, t);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].matrix, rho0.matrix);
}

TEST(Propagate, UndrivenDecayIsMonotone) {
  const auto sys = validate(canonical_three_atom(0.05, 1.0));
  const auto b = enumerate_basis(3);
  const auto L = build_liouvillian(sys, {0.0, 0.0}, b);
  DensityMatrix rho0{CMatrix::Zero(8, 8), L.frame};
  for (int n = 0; n < 3; ++n) rho0.matrix(*b.index_of(1u << n), *b.index_of(1u << n)) = 1.0 / 3.0;
  std::vector<double> t;
  for (int k = 0; k <= 200; ++k) t.push_back(k * 2.0);
  const auto out = propagate(L, rho0, t);
  double prev = 1.0;
  for (const auto& r : out) {
    const double p = excited_population(r);
    EXPECT_LE(p, prev + 1e-12);
    EXPECT_NEAR(r.trace().real(), 1.0, 1e-8);
    prev = p;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Propagate, ConvergesToSteadyState) {
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  const auto L = build_liouvillian(sys, {1e-5, std::sqrt(0.02)}, enumerate_basis(3));
  const double t[] = {0.0, 50.0 / 0.01};
  const auto out = propagate(L, ground_state(L.frame), t);
  const auto ss = steady_state(L);
  EXPECT_LT((out[1].matrix - ss.matrix).cwiseAbs().maxCoeff(), 1e-9);
  Eigen::SelfAdjointEigenSolver<CMatrix> es((out[1].matrix + out[1].matrix.adjoint()) / 2.0);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-9);
}

TEST(Propagate, RejectsDescendingGrid) {
  const auto sys = validate(canonical_three_atom(0.01, 1.0));
  const auto L = build_liouvillian(sys, {0.1, 0.0}, enumerate_basis(3));
  const double t[] = {1.0, 0.5};
  EXPECT_THROW(propagate(L, ground_state(L.frame), t), DomainError);
}

TEST(Integrator, ExponentialDecay) {
  CMatrix a(1, 1);
  a(0, 0) = cplx(-0.5, 2.0);
  CVector y0(1);
  y0(0) = 1.0;
  const double t[] = {0.0, 1.0, 3.0};
  IntegratorStats stats;
  const auto y = integrate_linear(a, y0, t, {}, &stats);
  for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(y[k](0) - std::exp(a(0, 0) * t[k])), 1e-9);
  EXPECT_GT(stats.accepted, 0u);
}

TEST(Integrator, StepUnderflow) {
  CMatrix a(1, 1);
  a(0, 0) = -1e14;
  CVector y0(1);
  y0(0) = 1.0;
  const double t[] = {0.0, 1.0};
  IntegratorOptions opt;
  opt.min_step = 1e-6;
  EXPECT_THROW(integrate_linear(a, y0, t, opt), StepSizeUnderflowError);
}
