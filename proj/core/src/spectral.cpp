// SPDX-License-Identifier: Apache-2.0
#include "wqed/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "wqed/errors.hpp"
#include "wqed/hamiltonian.hpp"

namespace wqed {

namespace {

cplx branch_sqrt(double disc) {
  return disc >= 0.0 ? cplx{std::sqrt(disc), 0.0} : cplx{0.0, std::sqrt(-disc)};
}

bool is_hermitian(const CMatrix& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(scale, 1e-300);
}

double mirror_rate(const ValidatedSystem& system) {
  const auto mirrors = system.mirror_indices();
  if (mirrors.size() != 2) throw DomainError("canonical geometry with two mirror atoms required");
  const double r = system.atom(mirrors[0]).rate;
  if (system.atom(mirrors[1]).rate != r) throw DomainError("mirror atoms must share one rate");
  return r;
}

}  // namespace

CMatrix Spectrum::reconstruct() const { return right * eigenvalues.asDiagonal() * left; }

std::vector<Eigen::Index> spectral_order(const CVector& values, double tol) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values[a].imag() > values[b].imag(); });
  // Regroup runs of equal imaginary part by real part.
  std::size_t start = 0;
  while (start < idx.size()) {
    std::size_t end = start + 1;
    while (end < idx.size() && std::abs(values[idx[end]].imag() - values[idx[start]].imag()) <=
                                   tol * std::max(1.0, std::abs(values[idx[start]].imag())))
      ++end;
    std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(start), idx.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](Eigen::Index a, Eigen::Index b) { return values[a].real() < values[b].real(); });
    start = end;
  }
  return idx;
}

Spectrum biorthogonal_decompose(const CMatrix& m, bool allow_near_defective) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DomainError("biorthogonal_decompose: square non-empty matrix required");
  const auto n = m.rows();
  CVector values;
  CMatrix vectors;
  if (is_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    values = es.eigenvalues().cast<cplx>();
    vectors = es.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<CMatrix> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("complex eigensolver did not converge");
    values = es.eigenvalues();
    vectors = es.eigenvectors();
  }
  for (Eigen::Index j = 0; j < n; ++j) vectors.col(j).normalize();

  const auto order = spectral_order(values);
  Spectrum s;
  s.eigenvalues.resize(n);
  s.right.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    s.eigenvalues[j] = values[order[static_cast<std::size_t>(j)]];
    s.right.col(j) = vectors.col(order[static_cast<std::size_t>(j)]);
  }

  Eigen::FullPivLU<CMatrix> lu(s.right);
  const bool singular = !lu.isInvertible();
  if (!singular) s.left = lu.inverse();
  s.min_overlap = std::numeric_limits<double>::infinity();
  if (singular) {
    s.min_overlap = 0.0;
  } else {
    for (Eigen::Index j = 0; j < n; ++j) s.min_overlap = std::min(s.min_overlap, 1.0 / s.left.row(j).norm());
  }
  if (s.min_overlap < kNearDefectiveThreshold && !allow_near_defective) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "eigenbasis is near defective (min left/right overlap %.3e)", s.min_overlap);
    throw NearDefectiveError(buf, s.min_overlap);
  }
  if (singular) throw NearDefectiveError("eigenvector matrix is singular", 0.0);
  return s;
}

double single_discriminant(double gamma, double Gamma) { return gamma * (8.0 * Gamma - gamma); }

double two_discriminant(double gamma, double Gamma) { return 4.0 * Gamma * Gamma - 12.0 * gamma * Gamma + gamma * gamma; }

std::array<cplx, 3> closed_form_single(double gamma, double Gamma) {
  if (!(gamma > 0.0) || !(Gamma > 0.0)) throw DomainError("closed_form_single: rates must be positive");
  const cplx root = branch_sqrt(single_discriminant(gamma, Gamma));
  const cplx base{0.0, -gamma};
  return {0.5 * (base + root), 0.5 * (base - root), cplx{0.0, -2.0 * Gamma}};
}

std::array<cplx, 3> closed_form_two(double gamma, double Gamma) {
  if (!(gamma > 0.0) || !(Gamma > 0.0)) throw DomainError("closed_form_two: rates must be positive");
  const cplx root = branch_sqrt(two_discriminant(gamma, Gamma));
  const cplx half_minus_i{0.0, -0.5};
  const double sum = 2.0 * Gamma + gamma;
  return {half_minus_i * (sum + root), half_minus_i * (sum - root), cplx{0.0, -sum}};
}

std::vector<Eigen::Index> match_eigenvalues(const CVector& values, std::span<const cplx> reference) {
  const auto n = values.size();
  if (static_cast<std::size_t>(n) != reference.size()) throw DomainError("match_eigenvalues: size mismatch");
  if (n > 8) throw DomainError("match_eigenvalues: at most 8 values supported");
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::vector<Eigen::Index> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) cost += std::abs(values[perm[i]] - reference[i]);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<SpectrumRow> spectrum_report(const ValidatedSystem& system, std::span<const double> gamma_grid) {
  const double Gamma = mirror_rate(system);
  const auto basis = enumerate_basis(3);
  std::vector<SpectrumRow> rows;
  rows.reserve(gamma_grid.size());
  for (const double gamma : gamma_grid) {
    SpectrumRow row;
    row.gamma = gamma;
    row.lambda_closed = closed_form_single(gamma, Gamma);
    row.beta_closed = closed_form_two(gamma, Gamma);
    const auto sys = validate(with_medium_rate(system.config(), gamma));
    const auto heff = effective_hamiltonian(sys, basis);
    double overlap = 1.0;
    auto fill = [&](int k, const std::array<cplx, 3>& closed, std::array<cplx, 3>& out) {
      Spectrum s;
      try {
        s = biorthogonal_decompose(restrict(heff, k));
      } catch (const NearDefectiveError& e) {
        if (!row.error) row.error = e.what();
        s = biorthogonal_decompose(restrict(heff, k), true);
      }
      overlap = std::min(overlap, s.min_overlap);
      const auto perm = match_eigenvalues(s.eigenvalues, closed);
      for (std::size_t i = 0; i < 3; ++i) {
        out[i] = s.eigenvalues[perm[i]];
        row.max_dev = std::max(row.max_dev, std::abs(out[i] - closed[i]));
      }
    };
    try {
      fill(1, row.lambda_closed, row.lambda);
      fill(2, row.beta_closed, row.beta);
    } catch (const Error& e) {
      row.error = e.what();
      row.max_dev = std::numeric_limits<double>::quiet_NaN();
    }
    row.min_overlap = overlap;
    if (!rows.empty()) {
      const double prev = rows.back().gamma;
      row.lambda_disc_sign_change =
          (single_discriminant(prev, Gamma) < 0.0) != (single_discriminant(gamma, Gamma) < 0.0);
      row.beta_disc_sign_change = (two_discriminant(prev, Gamma) < 0.0) != (two_discriminant(gamma, Gamma) < 0.0);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> spectrum_report_header() {
  return {"gamma", "re_lp", "im_lp", "re_lm", "im_lm", "re_l3", "im_l3", "re_bp",
          "im_bp", "re_bm", "im_bm", "re_b3", "im_b3", "max_dev"};
}

std::vector<double> spectrum_report_values(const SpectrumRow& row) {
  std::vector<double> v{row.gamma};
  for (const auto& z : row.lambda) {
    v.push_back(z.real());
    v.push_back(z.imag());
  }
  for (const auto& z : row.beta) {
    v.push_back(z.real());
    v.push_back(z.imag());
  }
  v.push_back(row.max_dev);
  return v;
}

}  // namespace wqed
