// SPDX-License-Identifier: Apache-2.0
#pragma once

// Biorthogonal eigendecomposition of non-Hermitian blocks and the
// closed-form spectra of the canonical three-atom geometry.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/subspace.hpp"

namespace wqed {

/// Unit-normalized left/right overlaps below this value are treated as an
/// exceptional-point vicinity.
inline constexpr double kNearDefectiveThreshold = 1e-6;

struct Spectrum {
  CVector eigenvalues;
  CMatrix right;  ///< right eigenvectors as columns, unit norm
  CMatrix left;   ///< left eigenvectors as rows, left * right = I
  /// Smallest |<L_n|R_n>| with both vectors unit-normalized.
  double min_overlap = 1.0;

  Eigen::Index size() const noexcept { return eigenvalues.size(); }
  /// sum_n lambda_n R_n L_n.
  CMatrix reconstruct() const;
};

/// Eigenvalues sorted by descending imaginary part, ties by ascending real
/// part. Throws NearDefectiveError when the eigenbasis is too close to
/// degenerate unless `allow_near_defective` is set.
Spectrum biorthogonal_decompose(const CMatrix& m, bool allow_near_defective = false);

/// Indices sorted by descending imaginary part, ties (within `tol`) by
/// ascending real part.
std::vector<Eigen::Index> spectral_order(const CVector& values, double tol = 1e-12);

/// (lambda+, lambda-, lambda3) of the single-excitation block.
std::array<cplx, 3> closed_form_single(double gamma, double Gamma);

/// (beta+, beta-, beta3) of the two-excitation block.
std::array<cplx, 3> closed_form_two(double gamma, double Gamma);

/// Discriminants under the square roots of the closed forms.
double single_discriminant(double gamma, double Gamma);
double two_discriminant(double gamma, double Gamma);

/// Permutation p minimizing sum_i |values[p[i]] - reference[i]|.
std::vector<Eigen::Index> match_eigenvalues(const CVector& values, std::span<const cplx> reference);

struct SpectrumRow {
  double gamma = 0.0;
  std::array<cplx, 3> lambda{};  ///< numerical, paired with closed-form labels
  std::array<cplx, 3> beta{};
  std::array<cplx, 3> lambda_closed{};
  std::array<cplx, 3> beta_closed{};
  double max_dev = 0.0;
  double min_overlap = 1.0;
  bool lambda_disc_sign_change = false;  ///< relative to the previous row
  bool beta_disc_sign_change = false;
  std::optional<std::string> error;
};

/// Sweep the medium rate of a canonical geometry and compare the numerical
/// block spectra with the closed forms. Decomposition failures are recorded
/// in the row and the sweep continues.
std::vector<SpectrumRow> spectrum_report(const ValidatedSystem& system, std::span<const double> gamma_grid);

std::vector<std::string> spectrum_report_header();
std::vector<double> spectrum_report_values(const SpectrumRow& row);

}  // namespace wqed
