// SPDX-License-Identifier: Apache-2.0
#pragma once

// Output-field correlations through the emission operator
// s~ = sum_n sqrt(G_n) exp(i k0 x_n) s_n. With vacuum input, normal-ordered
// output correlations reduce to correlations of s~ and overall prefactors
// cancel in g2.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wqed/lindblad.hpp"
#include "wqed/spectral.hpp"

namespace wqed {

struct EmissionOperator {
  OperatorRep op;
  CVector coefficients;  ///< sqrt(G_n) exp(i k0 x_n) per atom
};

EmissionOperator emission_operator(const ValidatedSystem& system, const Basis& basis);

/// The same operator multiplied by a global complex factor.
EmissionOperator rescaled(const EmissionOperator& sig, cplx factor);

/// <s~^+ s~> in the state.
double g1(const DensityMatrix& rho, const EmissionOperator& sig);

struct G2Metadata {
  double delta = 0.0;
  double epsilon = 0.0;
  std::string geometry;
  std::string method;  ///< "regression" or "analytic"
};

struct G2Curve {
  std::vector<double> tau;
  std::vector<double> values;
  G2Metadata metadata;
};

/// g2(tau) = tr(s~^+ s~ e^{L tau}[s~ rho s~^+]) / tr(s~^+ s~ rho)^2.
/// Throws DivisionUnderflowError when the mean intensity is below 1e-30.
G2Curve g2_regression(const Superoperator& liouvillian, const DensityMatrix& rho_ss, const EmissionOperator& sig,
                      std::span<const double> tau_grid, const PropagationOptions& options = {});

/// Excitation truncation used for driven problems: none up to three atoms,
/// three excitations beyond.
std::optional<int> default_truncation(const ValidatedSystem& system);

/// Liouvillian, steady state and emission operator of one drive point.
struct DrivenSolution {
  Superoperator liouvillian;
  DensityMatrix steady;
  EmissionOperator emission;
};

DrivenSolution solve_driven(const ValidatedSystem& system, const DriveSpec& drive, const Basis& basis,
                            FrameKind frame = FrameKind::ReachableFromGround);

/// As above with the default truncation.
DrivenSolution solve_driven(const ValidatedSystem& system, const DriveSpec& drive);

/// Weak-drive g2(0) from the one- and two-excitation resolvents
///   |<g| s~^2 G2 s_p^+ G1 s_p^+ |g>|^2 / |<g| s~ G1 s_p^+ |g>|^4,
/// G1 = (delta - H1)^-1, G2 = (2 delta - H2)^-1. The resolvents act on the
/// subspaces reachable from s_p^+|g>, so decoupled dark states never make
/// them singular. Returns +inf when the single-photon amplitude vanishes.
class AnalyticG2 {
 public:
  explicit AnalyticG2(const ValidatedSystem& system, cplx gauge = 1.0);
  double operator()(double delta) const;

  /// s_p^+ G1 s_p^+ |g> in the bare two-excitation block.
  CVector two_photon_drive(double delta) const;
  /// <g| s~ G1 s_p^+ |g>
  cplx single_amplitude(double delta) const;
  cplx double_amplitude(double delta) const;

 private:
  CVector solve1(double delta) const;

  CMatrix h1_, h2_, v1_, v2_;
  CVector up10_;      // s_p^+ from |g>
  CMatrix up21_;      // s_p^+ from block 1 to block 2
  CVector down01_;    // s~ row from block 1
  CMatrix down12_;    // s~ from block 2 to block 1
};

double g2_zero_analytic(const ValidatedSystem& system, double delta);

struct ZenoEntry {
  std::string label;  ///< beta+, beta-, beta3
  cplx eigenvalue;
  cplx amplitude;  ///< <beta^L| s_p^+ G1 s_p^+ |g>
  double ratio = 0.0;  ///< |amplitude| / |Im eigenvalue|
};

struct ZenoReport {
  double delta = 0.0;
  std::vector<ZenoEntry> states;
  /// <e_p, B| s_p^+ G1 s_p^+ |g>
  cplx ep_bright_amplitude;

  const ZenoEntry& entry(const std::string& label) const;
};

/// Canonical geometry only.
ZenoReport zeno_diagnostics(const ValidatedSystem& system, double delta);

}  // namespace wqed
