// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force cross-checks built from methods different in kind from the
// main path: fixed-step integration against the null-space solve, a
// mode-basis transform against direct construction, and the resolvent
// formula against the master equation.

#include <span>
#include <string>
#include <vector>

#include "wqed/correlations.hpp"
#include "wqed/lindblad.hpp"

namespace wqed {

struct OracleReport {
  std::string scenario;
  std::string quantity;
  double main_value = 0.0;
  double oracle_value = 0.0;
  double abs_dev = 0.0;
  double rel_dev = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  std::string to_json_line() const;
};

/// Report comparing two values; passes when the relative deviation (or the
/// absolute one when `absolute` is set) is within tolerance.
OracleReport compare(std::string scenario, std::string quantity, double main_value, double oracle_value,
                     double tolerance, bool absolute = false);

struct OracleIntegration {
  /// log2 of the number of steps; the step is T / 2^k.
  int doublings = 0;
  double step = 0.0;
};

/// rho(T) from |g><g| by classical fourth-order Runge-Kutta with a fixed
/// step h <= 1e-3 / ||L||_inf. The step map is assembled from the
/// matrix-form generator and raised to the 2^k-th power by squaring.
/// Requires T >= 20 / min(rate). `extra_doublings` halves the step.
DensityMatrix long_time_steady_oracle(const ValidatedSystem& system, const DriveSpec& drive, double T,
                                      const Basis& basis, FrameKind frame = FrameKind::ReachableFromGround,
                                      int extra_doublings = 0, OracleIntegration* info = nullptr);

/// The single- and two-excitation blocks of H_eff in the mode bases
/// {e_p, D, B} and {e_p B, e_p D, e_1 e_2}, compared element-wise with the
/// reduced forms. Deviations are expected away from d = 1/4.
OracleReport mode_basis_reduction_check(double gamma, double Gamma, double d = 0.25);

/// Per-detuning comparison of the resolvent g2(0) with the regression
/// value at tau = 0 (tolerance 2 %).
std::vector<OracleReport> g2_cross_validation(const ValidatedSystem& system, std::span<const double> delta_grid,
                                              double epsilon, const std::string& scenario = "g2");

}  // namespace wqed
