// SPDX-License-Identifier: Apache-2.0
#include "wqed/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

// Dormand-Prince 5(4) tableau; the 5th-order weights equal the last stage row.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

}  // namespace

std::vector<CVector> integrate_linear(const CMatrix& a, const CVector& y0, std::span<const double> t_grid,
                                      const IntegratorOptions& opt, IntegratorStats* stats) {
  if (a.rows() != a.cols() || a.cols() != y0.size()) throw DomainError("integrate_linear: dimension mismatch");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || !std::isfinite(t_grid[i])) throw DomainError("time grid must be finite and non-negative");
    if (i > 0 && t_grid[i] < t_grid[i - 1]) throw DomainError("time grid must be ascending");
  }

  std::vector<CVector> out;
  out.reserve(t_grid.size());
  CVector y = y0;
  double t = 0.0;
  const double norm_a = a.cwiseAbs().rowwise().sum().maxCoeff();
  double h = norm_a > 0.0 ? 0.01 / norm_a : 1.0;
  IntegratorStats local;

  CVector k1 = a * y, k2, k3, k4, k5, k6, k7, ynew, err;
  for (const double target : t_grid) {
    while (t < target) {
      const bool clipped = t + h >= target;
      const double step = clipped ? target - t : h;
      k2 = a * (y + step * (a21 * k1));
      k3 = a * (y + step * (a31 * k1 + a32 * k2));
      k4 = a * (y + step * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = a * (y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = a * (y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = a * ynew;
      err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double ratio = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        ratio = std::max(ratio, std::abs(err[i]) / sc);
      }
      const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      if (ratio <= 1.0) {
        t = clipped ? target : t + step;
        y.swap(ynew);
        k1.swap(k7);
        ++local.accepted;
        if (!clipped || step >= h) h = step * factor;
      } else {
        ++local.rejected;
        h = step * factor;
      }
      if (h < opt.min_step)
        throw StepSizeUnderflowError("step size fell below " + std::to_string(opt.min_step) + " at t = " +
                                     std::to_string(t));
      if (local.accepted + local.rejected > opt.max_steps)
        throw StepSizeUnderflowError("step budget exhausted at t = " + std::to_string(t));
    }
    out.push_back(y);
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace wqed
