// SPDX-License-Identifier: Apache-2.0
#pragma once

// Adaptive Dormand-Prince 5(4) integration of linear systems y' = A y.

#include <span>
#include <vector>

#include "wqed/subspace.hpp"

namespace wqed {

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-20;
  double min_step = 1e-12;
  std::size_t max_steps = 50'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// y(t_k) for every grid time t_k >= 0, starting from y(0) = y0. Throws
/// StepSizeUnderflowError when the controller needs a step below min_step.
std::vector<CVector> integrate_linear(const CMatrix& a, const CVector& y0, std::span<const double> t_grid,
                                      const IntegratorOptions& options, IntegratorStats* stats = nullptr);

}  // namespace wqed
