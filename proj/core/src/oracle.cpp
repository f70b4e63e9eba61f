// SPDX-License-Identifier: Apache-2.0
#include "wqed/oracle.hpp"

#include <nlohmann/json.hpp>
#include <algorithm>
#include <cmath>
#include <limits>

#include "wqed/errors.hpp"
#include "wqed/hamiltonian.hpp"

namespace wqed {

namespace {

nlohmann::json json_number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string OracleReport::to_json_line() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["quantity"] = quantity;
  j["main"] = json_number(main_value);
  j["oracle"] = json_number(oracle_value);
  j["abs_dev"] = json_number(abs_dev);
  j["rel_dev"] = json_number(rel_dev);
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  return j.dump();
}

OracleReport compare(std::string scenario, std::string quantity, double main_value, double oracle_value,
                     double tolerance, bool absolute) {
  OracleReport r;
  r.scenario = std::move(scenario);
  r.quantity = std::move(quantity);
  r.main_value = main_value;
  r.oracle_value = oracle_value;
  r.tolerance = tolerance;
  if (main_value == oracle_value) {
    r.abs_dev = 0.0;
  } else {
    r.abs_dev = std::abs(main_value - oracle_value);
    if (std::isnan(r.abs_dev)) r.abs_dev = std::numeric_limits<double>::infinity();
  }
  const double ref = std::abs(oracle_value);
  r.rel_dev = r.abs_dev == 0.0 ? 0.0 : (ref > 0.0 ? r.abs_dev / ref : std::numeric_limits<double>::infinity());
  if (std::isnan(r.rel_dev)) r.rel_dev = std::numeric_limits<double>::infinity();
  r.pass = (absolute ? r.abs_dev : r.rel_dev) <= tolerance;
  return r;
}

DensityMatrix long_time_steady_oracle(const ValidatedSystem& system, const DriveSpec& drive, double T,
                                      const Basis& basis, FrameKind frame, int extra_doublings,
                                      OracleIntegration* info) {
  double min_rate = std::numeric_limits<double>::infinity();
  for (const auto& a : system.atoms()) min_rate = std::min(min_rate, a.rate);
  if (!(T >= 20.0 / min_rate)) throw DomainError("oracle horizon must be at least 20 / min(rate)");

  const auto l = build_liouvillian(system, drive, basis, {frame, std::nullopt});
  const auto& terms = l.terms;
  const auto n = l.dim();
  const auto n2 = n * n;

  // Bound ||L||_inf from the matrix-form generator applied to basis matrices.
  CMatrix columns(n2, n2);
  for (Eigen::Index j = 0; j < n2; ++j) {
    CMatrix e = CMatrix::Zero(n, n);
    e(j % n, j / n) = 1.0;
    columns.col(j) = apply_lindblad(terms, e).reshaped();
  }
  const double norm = columns.cwiseAbs().rowwise().sum().maxCoeff();
  const double h_max = norm > 0.0 ? 1e-3 / norm : T;
  int k = std::max(0, static_cast<int>(std::ceil(std::log2(T / h_max)))) + extra_doublings;
  const double h = T / std::ldexp(1.0, k);

  // E = P - I for one RK4 step, with P = I + A + A^2/2 + A^3/6 + A^4/24, A = hL.
  CMatrix e(n2, n2);
  for (Eigen::Index j = 0; j < n2; ++j) {
    CMatrix x = CMatrix::Zero(n, n);
    x(j % n, j / n) = 1.0;
    CMatrix acc = CMatrix::Zero(n, n);
    double coef = 1.0;
    for (int p = 1; p <= 4; ++p) {
      x = h * apply_lindblad(terms, x);
      coef /= p;
      acc += coef * x;
    }
    e.col(j) = acc.reshaped();
  }
  // (I + E)^2 = I + (2E + E^2)
  for (int i = 0; i < k; ++i) e = (2.0 * e + e * e).eval();

  const auto g = ground_state(l.frame);
  const CVector v0 = g.matrix.reshaped();
  const CVector v = v0 + e * v0;
  CMatrix rho = v.reshaped(n, n);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  if (info) *info = {k, h};
  return {rho, l.frame};
}

OracleReport mode_basis_reduction_check(double gamma, double Gamma, double d) {
  const auto sys = validate(canonical_three_atom(gamma, Gamma, d));
  const auto basis = enumerate_basis(3);
  const auto heff = effective_hamiltonian(sys, basis);
  const auto mirrors = sys.mirror_indices();
  const auto p = sys.medium_index();
  const double r2 = 1.0 / std::sqrt(2.0);
  const double j = std::sqrt(2.0 * Gamma * gamma);
  const cplx i{0.0, 1.0};

  auto column = [&](int k, std::initializer_list<std::pair<std::uint32_t, double>> parts) {
    const auto range = basis.block(k);
    CVector v = CVector::Zero(static_cast<Eigen::Index>(range.size));
    for (const auto& [mask, c] : parts) v[static_cast<Eigen::Index>(*basis.index_of(mask) - range.begin)] += c;
    return v;
  };
  const std::uint32_t ep = 1u << p, e1 = 1u << mirrors[0], e2 = 1u << mirrors[1];

  CMatrix t1(3, 3);
  t1.col(0) = column(1, {{ep, 1.0}});
  t1.col(1) = column(1, {{e1, r2}, {e2, r2}});
  t1.col(2) = column(1, {{e1, r2}, {e2, -r2}});
  CMatrix expect1(3, 3);
  expect1 << -i * gamma, j, 0.0, j, 0.0, 0.0, 0.0, 0.0, -2.0 * i * Gamma;

  CMatrix t2(3, 3);
  t2.col(0) = column(2, {{ep | e1, r2}, {ep | e2, -r2}});
  t2.col(1) = column(2, {{ep | e1, r2}, {ep | e2, r2}});
  t2.col(2) = column(2, {{e1 | e2, 1.0}});
  CMatrix expect2(3, 3);
  expect2 << -i * (gamma + 2.0 * Gamma), 0.0, 0.0, 0.0, -i * gamma, j, 0.0, j, -2.0 * i * Gamma;

  const CMatrix m1 = t1.adjoint() * restrict(heff, 1) * t1;
  const CMatrix m2 = t2.adjoint() * restrict(heff, 2) * t2;
  const double dev = std::max((m1 - expect1).cwiseAbs().maxCoeff(), (m2 - expect2).cwiseAbs().maxCoeff());
  return compare("mode-basis gamma=" + std::to_string(gamma) + " d=" + std::to_string(d), "max element deviation", dev, 0.0,
                 1e-13 * Gamma, true);
}

std::vector<OracleReport> g2_cross_validation(const ValidatedSystem& system, std::span<const double> delta_grid,
                                              double epsilon, const std::string& scenario) {
  const AnalyticG2 analytic(system);
  const auto basis = enumerate_basis(static_cast<int>(system.size()), default_truncation(system));
  std::vector<OracleReport> out;
  const double tau0[] = {0.0};
  for (const double delta : delta_grid) {
    const auto sol = solve_driven(system, {epsilon, delta}, basis);
    const double reg = g2_regression(sol.liouvillian, sol.steady, sol.emission, tau0).values[0];
    out.push_back(compare(scenario + " delta=" + std::to_string(delta), "g2(0)", analytic(delta), reg, 0.02));
  }
  return out;
}

}  // namespace wqed
