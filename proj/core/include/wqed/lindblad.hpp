// SPDX-License-Identifier: Apache-2.0
#pragma once

// Driven master equation
//
//   d rho/dt = -i[H, rho] + sum_mn g_mn (2 s_m rho s_n^+ - s_n^+ s_m rho - rho s_n^+ s_m)
//
// as a dense superoperator on column-stacked density matrices,
// vec(A X B) = (B^T kron A) vec(X).
//
// Operators may be written in a frame: either the full product basis or the
// subspace reachable from the ground state under the Hamiltonian, the drive
// and the jump operators. For two or more atoms per mirror the full space
// contains dark manifolds that never couple to the drive, which makes the
// steady state of the full Liouvillian non-unique; the reachable frame
// removes them without approximation.

#include <optional>
#include <string>
#include <vector>

#include "wqed/hamiltonian.hpp"
#include "wqed/model.hpp"
#include "wqed/subspace.hpp"

namespace wqed {

enum class FrameKind { Full, ReachableFromGround };

/// Orthonormal columns Q over a Basis; operators in the frame are Q^+ O Q.
class Frame {
 public:
  static Frame full(const Basis& basis);
  Frame(Basis basis, CMatrix isometry, std::vector<int> excitations);

  const Basis& basis() const noexcept { return basis_; }
  bool is_full() const noexcept { return full_; }
  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(excitations_.size()); }
  /// Excitation number of each frame direction.
  const std::vector<int>& excitations() const noexcept { return excitations_; }
  const CMatrix& isometry() const noexcept { return q_; }

  /// Q^+ O Q
  CMatrix project(const CMatrix& op) const;
  /// Q X Q^+
  CMatrix lift(const CMatrix& x) const;
  /// Q^+ v
  CVector project_vector(const CVector& v) const;

 private:
  Basis basis_;
  CMatrix q_;
  std::vector<int> excitations_;
  bool full_ = false;
};

/// Frame generated from |g> by the coherent and dissipative forms, the drive
/// (when epsilon > 0) and the jump operators.
Frame reachable_frame(const ValidatedSystem& system, const DriveSpec& drive, const Basis& basis);

/// The ingredients of the master equation in a frame, with the dissipator
/// diagonalized: sum_k c_k (2 C_k rho C_k^+ - {C_k^+ C_k, rho}).
struct LindbladTerms {
  CMatrix hamiltonian;      ///< Hermitian driven Hamiltonian
  CMatrix dissipative;      ///< sum g_mn s_m^+ s_n
  std::vector<CMatrix> jumps;
  std::vector<double> rates;  ///< c_k > 0
};

/// L(rho) evaluated in matrix form, independent of the superoperator.
CMatrix apply_lindblad(const LindbladTerms& terms, const CMatrix& rho);

struct LiouvillianOptions {
  FrameKind frame = FrameKind::Full;
  /// Replaces the dissipative coupling matrix (regression checks only).
  std::optional<RMatrix> dissipative_override;
};

struct Superoperator {
  CMatrix matrix;
  Frame frame;
  DriveSpec drive;
  LindbladTerms terms;
  std::vector<std::string> warnings;
  /// Weak-drive grading ratio used by the integrator (1 = no grading).
  double grading = 1.0;

  Eigen::Index dim() const noexcept { return frame.size(); }
};

Superoperator build_liouvillian(const ValidatedSystem& system, const DriveSpec& drive, const Basis& basis,
                                const LiouvillianOptions& options = {});

struct DensityMatrix {
  CMatrix matrix;  ///< in the frame
  Frame frame;

  /// The density matrix in the full product basis.
  CMatrix full() const { return frame.lift(matrix); }
  cplx trace() const { return matrix.trace(); }
};

/// |g><g| in the given frame.
DensityMatrix ground_state(const Frame& frame);

/// Unique null vector of L, trace one, Hermitized.
DensityMatrix steady_state(const Superoperator& liouvillian);

/// Second smallest singular value of L over its largest; the uniqueness
/// test of steady_state requires this to exceed 1e-8.
double steady_state_gap(const Superoperator& liouvillian);

struct PropagationOptions {
  double rtol = 1e-10;
  /// Absolute tolerance relative to the largest initial entry.
  double atol_scale = 1e-3;
  double min_step = 1e-12;
  std::size_t max_steps = 50'000'000;
};

/// rho(t_k) for an ascending grid starting at t >= 0. rho0 need not have
/// unit trace (conditional states are propagated unnormalized).
std::vector<DensityMatrix> propagate(const Superoperator& liouvillian, const DensityMatrix& rho0,
                                     std::span<const double> t_grid, const PropagationOptions& options = {});

}  // namespace wqed
