// SPDX-License-Identifier: Apache-2.0
#pragma once

// Bitmask product basis of n two-level atoms, blocked by excitation number.
// Bit n of a state is set when atom n (in ascending-position order) is excited.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace wqed {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

struct BlockRange {
  std::size_t begin = 0;
  std::size_t size = 0;
};

class Basis {
 public:
  int n_atoms() const noexcept { return data_->n_atoms; }
  /// Highest excitation number present (n_atoms when untruncated).
  int max_excitation() const noexcept { return data_->max_excitation; }
  bool truncated() const noexcept { return data_->max_excitation < data_->n_atoms; }
  std::size_t size() const noexcept { return data_->states.size(); }
  std::span<const std::uint32_t> states() const noexcept { return data_->states; }
  std::uint32_t state(std::size_t i) const { return data_->states.at(i); }
  int excitation(std::size_t i) const;
  std::optional<std::size_t> index_of(std::uint32_t mask) const;
  bool has_block(int k) const noexcept { return k >= 0 && k <= data_->max_excitation; }
  BlockRange block(int k) const;

  bool operator==(const Basis& other) const noexcept {
    return n_atoms() == other.n_atoms() && max_excitation() == other.max_excitation();
  }

 private:
  struct Data {
    int n_atoms = 0;
    int max_excitation = 0;
    std::vector<std::uint32_t> states;
    std::vector<std::int32_t> lookup;  // mask -> index or -1
    std::vector<BlockRange> blocks;
  };
  friend Basis enumerate_basis(int n_atoms, std::optional<int> max_excitations);
  explicit Basis(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

Basis enumerate_basis(int n_atoms, std::optional<int> max_excitations = std::nullopt);

/// Dense operator tagged with the basis it is written in.
struct OperatorRep {
  CMatrix matrix;
  Basis basis;

  OperatorRep adjoint() const { return {matrix.adjoint(), basis}; }
};

/// Largest element connecting different excitation blocks, relative to the
/// largest element overall (0 for a zero matrix).
double off_block_ratio(const OperatorRep& op);

/// The k-excitation diagonal block. Throws BlockStructureError when the
/// operator is not block diagonal within `tol` (relative).
CMatrix restrict(const OperatorRep& op, int k, double tol = 1e-12);

/// Inverse of restrict: a full-basis operator with `block` in position k.
OperatorRep embed(const CMatrix& block, const Basis& basis, int k);

/// sigma_n = |g_n><e_n|.
OperatorRep ladder_operator(const Basis& basis, std::size_t atom);

/// Total excitation number sum_n sigma_n^+ sigma_n.
OperatorRep number_operator(const Basis& basis);

/// sum_{mn} coeffs(m, n) sigma_m^+ sigma_n, built directly in the basis.
OperatorRep hopping_operator(const Basis& basis, const CMatrix& coeffs);

/// sum_n coeffs(n) sigma_n.
OperatorRep lowering_combination(const Basis& basis, const CVector& coeffs);

/// Orthonormal columns spanning the smallest subspace that contains every
/// seed and is invariant under every generator. Directions whose residual
/// after orthogonalization falls below `tol` (relative) are discarded.
CMatrix invariant_closure(const std::vector<CVector>& seeds, std::span<const CMatrix> generators,
                          double tol = 1e-9);

}  // namespace wqed
