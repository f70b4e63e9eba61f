// SPDX-License-Identifier: Apache-2.0
#include "wqed/subspace.hpp"

#include <bit>
#include <deque>
#include <string>

#include "wqed/errors.hpp"

namespace wqed {

int Basis::excitation(std::size_t i) const { return std::popcount(state(i)); }

std::optional<std::size_t> Basis::index_of(std::uint32_t mask) const {
  if (mask >= data_->lookup.size()) return std::nullopt;
  const auto idx = data_->lookup[mask];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

BlockRange Basis::block(int k) const {
  if (!has_block(k))
    throw DomainError("excitation block " + std::to_string(k) + " not present in basis");
  return data_->blocks[static_cast<std::size_t>(k)];
}

Basis enumerate_basis(int n_atoms, std::optional<int> max_excitations) {
  if (n_atoms < 1 || n_atoms > 24) throw DomainError("enumerate_basis: n_atoms must lie in [1, 24]");
  const int kmax = max_excitations.value_or(n_atoms);
  if (kmax < 0 || kmax > n_atoms)
    throw DomainError("enumerate_basis: max_excitations must lie in [0, n_atoms]");

  auto data = std::make_shared<Basis::Data>();
  data->n_atoms = n_atoms;
  data->max_excitation = kmax;
  const std::uint32_t full = 1u << n_atoms;
  data->lookup.assign(full, -1);
  for (int k = 0; k <= kmax; ++k) {
    BlockRange range{data->states.size(), 0};
    for (std::uint32_t s = 0; s < full; ++s) {
      if (std::popcount(s) != k) continue;
      data->lookup[s] = static_cast<std::int32_t>(data->states.size());
      data->states.push_back(s);
      ++range.size;
    }
    data->blocks.push_back(range);
  }
  return Basis(std::move(data));
}

double off_block_ratio(const OperatorRep& op) {
  const auto& b = op.basis;
  double largest = 0.0, off = 0.0;
  for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) {
    const int kj = b.excitation(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < op.matrix.rows(); ++i) {
      const double a = std::abs(op.matrix(i, j));
      largest = std::max(largest, a);
      if (b.excitation(static_cast<std::size_t>(i)) != kj) off = std::max(off, a);
    }
  }
  return largest > 0.0 ? off / largest : 0.0;
}

CMatrix restrict(const OperatorRep& op, int k, double tol) {
  const auto range = op.basis.block(k);
  const double ratio = off_block_ratio(op);
  if (ratio > tol)
    throw BlockStructureError("operator is not block diagonal in excitation number (off-block ratio " +
                              std::to_string(ratio) + ")");
  const auto b = static_cast<Eigen::Index>(range.begin);
  const auto n = static_cast<Eigen::Index>(range.size);
  return op.matrix.block(b, b, n, n);
}

OperatorRep embed(const CMatrix& block, const Basis& basis, int k) {
  const auto range = basis.block(k);
  if (block.rows() != static_cast<Eigen::Index>(range.size) || block.cols() != block.rows())
    throw DomainError("embed: block dimension does not match excitation block");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  OperatorRep out{CMatrix::Zero(dim, dim), basis};
  const auto b = static_cast<Eigen::Index>(range.begin);
  out.matrix.block(b, b, block.rows(), block.cols()) = block;
  return out;
}

OperatorRep ladder_operator(const Basis& basis, std::size_t atom) {
  if (atom >= static_cast<std::size_t>(basis.n_atoms())) throw DomainError("ladder_operator: atom index out of range");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  OperatorRep out{CMatrix::Zero(dim, dim), basis};
  const std::uint32_t bit = 1u << atom;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto s = basis.state(j);
    if (!(s & bit)) continue;
    if (auto i = basis.index_of(s & ~bit))
      out.matrix(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(j)) = 1.0;
  }
  return out;
}

OperatorRep number_operator(const Basis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  OperatorRep out{CMatrix::Zero(dim, dim), basis};
  for (std::size_t i = 0; i < basis.size(); ++i)
    out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = basis.excitation(i);
  return out;
}

OperatorRep hopping_operator(const Basis& basis, const CMatrix& coeffs) {
  const int n = basis.n_atoms();
  if (coeffs.rows() != n || coeffs.cols() != n) throw DomainError("hopping_operator: coefficient matrix must be n_atoms square");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  OperatorRep out{CMatrix::Zero(dim, dim), basis};
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto s = basis.state(j);
    for (int src = 0; src < n; ++src) {
      const std::uint32_t from = 1u << src;
      if (!(s & from)) continue;
      const auto lowered = s & ~from;
      for (int dst = 0; dst < n; ++dst) {
        const std::uint32_t to = 1u << dst;
        if (lowered & to) continue;
        const auto c = coeffs(dst, src);
        if (c == cplx{}) continue;
        const auto i = basis.index_of(lowered | to);
        out.matrix(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(j)) += c;
      }
    }
  }
  return out;
}

OperatorRep lowering_combination(const Basis& basis, const CVector& coeffs) {
  if (coeffs.size() != basis.n_atoms()) throw DomainError("lowering_combination: one coefficient per atom required");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  OperatorRep out{CMatrix::Zero(dim, dim), basis};
  for (int n = 0; n < basis.n_atoms(); ++n) {
    if (coeffs(n) == cplx{}) continue;
    out.matrix += coeffs(n) * ladder_operator(basis, static_cast<std::size_t>(n)).matrix;
  }
  return out;
}

}  // namespace wqed

namespace wqed {

CMatrix invariant_closure(const std::vector<CVector>& seeds, std::span<const CMatrix> generators, double tol) {
  if (seeds.empty()) throw DomainError("invariant_closure: at least one seed required");
  const auto dim = seeds.front().size();
  std::vector<CVector> cols;
  std::deque<std::size_t> pending;

  auto absorb = [&](CVector v, double floor) {
    const double scale = v.norm();
    if (scale <= floor) return;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : cols) v -= q * q.dot(v);
    const double r = v.norm();
    if (r <= tol * scale) return;
    cols.push_back(v / r);
    pending.push_back(cols.size() - 1);
  };

  for (const auto& s : seeds) {
    if (s.size() != dim) throw DomainError("invariant_closure: seed dimension mismatch");
    absorb(s, 0.0);
  }
  std::vector<double> floors;
  for (const auto& g : generators) floors.push_back(tol * g.norm());
  while (!pending.empty() && static_cast<Eigen::Index>(cols.size()) < dim) {
    const CVector v = cols[pending.front()];
    pending.pop_front();
    for (std::size_t i = 0; i < generators.size(); ++i) absorb(generators[i] * v, floors[i]);
  }

  CMatrix out(dim, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = cols[j];
  return out;
}

}  // namespace wqed
