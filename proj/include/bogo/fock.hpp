#pragma once

#include <span>
#include <vector>

#include "bogo/modes.hpp"
#include "bogo/types.hpp"

namespace bogo {

// Sparse operator on a truncated Fock basis.
//
// When `hermitian()` is true the stored matrix equals its conjugate
// transpose bit for bit; constructors that set the flag symmetrize.
class FockOperator {
 public:
  FockOperator() = default;
  FockOperator(SparseOp matrix, bool hermitian);

  const SparseOp& matrix() const { return matrix_; }
  bool hermitian() const { return hermitian_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }

  // y = M x through the SIMD sparse kernel.
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  CVector apply(const CVector& x) const;

  FockOperator adjoint() const;

  friend FockOperator operator+(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(cplx s, const FockOperator& a);

 private:
  SparseOp matrix_;
  bool hermitian_ = false;
};

// Amplitudes over the Fock basis of a mode set.
class FockVector {
 public:
  FockVector(ModeSet modes, CVector amplitudes);

  const ModeSet& modes() const { return modes_; }
  const CVector& amplitudes() const { return amplitudes_; }
  CVector& amplitudes() { return amplitudes_; }
  std::span<const cplx> span() const { return {amplitudes_.data(), static_cast<std::size_t>(amplitudes_.size())}; }

  double norm() const;
  // Population on states with some slot at the cutoff.
  double boundary_population() const;

  static FockVector vacuum(const ModeSet& modes);
  static FockVector basis_state(const ModeSet& modes, std::span<const int> occupations);

 private:
  ModeSet modes_;
  CVector amplitudes_;
};

cplx inner(const FockVector& a, const FockVector& b);
// <v|O|v> / <v|v>
cplx expectation(const FockOperator& op, const FockVector& v);

// Single-mode annihilation operator, (n-1, n) = sqrt(n).
FockOperator ladder_matrix(int cutoff, std::size_t dimension_budget = ModeSet::kDefaultDimensionBudget);

// Identity on every slot except `slot`, where `op` acts.
FockOperator embed_operator(const FockOperator& op, std::size_t slot, const ModeSet& modes);

FockOperator identity_operator(const ModeSet& modes);
// a_slot on the full space.
FockOperator annihilator(std::size_t slot, const ModeSet& modes);

// The quadratic generators G^xi_ij (xi = 1..4) built from products of
// embedded ladder matrices. i and j are slot indices.
FockOperator generator_fock(int xi, std::size_t i, std::size_t j, const ModeSet& modes);

// Restriction P M P to the listed basis indices, as a dense matrix.
CMatrix compress(const FockOperator& op, std::span<const std::size_t> indices);

// Re-expresses a state on a mode set with a different cutoff. Amplitudes on
// occupations beyond the target cutoff are dropped.
FockVector change_cutoff(const FockVector& v, int cutoff);

}  // namespace bogo
