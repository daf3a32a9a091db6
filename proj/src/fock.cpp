#include "bogo/fock.hpp"

#include <cmath>
#include <fmt/format.h>

#include "bogo/error.hpp"
#include "bogo/simd/kernels.hpp"

namespace bogo {

namespace {

SparseOp symmetrized(const SparseOp& m) {
  SparseOp adj = m.adjoint();
  SparseOp out = (m + adj) * cplx(0.5);
  out.prune(cplx(0.0));
  return out;
}

}  // namespace

FockOperator::FockOperator(SparseOp matrix, bool hermitian)
    : matrix_(std::move(matrix)), hermitian_(hermitian) {
  if (matrix_.rows() != matrix_.cols()) throw ValidationError("Fock operator must be square");
  if (hermitian_) matrix_ = symmetrized(matrix_);
  matrix_.makeCompressed();
}

void FockOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  const auto rows = static_cast<std::size_t>(matrix_.rows());
  if (x.size() != rows || y.size() != rows)
    throw ValidationError("vector length does not match operator dimension");
  const auto nnz = static_cast<std::size_t>(matrix_.nonZeros());
  simd::CsrView view{{matrix_.outerIndexPtr(), rows + 1},
                     {matrix_.innerIndexPtr(), nnz},
                     {matrix_.valuePtr(), nnz}};
  simd::csr_matvec(view, x, y);
}

CVector FockOperator::apply(const CVector& x) const {
  CVector y(matrix_.rows());
  apply({x.data(), static_cast<std::size_t>(x.size())}, {y.data(), static_cast<std::size_t>(y.size())});
  return y;
}

FockOperator FockOperator::adjoint() const { return FockOperator(SparseOp(matrix_.adjoint()), hermitian_); }

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  return FockOperator(SparseOp(a.matrix_ + b.matrix_), a.hermitian_ && b.hermitian_);
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  return FockOperator(SparseOp(a.matrix_ - b.matrix_), a.hermitian_ && b.hermitian_);
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  return FockOperator(SparseOp(a.matrix_ * b.matrix_), false);
}

FockOperator operator*(cplx s, const FockOperator& a) {
  return FockOperator(SparseOp(s * a.matrix_), a.hermitian_ && s.imag() == 0.0);
}

FockVector::FockVector(ModeSet modes, CVector amplitudes)
    : modes_(std::move(modes)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != modes_.dimension())
    throw ValidationError(fmt::format("state has {} amplitudes, mode set dimension is {}",
                                      amplitudes_.size(), modes_.dimension()));
}

double FockVector::norm() const { return std::sqrt(simd::norm_sq(span())); }

double FockVector::boundary_population() const {
  double pop = 0.0;
  for (std::size_t i : boundary_indices(modes_)) pop += std::norm(amplitudes_[static_cast<Eigen::Index>(i)]);
  return pop;
}

FockVector FockVector::vacuum(const ModeSet& modes) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(modes.dimension()));
  v[0] = 1.0;
  return FockVector(modes, std::move(v));
}

FockVector FockVector::basis_state(const ModeSet& modes, std::span<const int> occupations) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(modes.dimension()));
  v[static_cast<Eigen::Index>(modes.index(occupations))] = 1.0;
  return FockVector(modes, std::move(v));
}

cplx inner(const FockVector& a, const FockVector& b) {
  if (!(a.modes() == b.modes())) throw ValidationError("inner product across different mode sets");
  return simd::dot(a.span(), b.span());
}

cplx expectation(const FockOperator& op, const FockVector& v) {
  const CVector ov = op.apply(v.amplitudes());
  const cplx num = simd::dot(v.span(), {ov.data(), static_cast<std::size_t>(ov.size())});
  return num / simd::norm_sq(v.span());
}

FockOperator ladder_matrix(int cutoff, std::size_t dimension_budget) {
  if (cutoff < 1) throw ValidationError(fmt::format("cutoff must be >= 1, got {}", cutoff));
  if (static_cast<std::size_t>(cutoff) + 1 > dimension_budget)
    throw ValidationError("ladder dimension exceeds the dimension budget");
  SparseOp a(cutoff + 1, cutoff + 1);
  std::vector<Eigen::Triplet<cplx>> t;
  for (int n = 1; n <= cutoff; ++n) t.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  a.setFromTriplets(t.begin(), t.end());
  return FockOperator(std::move(a), false);
}

FockOperator embed_operator(const FockOperator& op, std::size_t slot, const ModeSet& modes) {
  if (slot >= modes.slot_count())
    throw ValidationError(fmt::format("slot {} out of range ({} slots)", slot, modes.slot_count()));
  const std::size_t local = modes.local_dimension();
  if (op.dimension() != local)
    throw ValidationError(fmt::format("operator dimension {} does not match per-mode dimension {}",
                                      op.dimension(), local));
  // Column-wise listing of the local operator.
  std::vector<std::vector<std::pair<int, cplx>>> cols(local);
  const SparseOp& m = op.matrix();
  for (int r = 0; r < m.outerSize(); ++r)
    for (SparseOp::InnerIterator it(m, r); it; ++it) cols[static_cast<std::size_t>(it.col())].emplace_back(r, it.value());

  const std::size_t dim = modes.dimension();
  const std::size_t stride = modes.stride(slot);
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(static_cast<std::size_t>(m.nonZeros()) * (dim / local));
  for (std::size_t g = 0; g < dim; ++g) {
    const int n = modes.occupation(g, slot);
    for (const auto& [r, v] : cols[static_cast<std::size_t>(n)]) {
      const std::size_t target = g + static_cast<std::size_t>(r) * stride - static_cast<std::size_t>(n) * stride;
      t.emplace_back(static_cast<int>(target), static_cast<int>(g), v);
    }
  }
  SparseOp out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  out.setFromTriplets(t.begin(), t.end());
  return FockOperator(std::move(out), op.hermitian());
}

FockOperator identity_operator(const ModeSet& modes) {
  SparseOp id(static_cast<Eigen::Index>(modes.dimension()), static_cast<Eigen::Index>(modes.dimension()));
  id.setIdentity();
  return FockOperator(std::move(id), true);
}

FockOperator annihilator(std::size_t slot, const ModeSet& modes) {
  return embed_operator(ladder_matrix(modes.cutoff(), modes.dimension_budget()), slot, modes);
}

FockOperator generator_fock(int xi, std::size_t i, std::size_t j, const ModeSet& modes) {
  if (xi < 1 || xi > 4) throw ValidationError(fmt::format("generator index xi must be 1..4, got {}", xi));
  const FockOperator ai = annihilator(i, modes);
  const FockOperator aj = annihilator(j, modes);
  const FockOperator ai_d = ai.adjoint();
  const FockOperator aj_d = aj.adjoint();
  SparseOp g;
  switch (xi) {
    case 1: g = (ai_d * aj).matrix() + (aj_d * ai).matrix(); break;
    case 2: g = kI * ((ai_d * aj).matrix() - (aj_d * ai).matrix()); break;
    case 3: g = (ai * aj).matrix() + (ai_d * aj_d).matrix(); break;
    default: g = kI * ((ai * aj).matrix() - (ai_d * aj_d).matrix()); break;
  }
  return FockOperator(std::move(g), true);
}

CMatrix compress(const FockOperator& op, std::span<const std::size_t> indices) {
  const auto n = static_cast<Eigen::Index>(indices.size());
  std::vector<int> position(op.dimension(), -1);
  for (Eigen::Index k = 0; k < n; ++k) position[indices[static_cast<std::size_t>(k)]] = static_cast<int>(k);
  CMatrix out = CMatrix::Zero(n, n);
  const SparseOp& m = op.matrix();
  for (Eigen::Index k = 0; k < n; ++k) {
    const int r = static_cast<int>(indices[static_cast<std::size_t>(k)]);
    for (SparseOp::InnerIterator it(m, r); it; ++it) {
      const int c = position[static_cast<std::size_t>(it.col())];
      if (c >= 0) out(k, c) = it.value();
    }
  }
  return out;
}

FockVector change_cutoff(const FockVector& v, int cutoff) {
  const ModeSet target = v.modes().with_cutoff(cutoff);
  CVector out = CVector::Zero(static_cast<Eigen::Index>(target.dimension()));
  std::vector<int> occ;
  for (std::size_t i = 0; i < v.modes().dimension(); ++i) {
    const cplx a = v.amplitudes()[static_cast<Eigen::Index>(i)];
    if (a == cplx(0.0)) continue;
    occ = v.modes().occupations(i);
    bool fits = true;
    for (int n : occ) fits = fits && n <= cutoff;
    if (fits) out[static_cast<Eigen::Index>(target.index(occ))] = a;
  }
  return FockVector(target, std::move(out));
}

}  // namespace bogo
