#include "bogo/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "bogo/error.hpp"

namespace bogo {

namespace {

// Slot count N = 2M; W is 2N x 2N.
Eigen::Index dim_of(const std::vector<double>& labels) { return static_cast<Eigen::Index>(2 * labels.size()); }

// Enforce B = B^T, C = C^T and lower-right = A^T.
CMatrix canonical(const CMatrix& w, Eigen::Index n) {
  CMatrix out(2 * n, 2 * n);
  const CMatrix a = 0.5 * (w.topLeftCorner(n, n) + w.bottomRightCorner(n, n).transpose());
  out.topLeftCorner(n, n) = a;
  out.bottomRightCorner(n, n) = a.transpose();
  out.topRightCorner(n, n) = 0.5 * (w.topRightCorner(n, n) + w.topRightCorner(n, n).transpose());
  out.bottomLeftCorner(n, n) = 0.5 * (w.bottomLeftCorner(n, n) + w.bottomLeftCorner(n, n).transpose());
  return out;
}

// eta * W: negate the lower block row.
CMatrix eta_left(const CMatrix& w) {
  CMatrix out = w;
  const Eigen::Index n = w.rows() / 2;
  out.bottomRows(n) *= -1.0;
  return out;
}

// Sigma_x M Sigma_x swaps both block rows and block columns.
CMatrix swap_blocks(const CMatrix& m) {
  const Eigen::Index n = m.rows() / 2;
  CMatrix out(m.rows(), m.cols());
  out.topLeftCorner(n, n) = m.bottomRightCorner(n, n);
  out.bottomRightCorner(n, n) = m.topLeftCorner(n, n);
  out.topRightCorner(n, n) = m.bottomLeftCorner(n, n);
  out.bottomLeftCorner(n, n) = m.topRightCorner(n, n);
  return out;
}

void require_same_labels(const CoefficientMatrix& a, const CoefficientMatrix& b) {
  if (a.labels() != b.labels()) throw ValidationError("coefficient matrices live on different mode sets");
}

}  // namespace

CoefficientMatrix::CoefficientMatrix(std::vector<double> labels)
    : labels_(std::move(labels)), entries_(CMatrix::Zero(2 * dim_of(labels_), 2 * dim_of(labels_))) {}

CoefficientMatrix::CoefficientMatrix(std::vector<double> labels, CMatrix entries, cplx scalar)
    : labels_(std::move(labels)), scalar_(scalar) {
  const Eigen::Index n = dim_of(labels_);
  if (entries.rows() != 2 * n || entries.cols() != 2 * n)
    throw ValidationError(fmt::format("coefficient matrix must be {0}x{0}", 2 * n));
  entries_ = canonical(entries, n);
}

CoefficientMatrix CoefficientMatrix::from_blocks(std::vector<double> labels, const CMatrix& a,
                                                 const CMatrix& b, const CMatrix& c, cplx scalar) {
  const Eigen::Index n = dim_of(labels);
  if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != n || c.rows() != n || c.cols() != n)
    throw ValidationError(fmt::format("coefficient blocks must be {0}x{0}", n));
  CMatrix w(2 * n, 2 * n);
  w << a, b, c, a.transpose();
  return CoefficientMatrix(std::move(labels), std::move(w), scalar);
}

double CoefficientMatrix::hermiticity_residual() const {
  return (entries_ - swap_blocks(entries_.conjugate())).norm() + std::abs(scalar_.imag());
}

double CoefficientMatrix::norm() const { return entries_.norm() + std::abs(scalar_); }

CoefficientMatrix CoefficientMatrix::swap_fields() const {
  const std::size_t m = labels_.size();
  const Eigen::Index n = dim_of(labels_);
  // Permutation on slots: k <-> m + k, applied to both halves of xi.
  Eigen::VectorXi perm(2 * n);
  for (Eigen::Index half = 0; half < 2; ++half)
    for (std::size_t k = 0; k < 2 * m; ++k) {
      const std::size_t swapped = k < m ? k + m : k - m;
      perm[half * n + static_cast<Eigen::Index>(k)] = static_cast<int>(half * n + static_cast<Eigen::Index>(swapped));
    }
  CMatrix out(2 * n, 2 * n);
  for (Eigen::Index r = 0; r < 2 * n; ++r)
    for (Eigen::Index c = 0; c < 2 * n; ++c) out(perm[r], perm[c]) = entries_(r, c);
  return CoefficientMatrix(labels_, std::move(out), scalar_);
}

CoefficientMatrix& CoefficientMatrix::operator+=(const CoefficientMatrix& other) {
  require_same_labels(*this, other);
  entries_ += other.entries_;
  scalar_ += other.scalar_;
  return *this;
}

CoefficientMatrix operator-(const CoefficientMatrix& a, const CoefficientMatrix& b) {
  require_same_labels(a, b);
  return CoefficientMatrix(a.labels_, a.entries_ - b.entries_, a.scalar_ - b.scalar_);
}

CoefficientMatrix operator*(cplx s, const CoefficientMatrix& a) {
  return CoefficientMatrix(a.labels_, s * a.entries_, s * a.scalar_);
}

CoefficientMatrix generator_coeff(int xi, std::size_t i, std::size_t j, const ModeSet& modes) {
  if (xi < 1 || xi > 4) throw ValidationError(fmt::format("generator index xi must be 1..4, got {}", xi));
  const std::size_t slots = modes.slot_count();
  if (i >= slots || j >= slots)
    throw ValidationError(fmt::format("generator slots ({}, {}) out of range ({} slots)", i, j, slots));
  const Eigen::Index n = static_cast<Eigen::Index>(slots);
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  CMatrix a = CMatrix::Zero(n, n), b = CMatrix::Zero(n, n), c = CMatrix::Zero(n, n);
  switch (xi) {
    case 1:  // a+_i a_j + a+_j a_i
      a(ii, jj) += 1.0;
      a(jj, ii) += 1.0;
      break;
    case 2:  // i (a+_i a_j - a+_j a_i)
      a(ii, jj) += kI;
      a(jj, ii) -= kI;
      break;
    case 3:  // a_i a_j + a+_i a+_j
      c(ii, jj) += 1.0;
      c(jj, ii) += 1.0;
      b(ii, jj) += 1.0;
      b(jj, ii) += 1.0;
      break;
    default:  // i (a_i a_j - a+_i a+_j)
      c(ii, jj) += kI;
      c(jj, ii) += kI;
      b(ii, jj) -= kI;
      b(jj, ii) -= kI;
      break;
  }
  return CoefficientMatrix::from_blocks(modes.labels(), a, b, c);
}

CoefficientMatrix quad_bracket(const CoefficientMatrix& k1, const CoefficientMatrix& k2) {
  require_same_labels(k1, k2);
  const CMatrix& w1 = k1.entries();
  const CMatrix& w2 = k2.entries();
  const CMatrix w3 = w1 * eta_left(w2) - w2 * eta_left(w1);
  const Eigen::Index n = w3.rows() / 2;
  const cplx scalar = 0.5 * w3.topLeftCorner(n, n).trace();
  return CoefficientMatrix(k1.labels(), w3, scalar);
}

FockOperator to_fock(const CoefficientMatrix& k, const ModeSet& modes) {
  if (k.labels() != modes.labels()) throw ValidationError("coefficient matrix and mode set labels differ");
  const std::size_t slots = modes.slot_count();
  const int cut = modes.cutoff();
  struct Term {
    std::size_t i, j;
    cplx v;
  };
  std::vector<Term> hop, create, annihilate;
  const auto a = k.block_a();
  const auto b = k.block_b();
  const auto c = k.block_c();
  for (std::size_t i = 0; i < slots; ++i)
    for (std::size_t j = 0; j < slots; ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      if (a(ii, jj) != cplx(0.0)) hop.push_back({i, j, a(ii, jj)});
      if (j < i) continue;
      const double f = i == j ? 0.5 : 1.0;
      if (b(ii, jj) != cplx(0.0)) create.push_back({i, j, f * b(ii, jj)});
      if (c(ii, jj) != cplx(0.0)) annihilate.push_back({i, j, f * c(ii, jj)});
    }

  std::vector<double> root(static_cast<std::size_t>(cut) + 2);
  for (std::size_t n = 0; n < root.size(); ++n) root[n] = std::sqrt(static_cast<double>(n));

  const std::size_t dim = modes.dimension();
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(dim * (hop.size() + create.size() + annihilate.size() + 1));
  std::vector<int> occ(slots);
  for (std::size_t g = 0; g < dim; ++g) {
    for (std::size_t s = 0; s < slots; ++s) occ[s] = modes.occupation(g, s);
    const int col = static_cast<int>(g);
    if (k.scalar_part() != cplx(0.0)) t.emplace_back(col, col, k.scalar_part());
    for (const Term& h : hop) {
      const int nj = occ[h.j];
      if (nj == 0) continue;
      const int ni = h.i == h.j ? nj - 1 : occ[h.i];
      if (ni + 1 > cut) continue;
      const std::size_t target = g - modes.stride(h.j) + modes.stride(h.i);
      t.emplace_back(static_cast<int>(target), col, h.v * root[static_cast<std::size_t>(nj)] * root[static_cast<std::size_t>(ni + 1)]);
    }
    for (const Term& h : create) {
      const int ni = occ[h.i];
      const int nj = h.i == h.j ? ni + 1 : occ[h.j];
      if (ni + 1 > cut || nj + 1 > cut) continue;
      const std::size_t target = g + modes.stride(h.i) + modes.stride(h.j);
      t.emplace_back(static_cast<int>(target), col, h.v * root[static_cast<std::size_t>(ni + 1)] * root[static_cast<std::size_t>(nj + 1)]);
    }
    for (const Term& h : annihilate) {
      const int ni = occ[h.i];
      const int nj = h.i == h.j ? ni - 1 : occ[h.j];
      if (ni < 1 || nj < 1) continue;
      const std::size_t target = g - modes.stride(h.i) - modes.stride(h.j);
      t.emplace_back(static_cast<int>(target), col, h.v * root[static_cast<std::size_t>(ni)] * root[static_cast<std::size_t>(nj)]);
    }
  }
  SparseOp m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(t.begin(), t.end());
  return FockOperator(std::move(m), k.is_hermitian());
}

double fock_bracket_residual(const CoefficientMatrix& k1, const CoefficientMatrix& k2, const ModeSet& modes) {
  const FockOperator f1 = to_fock(k1, modes);
  const FockOperator f2 = to_fock(k2, modes);
  const SparseOp commutator = f1.matrix() * f2.matrix() - f2.matrix() * f1.matrix();
  const std::vector<std::size_t> inner = interior_indices(modes, 2);
  const CMatrix lhs = compress(FockOperator(commutator, false), inner);
  const CMatrix rhs = compress(to_fock(quad_bracket(k1, k2), modes), inner);
  const double scale = std::max({lhs.norm(), rhs.norm(), 1e-300});
  return (lhs - rhs).norm() / scale;
}

CoefficientMatrix product_of_linear_forms(std::vector<double> labels, const CVector& u, const CVector& v) {
  const Eigen::Index n = dim_of(labels);
  if (u.size() != 2 * n || v.size() != 2 * n) throw ValidationError("linear form length does not match 2N");
  auto sigma_x = [n](const CVector& x) {
    CVector out(2 * n);
    out << x.tail(n), x.head(n);
    return out;
  };
  const CMatrix w = sigma_x(u) * v.transpose() + sigma_x(v) * u.transpose();
  // [l1, l2] = u^T J v with J = [[0, I], [-I, 0]].
  const cplx commutator = (u.head(n).transpose() * v.tail(n))(0) - (u.tail(n).transpose() * v.head(n))(0);
  const cplx scalar = 0.5 * w.topLeftCorner(n, n).trace() + 0.5 * commutator;
  return CoefficientMatrix(std::move(labels), w, scalar);
}

CMatrix BogolyubovMap::symplectic() const {
  const Eigen::Index n = alpha.rows();
  CMatrix s(2 * n, 2 * n);
  s << alpha, beta, beta.conjugate(), alpha.conjugate();
  return s;
}

BogolyubovMap BogolyubovMap::from_symplectic(const CMatrix& s) {
  const Eigen::Index n = s.rows() / 2;
  return {s.topLeftCorner(n, n), s.topRightCorner(n, n)};
}

BogolyubovMap BogolyubovMap::identity(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return {CMatrix::Identity(m, m), CMatrix::Zero(m, m)};
}

double BogolyubovMap::unitarity_residual() const {
  const CMatrix r = alpha * alpha.adjoint() - beta * beta.adjoint() - CMatrix::Identity(alpha.rows(), alpha.rows());
  return r.norm();
}

double BogolyubovMap::symmetry_residual() const {
  return (alpha * beta.transpose() - beta * alpha.transpose()).norm();
}

BogolyubovMap compose(const BogolyubovMap& first, const BogolyubovMap& second) {
  if (first.alpha.rows() != second.alpha.rows()) throw ValidationError("Bogolyubov maps of different size");
  return BogolyubovMap::from_symplectic(first.symplectic() * second.symplectic());
}

BogolyubovMap bogoliubov_of(const CoefficientMatrix& h, double tol) {
  if (!h.is_hermitian(1e-12)) throw ValidationError("generator must be Hermitian");
  const CMatrix generator = kI * eta_left(h.entries());
  const CMatrix s = generator.exp();
  BogolyubovMap map = BogolyubovMap::from_symplectic(s);
  const double r1 = map.unitarity_residual();
  const double r2 = map.symmetry_residual();
  const double scale = std::max(1.0, map.alpha.norm() * map.alpha.norm());
  if (!(r1 <= tol * scale) || !(r2 <= tol * scale))
    throw NumericalError(fmt::format("Bogolyubov map not canonical: residuals {:.3e}, {:.3e}", r1, r2));
  return map;
}

CoefficientMatrix heisenberg_transform(const CoefficientMatrix& k, const BogolyubovMap& map) {
  const Eigen::Index n = static_cast<Eigen::Index>(k.slot_count());
  if (map.alpha.rows() != n) throw ValidationError("Bogolyubov map size does not match operator");
  const CMatrix s = map.symplectic();
  const CMatrix w = swap_blocks(s.transpose()) * k.entries() * s;
  const cplx shift = 0.5 * (w.topLeftCorner(n, n).trace() - k.block_a().trace());
  return CoefficientMatrix(k.labels(), w, k.scalar_part() + shift);
}

}  // namespace bogo
