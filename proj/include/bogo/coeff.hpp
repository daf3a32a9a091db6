#pragma once

#include <vector>

#include "bogo/fock.hpp"
#include "bogo/modes.hpp"
#include "bogo/types.hpp"

namespace bogo {

// Exact, cutoff-free representation of a quadratic operator in the ladder
// operators of 2M slots (N = 2M, phi modes then phi-tilde modes).
//
// With xi = (a_1..a_N, a+_1..a+_N) the entries are the 2N x 2N matrix
//
//     W = [[A, B], [C, A^T]],   B = B^T,  C = C^T,
//
// and the represented operator is the normal-ordered form
//
//     Q = sum A_ij a+_i a_j + 1/2 sum B_ij a+_i a+_j + 1/2 sum C_ij a_i a_j + s.
//
// Equivalently Q = 1/2 xi^+ W xi - tr(A)/2 + s. Brackets of two such forms
// close on the same space; the scalar part collects the constants they
// generate. It is complex because commutators of Hermitian operators are
// anti-Hermitian.
class CoefficientMatrix {
 public:
  explicit CoefficientMatrix(std::vector<double> labels);
  // Builds from a full W; the block symmetries are enforced by averaging.
  CoefficientMatrix(std::vector<double> labels, CMatrix entries, cplx scalar = 0.0);

  static CoefficientMatrix from_blocks(std::vector<double> labels, const CMatrix& a, const CMatrix& b,
                                       const CMatrix& c, cplx scalar = 0.0);

  const std::vector<double>& labels() const { return labels_; }
  std::size_t slot_count() const { return 2 * labels_.size(); }
  const CMatrix& entries() const { return entries_; }
  cplx scalar_part() const { return scalar_; }

  auto block_a() const { return entries_.topLeftCorner(slot_count(), slot_count()); }
  auto block_b() const { return entries_.topRightCorner(slot_count(), slot_count()); }
  auto block_c() const { return entries_.bottomLeftCorner(slot_count(), slot_count()); }

  // Deviation of the represented operator from its adjoint (0 for Hermitian).
  double hermiticity_residual() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_residual() <= tol; }
  // Frobenius norm of W plus |scalar|.
  double norm() const;

  // The operator with the roles of phi and phi-tilde exchanged.
  CoefficientMatrix swap_fields() const;

  CoefficientMatrix& operator+=(const CoefficientMatrix& other);
  friend CoefficientMatrix operator+(CoefficientMatrix a, const CoefficientMatrix& b) { return a += b; }
  friend CoefficientMatrix operator-(const CoefficientMatrix& a, const CoefficientMatrix& b);
  friend CoefficientMatrix operator*(cplx s, const CoefficientMatrix& a);

 private:
  std::vector<double> labels_;
  CMatrix entries_;
  cplx scalar_ = 0.0;
};

// G^xi_ij (xi = 1..4) over slot indices i, j of `modes`, entries +-1, +-i.
CoefficientMatrix generator_coeff(int xi, std::size_t i, std::size_t j, const ModeSet& modes);

// Exact commutator [K1, K2] through W3 = W1 eta W2 - W2 eta W1 with
// eta = diag(I, -I), scalar part tr(A3)/2.
CoefficientMatrix quad_bracket(const CoefficientMatrix& k1, const CoefficientMatrix& k2);

// Relative difference between the Fock realization of quad_bracket(k1, k2)
// and the Fock commutator of the realizations, restricted to states with
// every occupation <= cutoff - 2, where truncation cannot reach.
double fock_bracket_residual(const CoefficientMatrix& k1, const CoefficientMatrix& k2, const ModeSet& modes);

// Realizes the normal-ordered operator on the truncated Fock space of
// `modes`. The labels of `modes` must match.
FockOperator to_fock(const CoefficientMatrix& k, const ModeSet& modes);

// Product l1 * l2 of two linear forms sum_p u_p xi_p and sum_q v_q xi_q,
// represented exactly (the commutator [l1, l2] lands in the scalar part).
CoefficientMatrix product_of_linear_forms(std::vector<double> labels, const CVector& u, const CVector& v);

// Heisenberg-picture linear map U+ a U = alpha a + beta a+ for U = exp(iH).
struct BogolyubovMap {
  CMatrix alpha;
  CMatrix beta;

  // Full 2N x 2N matrix [[alpha, beta], [conj(beta), conj(alpha)]].
  CMatrix symplectic() const;
  static BogolyubovMap from_symplectic(const CMatrix& s);
  static BogolyubovMap identity(std::size_t n);

  // ||alpha alpha^+ - beta beta^+ - I||_F
  double unitarity_residual() const;
  // ||alpha beta^T - beta alpha^T||_F
  double symmetry_residual() const;
};

// map(H1) . map(H2): the map of exp(iH1) exp(iH2) when H1 and H2 commute.
BogolyubovMap compose(const BogolyubovMap& first, const BogolyubovMap& second);

// Linear map induced by exp(iH) on the ladder operators: exp(i eta W).
// Throws NumericalError if the canonicality residuals exceed `tol`.
BogolyubovMap bogoliubov_of(const CoefficientMatrix& h, double tol = 1e-10);

// U+ K U for U = exp(iH) given the map of H, as an exact coefficient matrix.
CoefficientMatrix heisenberg_transform(const CoefficientMatrix& k, const BogolyubovMap& map);

}  // namespace bogo
