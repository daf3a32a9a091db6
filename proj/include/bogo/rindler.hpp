#pragma once

#include <vector>

#include "bogo/coeff.hpp"
#include "bogo/invariant.hpp"
#include "bogo/types.hpp"

namespace bogo {

// alpha_kl = k / (4 pi a sqrt|kl|) (a / (i l))^(i k / a) (sgn k + sgn l) Gamma(i k / a)
// on the principal branch, in natural units. Exactly zero for opposite signs.
cplx rindler_alpha(double k, double l, double a);

// Quadrature window over (min, max), both strictly positive; negative
// frequencies use the mirrored nodes.
struct Window {
  enum class Spacing { linear, logarithmic };
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  Spacing spacing = Spacing::linear;

  void validate() const;
  std::vector<double> nodes() const;
  // Trapezoid weights (in k, or in log k with the Jacobian folded in).
  std::vector<double> weights() const;
  Window refined() const { return {min, max, 2 * count - 1, spacing}; }
};

// Rindler frequencies k live on k_window; Minkowski wavevectors on l_window.
struct RindlerKernel {
  double acceleration = 1.0;
  Window k_window;
  Window l_window;

  void validate() const;
};

// The two canonical relations of the inverse transformation, integrated over
// the (mirrored) k window for every pair of sample wavevectors:
//   first(l, p)  = sum_k w_k (alpha*_kl alpha_kp - alpha_kl alpha*_kp e^{-2 pi |k|/a})
//   second(l, p) = sum_k w_k e^{-pi |k|/a} (alpha*_kl alpha_kp - alpha_kl alpha*_kp)
// The continuum delta has no pointwise value, so off-diagonal entries and the
// second relation are reported relative to sqrt(first(l,l) first(p,p)).
struct ConstraintReport {
  std::vector<double> samples;
  CMatrix first;
  CMatrix second;
  std::vector<double> diagonal;
  double off_diagonal_max = 0.0;   //< relative
  double second_max = 0.0;         //< relative
  double refinement_change = 0.0;  //< max change of any entry at 2x nodes, same scale
};

// Throws NumericalError when any entry moves by more than
// `refinement_tolerance` (relative) at twice the nodes: quadrature under-resolution.
ConstraintReport rindler_constraints(const RindlerKernel& kernel, const std::vector<double>& samples,
                                     double refinement_tolerance = 0.01);

// Minkowski modes of the l window: labels +l_j then -l_j, each with its
// quadrature weight.
struct MinkowskiModes {
  std::vector<double> labels;
  std::vector<double> weights;
};
MinkowskiModes minkowski_modes(const RindlerKernel& kernel);

// One wedge's part of L: sum_p w_p rho_p (-i)(b+_p b~_p - b_p b~+_p) with
// b_p = sum_j sqrt(w_j) (alpha*_{p l_j} a_{l_j} - e^{-pi|p|/a} alpha_{p l_j} a+_{-l_j})
// over the wedge's frequency sign, as an exact quadratic form on the
// Minkowski modes.
struct WedgeOperator {
  int wedge = 1;
  CoefficientMatrix form;
  // sum_p w_p rho_p (1 - e^{-2 pi |p|/a}) sum_j w_j |alpha_{p l_j}|^2: the
  // eigenvalue scale of this part on states carrying lambda in every mode.
  double window_weight = 0.0;
};

struct RegionalSplit {
  WedgeOperator first;
  WedgeOperator second;
  MinkowskiModes minkowski;
  std::vector<double> rho;  //< uniform boxcar over the Rindler window
};

// `invariant` must be the coefficient form of L on minkowski_modes(kernel).
RegionalSplit regional_split(const CoefficientMatrix& invariant, const RindlerKernel& kernel);

}  // namespace bogo
