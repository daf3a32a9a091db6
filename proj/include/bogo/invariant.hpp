#pragma once

#include <vector>

#include "bogo/coeff.hpp"
#include "bogo/fock.hpp"
#include "bogo/modes.hpp"

namespace bogo {

// L = sum_k rho_k (-i)(a+_k a~_k - a_k a~+_k), with a~_k the phi-tilde mode
// carrying the same label. In the Schwinger modes b+- = (a -+ i a~)/sqrt(2)
// each term is n+ - n-, so the spectrum is integer per mode.
struct InvariantObservable {
  ModeSet modes;
  std::vector<double> weights;
  FockOperator fock_form;
  CoefficientMatrix coeff_form;
};

std::vector<double> uniform_weights(std::size_t count);

// Weights must be nonnegative and sum to 1 within 1e-12.
void validate_weights(const std::vector<double>& weights, std::size_t count);

// Coefficient form only; usable for label sets far too large for a Fock space.
CoefficientMatrix invariant_coeff(const std::vector<double>& labels, const std::vector<double>& weights);

InvariantObservable build_invariant(const ModeSet& modes, std::vector<double> weights);

// || [L, H] || / (||L|| ||H||) evaluated exactly on coefficient matrices.
double commutation_residual(const CoefficientMatrix& l, const CoefficientMatrix& h);
inline double commutation_residual(const InvariantObservable& l, const CoefficientMatrix& h) {
  return commutation_residual(l.coeff_form, h);
}

// sum_k rho_k (x_k p~_k - p_k x~_k) built from quadrature matrices
// x = (a + a+)/sqrt(2), p = (a - a+)/(sqrt(2) i).
FockOperator quadrature_form(const ModeSet& modes, const std::vector<double>& weights);

// Occupation profile of an eigenstate within each mode: the state is
// sum_j decay^j |n+ = n0 + j, n- = m0 + j> (normalized), where (n0, m0) is
// (lambda, 0) or (0, -lambda). extra_pairs = 0 gives the minimal state.
struct EigenProfile {
  int extra_pairs = 0;
  double decay = 0.5;
};

// Highest |lambda| representable at the mode set's cutoff for this profile.
int eigen_capacity(const ModeSet& modes, const EigenProfile& profile = {});

// Normalized L eigenstate with eigenvalue lambda in every mode (so the
// weighted total is lambda). Throws ValidationError beyond capacity.
FockVector schwinger_eigenstate(int lambda, const ModeSet& modes, const EigenProfile& profile = {});

// Two-point moments over the slots of a mode set:
// normal(s, t) = <a+_s a_t>, anomalous(s, t) = <a_s a_t>.
struct SlotMoments {
  CMatrix normal;
  CMatrix anomalous;
};

SlotMoments moments_of(const FockVector& state);

// <Q> for a quadratic operator from its two-point moments.
cplx expectation_from_moments(const CoefficientMatrix& q, const SlotMoments& m);

}  // namespace bogo
