#pragma once

#include "bogo/fock.hpp"

namespace bogo {

struct EvolveOptions {
  double time = 1.0;            //< evolve with exp(i * time * H)
  int krylov_dim = 30;          //< Lanczos subspace size per substep
  double tolerance = 1e-12;     //< a-posteriori error budget for the whole evolution
  int max_substeps = 20000;
  // Remove the population on states with a slot at the cutoff and report it
  // as leakage (the evolved norm is then sqrt(1 - leakage)).
  bool project_boundary = true;
};

struct Evolution {
  FockVector state;
  double leakage = 0.0;
  double error_estimate = 0.0;
  int substeps = 0;
  int matvecs = 0;
};

// exp(iH) psi by Lanczos iteration with adaptive substeps; the dense
// exponential is never formed. Throws ValidationError for a non-Hermitian H
// and NumericalError when the substep budget is exhausted.
Evolution exp_evolve(const FockOperator& h, const FockVector& psi, const EvolveOptions& options = {});

}  // namespace bogo
