#pragma once

#include "bogo/types.hpp"

namespace bogo {

// log Gamma(z) for complex z, continuous across the right half-plane
// (Lanczos g = 7, n = 9 in Re z >= 1/2, upward recurrence below).
// Throws NumericalError at the poles z = 0, -1, -2, ...
cplx log_gamma(cplx z);

inline cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

}  // namespace bogo
