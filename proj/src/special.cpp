#include "bogo/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "bogo/error.hpp"

namespace bogo {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosP = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

cplx log_gamma_right(cplx z) {
  z -= 1.0;
  cplx x = kLanczosP[0];
  for (std::size_t i = 1; i < kLanczosP.size(); ++i) x += kLanczosP[i] / (z + static_cast<double>(i));
  const cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx log_gamma(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericalError("log_gamma of a non-finite argument");
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw NumericalError("log_gamma evaluated at a pole");
  cplx shift = 0.0;
  while (z.real() < 0.5) {
    shift += std::log(z);
    z += 1.0;
  }
  return log_gamma_right(z) - shift;
}

}  // namespace bogo
