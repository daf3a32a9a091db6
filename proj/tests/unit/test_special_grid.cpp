#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bogo/error.hpp"
#include "bogo/grid.hpp"
#include "bogo/special.hpp"

using namespace bogo;

namespace {

// Stirling series with Bernoulli terms, shifted up by recurrence until |z| is
// large enough for ~1e-15 accuracy.
cplx stirling_log_gamma(cplx z) {
  cplx shift = 0.0;
  while (std::abs(z) < 20.0) {
    shift -= std::log(z);
    z += 1.0;
  }
  const double b[] = {1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680, 1.0 / 1188, -691.0 / 360360};
  cplx series = 0.0, zp = z;
  const cplx z2 = z * z;
  for (double c : b) {
    series += c / zp;
    zp *= z2;
  }
  return shift + (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * std::numbers::pi) + series;
}

// Imaginary parts agree modulo 2 pi (branches differ).
double log_gamma_gap(cplx a, cplx b) {
  const double re = std::abs(a.real() - b.real());
  const double im = std::remainder(a.imag() - b.imag(), 2 * std::numbers::pi);
  return std::max(re, std::abs(im));
}

}  // namespace

TEST_CASE("log_gamma matches the Stirling series") {
  for (double re : {-3.7, -0.5, 0.1, 0.5, 1.0, 2.5, 8.0, 30.0})
    for (double im : {-40.0, -3.0, -0.2, 0.3, 1.0, 7.5, 100.0}) {
      const cplx z(re, im);
      CHECK(log_gamma_gap(log_gamma(z), stirling_log_gamma(z)) < 1e-12 * std::max(1.0, std::abs(log_gamma(z))));
    }
}

TEST_CASE("log_gamma on the real axis and identities") {
  for (double x : {0.1, 0.5, 1.0, 2.0, 3.3, 10.0, 50.0})
    CHECK(log_gamma(cplx(x)).real() == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  CHECK(std::abs(gamma(cplx(5.0)) - cplx(24.0)) < 1e-12);
  // |Gamma(iy)|^2 = pi / (y sinh(pi y))
  for (double y : {0.01, 0.3, 1.0, 4.0, 20.0}) {
    const double ref = std::log(std::numbers::pi / (y * std::sinh(std::numbers::pi * y)));
    CHECK(2 * log_gamma(cplx(0.0, y)).real() == doctest::Approx(ref).epsilon(1e-12));
  }
  // Reflection Gamma(z) Gamma(1 - z) = pi / sin(pi z)
  for (const cplx z : {cplx(0.3, 0.7), cplx(-1.2, 2.0), cplx(0.5, -3.0)}) {
    const cplx lhs = gamma(z) * gamma(1.0 - z);
    CHECK(std::abs(lhs / (std::numbers::pi / std::sin(std::numbers::pi * z)) - 1.0) < 1e-12);
  }
  // Recurrence
  const cplx z(0.8, 2.4);
  CHECK(log_gamma_gap(log_gamma(z + 1.0), log_gamma(z) + std::log(z)) < 1e-13);
  CHECK_THROWS_AS(log_gamma(cplx(0.0)), NumericalError);
  CHECK_THROWS_AS(log_gamma(cplx(-3.0)), NumericalError);
  CHECK_THROWS_AS(log_gamma(cplx(NAN, 1.0)), NumericalError);
}

TEST_CASE("grid spec") {
  const GridSpec g{1, 0.5, 2.0};
  CHECK(g.axis_points() == 8);
  CHECK(g.total_points() == 64);
  CHECK(g.coordinate(0) == doctest::Approx(-1.75));
  CHECK(g.coordinate(7) == doctest::Approx(1.75));
  CHECK_THROWS_AS((GridSpec{1, -0.1, 2.0}.validate()), ValidationError);
  CHECK_THROWS_AS((GridSpec{3, 0.01, 30.0}.validate()), ValidationError);  // point budget
}

TEST_CASE("central differences are exact on polynomials of degree <= 2") {
  // f = x^2 + 3 x x~ - 2 x~ (+ i x): L f = -i (x df/dx~ - x~ df/dx)
  const GridSpec g{1, 0.25, 3.0};
  GridFunction f{g, std::vector<cplx>(g.total_points())};
  const std::size_t n = g.axis_points();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = g.coordinate(i), y = g.coordinate(j);
      f.values[i * n + j] = x * x + 3 * x * y - 2 * y + kI * x;
    }
  const GridFunction lf = apply_L_grid(f, {1.0});
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i)
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double x = g.coordinate(i), y = g.coordinate(j);
      const cplx dfdx = 2 * x + 3 * y + kI, dfdy = 3 * x - 2;
      const cplx expected = -kI * (x * dfdy - y * dfdx);
      worst = std::max(worst, std::abs(lf.values[i * n + j] - expected));
    }
  CHECK(worst < 1e-12);
  CHECK(lf.values[0] == cplx(0.0));  // boundary band
}

TEST_CASE("grid eigenfunctions converge at second order") {
  for (int lambda = 0; lambda <= 3; ++lambda) {
    const double r1 = eigen_residual(eigenfunction_grid(lambda, 2.0, GridSpec{1, 0.1, 12.0}), lambda, {1.0}, 1.0);
    const double r2 = eigen_residual(eigenfunction_grid(lambda, 2.0, GridSpec{1, 0.05, 12.0}), lambda, {1.0}, 1.0);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
  }
  // A wrong eigenvalue is visible.
  const GridFunction f = eigenfunction_grid(2, 2.0, GridSpec{1, 0.05, 12.0});
  CHECK(eigen_residual(f, 1, {1.0}, 1.0) > 0.5);
  CHECK_THROWS_AS(eigenfunction_grid(1, 2.0, GridSpec{1, 0.6, 12.0}), ValidationError);
  CHECK_THROWS_AS(eigenfunction_grid(1, 2.0, GridSpec{1, 0.05, 8.0}), ValidationError);
}

TEST_CASE("two-mode grid eigenfunction with weights") {
  const GridSpec g{2, 0.25, 6.0};
  const GridFunction f = eigenfunction_grid(1, 1.2, g);
  CHECK(eigen_residual(f, 1, {0.5, 0.5}, 0.6) < 0.05);
}

TEST_CASE("grid moments of F_lambda") {
  const GridSpec g{1, 0.05, 30.0};
  for (int lambda = 0; lambda <= 3; ++lambda) {
    const GridMoments m = grid_pair_moments(eigenfunction_grid(lambda, 5.0, g));
    // <a+ a~> = i lambda / 2 and <a a~> = 0 for the rotation-symmetric F_lambda.
    // O(h^2) discretization error, relative to the eigenvalue scale
    const double tol = 1e-3 * std::max(lambda, 1);
    CHECK(std::abs(m.pair.normal(0, 1) - kI * (lambda / 2.0)) < tol);
    CHECK(std::abs(m.pair.anomalous(0, 1)) < tol);
    CHECK(m.mean.norm() < 1e-10);
    const SlotMoments rep = replicate_moments(m, 3);
    CHECK(rep.normal.rows() == 6);
    const cplx l = expectation_from_moments(invariant_coeff({1.0, 2.0, 3.0}, uniform_weights(3)), rep);
    CHECK(std::abs(l - cplx(lambda)) < 2 * tol);
  }
}

TEST_CASE("interpolation is exact for bilinear functions") {
  const GridSpec g{1, 0.5, 3.0};
  GridFunction f{g, std::vector<cplx>(g.total_points())};
  const std::size_t n = g.axis_points();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      f.values[i * n + j] = 1.0 + 2.0 * g.coordinate(i) - kI * g.coordinate(j) + g.coordinate(i) * g.coordinate(j);
  const double p[] = {0.33, -1.2};
  CHECK(std::abs(sample(f, p) - (1.0 + 0.66 + kI * 1.2 - 0.396)) < 1e-12);
  const double outside[] = {2.9, 0.0};
  CHECK_THROWS_AS(sample(f, outside), ValidationError);
}
