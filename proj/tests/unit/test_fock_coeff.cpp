#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "bogo/channels.hpp"
#include "bogo/coeff.hpp"
#include "bogo/error.hpp"
#include "bogo/fock.hpp"
#include "oracles.hpp"

using namespace bogo;

namespace {

CMatrix dense(const FockOperator& op) { return CMatrix(op.matrix()); }

CMatrix dense_of(const CoefficientMatrix& k, int cutoff) {
  return oracle::quadratic(k.block_a(), k.block_b(), k.block_c(), k.scalar_part(), cutoff);
}

}  // namespace

TEST_CASE("mixed-radix indexing round-trips and slot 0 is most significant") {
  const ModeSet modes({1.0, 2.0}, 3);
  CHECK(modes.dimension() == 256);
  CHECK(modes.stride(0) == 64);
  CHECK(modes.stride(3) == 1);
  CHECK(modes.slot(Field::phi_tilde, 1) == 3);
  for (std::size_t i = 0; i < modes.dimension(); i += 7) CHECK(modes.index(modes.occupations(i)) == i);
  CHECK_THROWS_AS(ModeSet({1.0, 1.0}, 3), ValidationError);
  CHECK_THROWS_AS(ModeSet({1.0}, 0), ValidationError);
  CHECK_THROWS_AS(ModeSet({1.0, 2.0, 3.0}, 60), ValidationError);  // over the dimension budget
}

TEST_CASE("sector index sets") {
  const ModeSet modes({1.0}, 4);
  for (std::size_t i : closed_sector_indices(modes)) CHECK(modes.occupation(i, 0) + modes.occupation(i, 1) <= 4);
  CHECK(closed_sector_indices(modes).size() == 15);
  CHECK(interior_indices(modes, 2).size() == 9);
  CHECK(boundary_indices(modes).size() == 9);
}

TEST_CASE("annihilators and generators match dense Kronecker products") {
  const ModeSet modes({1.0, 2.0}, 3);
  for (std::size_t s = 0; s < 4; ++s)
    CHECK((dense(annihilator(s, modes)) - oracle::annihilator(static_cast<int>(s), 4, 3)).norm() == doctest::Approx(0.0));
  for (int xi = 1; xi <= 4; ++xi)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        const CMatrix g = dense(generator_fock(xi, i, j, modes));
        const CMatrix ref = dense_of(generator_coeff(xi, i, j, modes), 3);
        CHECK((g - ref).norm() < 1e-12);
        CHECK((g - g.adjoint()).norm() < 1e-12);
      }
}

TEST_CASE("to_fock reproduces the brute-force normal-ordered operator") {
  std::mt19937_64 rng(11);
  const std::vector<double> labels = {0.5, -0.5};
  const ModeSet modes(labels, 3);
  for (int t = 0; t < 5; ++t) {
    const CoefficientMatrix k = random_quadratic(rng, labels, 1.0);
    CHECK((dense(to_fock(k, modes)) - dense_of(k, 3)).norm() < 1e-11);
    CHECK(k.is_hermitian());
  }
}

TEST_CASE("quad_bracket equals the dense commutator on the interior") {
  std::mt19937_64 rng(12);
  for (std::size_t m : {1u, 2u}) {
    std::vector<double> labels;
    for (std::size_t i = 0; i < m; ++i) labels.push_back(1.0 + static_cast<double>(i));
    const int cutoff = m == 1 ? 6 : 3;
    const int slots = static_cast<int>(2 * m);
    for (int t = 0; t < 4; ++t) {
      const CoefficientMatrix k1 = random_quadratic(rng, labels, 1.0);
      const CoefficientMatrix k2 = random_quadratic(rng, labels, 1.0);
      const CMatrix d1 = dense_of(k1, cutoff), d2 = dense_of(k2, cutoff);
      const auto idx = oracle::interior(slots, cutoff, 2);
      const CMatrix lhs = oracle::restrict_to(d1 * d2 - d2 * d1, idx);
      const CMatrix rhs = oracle::restrict_to(dense_of(quad_bracket(k1, k2), cutoff), idx);
      CHECK((lhs - rhs).norm() <= 1e-10 * lhs.norm());
      CHECK(fock_bracket_residual(k1, k2, ModeSet(labels, 4)) < 1e-12);
    }
  }
}

TEST_CASE("bracket algebra: antisymmetry and Jacobi identity") {
  std::mt19937_64 rng(13);
  const std::vector<double> labels = {1.0, 2.0};
  const CoefficientMatrix x = random_quadratic(rng, labels, 1.0);
  const CoefficientMatrix y = random_quadratic(rng, labels, 1.0);
  const CoefficientMatrix z = random_quadratic(rng, labels, 1.0);
  CHECK((quad_bracket(x, y) + quad_bracket(y, x)).norm() < 1e-12);
  const CoefficientMatrix jacobi = quad_bracket(x, quad_bracket(y, z)) + quad_bracket(y, quad_bracket(z, x)) +
                                   quad_bracket(z, quad_bracket(x, y));
  CHECK(jacobi.norm() < 1e-11);
  // [a_0, a+_0] = 1 through the product of linear forms
  CVector u = CVector::Zero(4), v = CVector::Zero(4);
  u[0] = 1.0;
  v[2] = 1.0;
  const CoefficientMatrix ab = product_of_linear_forms({1.0}, u, v);
  const CoefficientMatrix ba = product_of_linear_forms({1.0}, v, u);
  CHECK(std::abs((ab - ba).scalar_part() - cplx(1.0)) < 1e-15);
  CHECK((ab - ba).entries().norm() < 1e-15);
}

TEST_CASE("Bogolyubov map of exp(iH) is canonical and matches dense conjugation") {
  std::mt19937_64 rng(14);
  const std::vector<double> labels = {1.0};
  const CoefficientMatrix h = 0.05 * cplx(1.0) * random_quadratic(rng, labels, 1.0);
  const BogolyubovMap map = bogoliubov_of(h);
  CHECK(map.unitarity_residual() < 1e-12);
  CHECK(map.symmetry_residual() < 1e-12);

  // U+ a_0 U on low-lying states, with U from a dense exponential at a large cutoff.
  const int cutoff = 24;
  const CMatrix hd = dense_of(h, cutoff);
  const CMatrix u = (kI * hd).exp();
  const CMatrix lhs = u.adjoint() * oracle::annihilator(0, 2, cutoff) * u;
  CMatrix rhs = CMatrix::Zero(lhs.rows(), lhs.cols());
  for (int s = 0; s < 2; ++s) {
    const CMatrix a = oracle::annihilator(s, 2, cutoff);
    rhs += map.alpha(0, s) * a + map.beta(0, s) * a.adjoint();
  }
  const auto idx = oracle::interior(2, cutoff, 18);
  CHECK((oracle::restrict_to(lhs, idx) - oracle::restrict_to(rhs, idx)).norm() < 1e-8);

  const CoefficientMatrix q = random_quadratic(rng, labels, 1.0);
  const CMatrix conj = u.adjoint() * dense_of(q, cutoff) * u;
  const CMatrix exact = dense_of(heisenberg_transform(q, map), cutoff);
  CHECK((oracle::restrict_to(conj, idx) - oracle::restrict_to(exact, idx)).norm() < 1e-7);
}

TEST_CASE("swap_fields exchanges the roles of the two fields") {
  const ModeSet shape({1.0, 2.0}, 1);
  const CoefficientMatrix g = generator_coeff(3, 0, 1, shape);
  const CoefficientMatrix swapped = g.swap_fields();
  CHECK((swapped - generator_coeff(3, 2, 3, shape)).norm() < 1e-15);
  CHECK((swapped.swap_fields() - g).norm() < 1e-15);
}

TEST_CASE("validation") {
  const ModeSet modes({1.0}, 3);
  CHECK_THROWS_AS(generator_coeff(5, 0, 0, modes), ValidationError);
  CHECK_THROWS_AS(generator_coeff(1, 0, 2, modes), ValidationError);
  CHECK_THROWS_AS(to_fock(CoefficientMatrix({2.0}), modes), ValidationError);
  CHECK_THROWS_AS(quad_bracket(CoefficientMatrix({1.0}), CoefficientMatrix({2.0})), ValidationError);
}
