#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "bogo/channels.hpp"
#include "bogo/error.hpp"
#include "bogo/evolve.hpp"
#include "bogo/invariant.hpp"
#include "oracles.hpp"

using namespace bogo;

namespace {

// Dense L from its definition, with a~ the phi-tilde slot of the same mode.
CMatrix dense_invariant(std::size_t m, const std::vector<double>& w, int cutoff) {
  const int slots = static_cast<int>(2 * m);
  CMatrix out;
  for (std::size_t k = 0; k < m; ++k) {
    const CMatrix a = oracle::annihilator(static_cast<int>(k), slots, cutoff);
    const CMatrix at = oracle::annihilator(static_cast<int>(m + k), slots, cutoff);
    const CMatrix term = -kI * w[k] * (a.adjoint() * at - a * at.adjoint());
    out = out.size() == 0 ? term : CMatrix(out + term);
  }
  return out;
}

}  // namespace

TEST_CASE("Krylov evolution agrees with the dense exponential") {
  std::mt19937_64 rng(21);
  const std::vector<double> labels = {1.0};
  const ModeSet modes(labels, 12);
  const CoefficientMatrix h = 0.2 * cplx(1.0) * random_quadratic(rng, labels, 1.0);
  const FockOperator hf = to_fock(h, modes);
  const std::vector<int> occ = {2, 1};
  const FockVector psi = FockVector::basis_state(modes, occ);
  EvolveOptions opt;
  opt.project_boundary = false;
  opt.time = 1.7;
  const Evolution ev = exp_evolve(hf, psi, opt);
  const CVector ref = (kI * opt.time * CMatrix(hf.matrix())).exp() * psi.amplitudes();
  CHECK((ev.state.amplitudes() - ref).norm() < 1e-10);
  CHECK(ev.state.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ev.substeps >= 1);

  opt.project_boundary = true;
  const Evolution cut = exp_evolve(hf, psi, opt);
  CHECK(cut.leakage >= 0.0);
  CHECK(cut.state.boundary_population() == 0.0);
  CHECK(cut.state.norm() * cut.state.norm() == doctest::Approx(1.0 - cut.leakage).epsilon(1e-10));
}

TEST_CASE("exp_evolve rejects bad input") {
  const ModeSet modes({1.0}, 3);
  const FockVector psi = FockVector::vacuum(modes);
  CHECK_THROWS_AS(exp_evolve(FockOperator(annihilator(0, modes).matrix(), false), psi), ValidationError);
  CHECK_THROWS_AS(exp_evolve(identity_operator(ModeSet({1.0}, 4)), psi), ValidationError);
}

TEST_CASE("L on the Fock space matches the dense definition and the quadrature form") {
  const std::vector<double> w = {0.25, 0.75};
  const ModeSet modes({1.0, 2.0}, 3);
  const InvariantObservable l = build_invariant(modes, w);
  const CMatrix lf(l.fock_form.matrix());
  CHECK((lf - dense_invariant(2, w, 3)).norm() < 1e-12);
  CHECK((lf - lf.adjoint()).norm() < 1e-14);
  // Quadrature route differs only through truncation at the cutoff.
  const CMatrix q(quadrature_form(modes, w).matrix());
  const auto idx = interior_indices(modes, 1);
  CHECK((compress(l.fock_form, idx) - compress(FockOperator(q.sparseView(), true), idx)).norm() < 1e-12);
}

TEST_CASE("closed-sector spectrum of L is integer") {
  const ModeSet modes({1.0}, 6);
  const InvariantObservable l = build_invariant(modes, {1.0});
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(compress(l.fock_form, closed_sector_indices(modes)));
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double v = eig.eigenvalues()[i];
    CHECK(std::abs(v - std::round(v)) < 1e-12);
    CHECK(std::abs(v) <= 6.0 + 1e-12);
  }
}

TEST_CASE("weights") {
  CHECK(uniform_weights(4) == std::vector<double>(4, 0.25));
  CHECK_NOTHROW(validate_weights({0.5, 0.5}, 2));
  CHECK_THROWS_AS(validate_weights({0.5, 0.6}, 2), ValidationError);
  CHECK_THROWS_AS(validate_weights({1.5, -0.5}, 2), ValidationError);
  CHECK_THROWS_AS(validate_weights({1.0}, 2), ValidationError);
}

TEST_CASE("Schwinger eigenstates are normalized L eigenstates") {
  for (const EigenProfile profile : {EigenProfile{0, 0.5}, EigenProfile{2, 0.4}}) {
    const ModeSet modes({1.0, 2.0}, 6);
    const InvariantObservable l = build_invariant(modes, {0.5, 0.5});
    const int capacity = eigen_capacity(modes, profile);
    CHECK(capacity == 6 - 2 * profile.extra_pairs);
    for (int lambda = -capacity; lambda <= capacity; ++lambda) {
      const FockVector v = schwinger_eigenstate(lambda, modes, profile);
      CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-13));
      const CVector lv = l.fock_form.apply(v.amplitudes());
      CHECK((lv - lambda * v.amplitudes()).norm() < 1e-12);
      // support stays in the closed sector n_k + n~_k <= cutoff
      double inside = 0.0;
      for (std::size_t i : closed_sector_indices(modes)) inside += std::norm(v.amplitudes()[static_cast<Eigen::Index>(i)]);
      CHECK(inside == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(schwinger_eigenstate(capacity + 1, modes, profile), ValidationError);
  }
}

TEST_CASE("moments reproduce direct expectation values") {
  std::mt19937_64 rng(22);
  const std::vector<double> labels = {1.0, 3.0};
  const ModeSet modes(labels, 5);
  CVector amp = oracle::random_matrix(rng, static_cast<Eigen::Index>(modes.dimension())).col(0);
  for (std::size_t i : boundary_indices(modes)) amp[static_cast<Eigen::Index>(i)] = 0.0;
  for (std::size_t i = 0; i < modes.dimension(); ++i)
    if (modes.occupations(i) != std::vector<int>{}) {
      int total = 0;
      for (int n : modes.occupations(i)) total += n;
      if (total > 4) amp[static_cast<Eigen::Index>(i)] = 0.0;
    }
  const FockVector state(modes, amp);
  const SlotMoments m = moments_of(state);
  for (int t = 0; t < 4; ++t) {
    const CoefficientMatrix q = random_quadratic(rng, labels, 1.0);
    const cplx direct = expectation(to_fock(q, modes), state);
    CHECK(std::abs(expectation_from_moments(q, m) - direct) < 1e-11);
  }
}

// Property: with uniform weights L commutes with every symmetric generator
// and with no generic asymmetric one, across mode counts and strengths.
TEST_CASE("property: invariance under symmetric channels") {
  for (std::size_t m = 1; m <= 5; ++m) {
    std::vector<double> labels;
    for (std::size_t i = 0; i < m; ++i) labels.push_back(0.5 * static_cast<double>(i + 1));
    const ModeSet shape(labels, 1);
    const CoefficientMatrix l = invariant_coeff(labels, uniform_weights(m));
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const double strength = 0.05 + 0.1 * static_cast<double>(seed % 10);
      const ChannelSpec sym = random_symmetric_channel(seed * 977 + m, strength, shape);
      CHECK(sym.symmetric);
      CHECK(commutation_residual(l, *sym.generator) <= 1e-14);
      const ChannelSpec asym = random_asymmetric_channel(seed * 977 + m, strength, shape);
      CHECK_FALSE(asym.symmetric);
      CHECK(commutation_residual(l, *asym.generator) > 1e-3);
    }
  }
}

// Property: unequal weights keep the invariance only for symmetric channels
// that do not couple modes of different weight.
TEST_CASE("property: unequal weights and mode mixing") {
  const std::vector<double> labels = {1.0, 2.0, 3.0};
  const CoefficientMatrix l = invariant_coeff(labels, {0.2, 0.3, 0.5});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    CoefficientTable diagonal(3), mixing(3);
    for (int xi = 1; xi <= 4; ++xi)
      for (std::size_t i = 0; i < 3; ++i) {
        diagonal.set(xi, i, i, 2.0 * unit_uniform(rng) - 1.0);
        mixing.set(xi, i, (i + 1) % 3, 2.0 * unit_uniform(rng) - 1.0);
      }
    CHECK(commutation_residual(l, assemble_hamiltonian(diagonal, diagonal, labels).generator) <= 1e-14);
    CHECK(commutation_residual(l, assemble_hamiltonian(mixing, mixing, labels).generator) > 1e-3);
  }
}

// Property: U+ L U = L for symmetric channels, through the exact transform.
TEST_CASE("property: Heisenberg transform leaves L fixed") {
  const std::vector<double> labels = {1.0, 2.0};
  const ModeSet shape(labels, 1);
  const CoefficientMatrix l = invariant_coeff(labels, uniform_weights(2));
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const ChannelSpec ch = random_symmetric_channel(seed, 0.4, shape);
    const CoefficientMatrix moved = heisenberg_transform(l, bogoliubov_of(*ch.generator));
    CHECK((moved - l).norm() < 1e-11);
  }
}
