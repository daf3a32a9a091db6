// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Tolerances and sizes are pinned here on purpose; they are not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fmt/format.h>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "bogo/channels.hpp"
#include "bogo/coeff.hpp"
#include "bogo/grid.hpp"
#include "bogo/invariant.hpp"
#include "bogo/protocol.hpp"
#include "bogo/rindler.hpp"
#include "bogo/simd/kernels.hpp"
#include "bogo/special.hpp"

using namespace bogo;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

std::vector<double> labels_of(std::size_t m) {
  std::vector<double> out;
  for (std::size_t i = 1; i <= m; ++i) out.push_back(static_cast<double>(i));
  return out;
}

// 1: 200 symmetric generators, 1..3 modes per field.
Outcome exact_invariance() {
  double worst = 0.0;
  for (std::size_t t = 0; t < 200; ++t) {
    const std::vector<double> labels = labels_of(1 + t % 3);
    const ModeSet shape(labels, 1);
    const ChannelSpec ch = random_symmetric_channel(channel_seed(101, t), 0.3, shape);
    worst = std::max(worst, commutation_residual(invariant_coeff(labels, uniform_weights(labels.size())), *ch.generator));
  }
  return {worst <= 1e-12, fmt::format("max residual {:.3e} (<= 1e-12)", worst)};
}

// 2: coefficient bracket vs interior-projected Fock commutator at cutoff 4.
Outcome representation_cross_check() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (int p = 0; p < 50; ++p) {
    const std::vector<double> labels = labels_of(1 + p % 2);
    const ModeSet modes(labels, 4);
    const CoefficientMatrix k1 = random_quadratic(rng, labels, 1.0);
    const CoefficientMatrix k2 = random_quadratic(rng, labels, 1.0);
    worst = std::max(worst, fock_bracket_residual(k1, k2, modes));
  }
  return {worst <= 1e-8, fmt::format("max relative difference {:.3e} (<= 1e-8)", worst)};
}

ProtocolConfig protocol_base(ChannelFamily family) {
  ProtocolConfig c;
  c.alphabet = {0, 1, 2, 3, 4};
  c.labels = {1.0};
  c.family = family;
  c.ensemble = 100;
  c.strength = 0.3;
  c.cutoff = 60;
  c.seed = 303;
  return c;
}

// 3: round trip through 100 symmetric channels.
Outcome round_trip() {
  const ProtocolResult r = run_experiment(protocol_base(ChannelFamily::symmetric));
  const bool all_valid = r.invalid_trials == 0 && r.valid_trials == r.records.size();
  const bool ok = all_valid && r.success_rate == 1.0 && r.worst_residual <= 1e-3 && r.max_leakage <= 1e-6;
  return {ok, fmt::format("{} trials, success {:.3f}, worst residual {:.3e} (<= 1e-3), max leakage {:.3e} (<= 1e-6)",
                          r.records.size(), r.success_rate, r.worst_residual, r.max_leakage)};
}

// 4: asymmetric channels must break decoding.
Outcome negative_control() {
  ProtocolConfig c = protocol_base(ChannelFamily::asymmetric);
  c.seed = 404;
  const ProtocolResult r = run_experiment(c);
  double worst = 0.0;
  for (const TrialRecord& t : r.records)
    if (t.valid) worst = std::max(worst, t.residual);
  return {r.success_rate < 1.0 && worst > 0.1,
          fmt::format("success {:.3f} (< 1), worst residual {:.3f} (> 0.1)", r.success_rate, worst)};
}

// 5: closed-sector spectra of L and U+ L U at cutoff 5.
Outcome spectrum_invariance() {
  const ModeSet modes({1.0}, 5);
  double evolved = 0.0, transformed = 0.0;
  for (std::size_t c = 0; c < 20; ++c) {
    const ChannelSpec ch = random_symmetric_channel(channel_seed(505, c), 0.3, modes);
    const SpectrumComparison s = spectrum_check(ch, modes, uniform_weights(1), 100, 1e-13);
    evolved = std::max(evolved, s.evolved_difference);
    transformed = std::max(transformed, s.transformed_difference);
  }
  return {evolved <= 1e-8 && transformed <= 1e-8,
          fmt::format("max difference evolved {:.3e}, Heisenberg {:.3e} (<= 1e-8)", evolved, transformed)};
}

// 6: grid eigenfunctions, w = 5, h = 0.05, extent 6w, second-order convergence.
Outcome grid_eigenfunctions() {
  const double w = 5.0;
  const GridSpec coarse{1, 0.05, 6 * w};
  const GridSpec fine{1, 0.025, 6 * w};
  double worst = 0.0, lo = INFINITY, hi = 0.0;
  for (int lambda = 0; lambda <= 3; ++lambda) {
    const double r = eigen_residual(eigenfunction_grid(lambda, w, coarse), lambda, {1.0}, 0.5 * w);
    const double rf = eigen_residual(eigenfunction_grid(lambda, w, fine), lambda, {1.0}, 0.5 * w);
    worst = std::max(worst, r);
    lo = std::min(lo, r / rf);
    hi = std::max(hi, r / rf);
  }
  return {worst <= 1e-3 && lo >= 3.5 && hi <= 4.5,
          fmt::format("max residual {:.3e} (<= 1e-3), refinement ratios [{:.3f}, {:.3f}] (in [3.5, 4.5])", worst, lo,
                      hi)};
}

// 7: expanding universe over a 4^3 grid with sigma = 1.
Outcome expanding_universe() {
  const std::vector<double> ks = {0.25, 0.5, 1.0, 2.0};
  const std::vector<double> masses = {0.25, 0.5, 1.0, 2.0};
  const std::vector<double> epsilons = {0.25, 0.5, 1.0, 2.0};
  double canonical = 0.0, reproduce = 0.0, residual = 0.0;
  bool decoded_all = true;
  for (double k : ks)
    for (double m : masses)
      for (double eps : epsilons) {
        const ModeOracle o = rw_mode_oracle(k, m, eps, 1.0);
        canonical = std::max(canonical, std::abs(std::norm(o.alpha) - std::norm(o.beta) - 1.0));
        const ChannelSpec ch = rw_channel(k, m, eps, 1.0);
        const BogolyubovMap built = bogoliubov_of(*ch.generator);
        // Field phi, label k: a_k -> alpha a_k - beta a+_{-k}.
        for (Eigen::Index f = 0; f < 2; ++f) {
          const Eigen::Index s = 2 * f;
          reproduce = std::max(reproduce, std::abs(std::abs(built.alpha(s, s)) - std::abs(o.alpha)));
          reproduce = std::max(reproduce, std::abs(std::abs(built.beta(s, s + 1)) - std::abs(o.beta)));
          reproduce = std::max(reproduce, std::abs(built.alpha(s, s + 1)) + std::abs(built.beta(s, s)));
        }
        ProtocolConfig c;
        c.alphabet = {0, 1, 2, 3};
        c.family = ChannelFamily::expanding;
        c.cutoff = 16;
        c.expanding = {.epsilon = eps, .sigma = 1.0, .mass = m, .k = k};
        const ProtocolResult r = run_experiment(c);
        decoded_all = decoded_all && r.invalid_trials == 0 && r.success_rate == 1.0;
        residual = std::max(residual, r.worst_residual);
      }
  const bool ok = canonical <= 1e-8 && reproduce <= 1e-6 && decoded_all && residual <= 1e-3;
  return {ok, fmt::format("64 points: oracle canonical residual {:.3e} (<= 1e-8), channel vs oracle {:.3e} (<= 1e-6), "
                          "all lambda decoded: {}, worst residual {:.3e} (<= 1e-3)",
                          canonical, reproduce, decoded_all ? "yes" : "no", residual)};
}

// 8: Rindler kernel, constraints and the regional split.
Outcome rindler() {
  const double a = 1.0;
  bool zero_exact = true;
  for (double k : {0.01, 0.3, 1.0, 7.0})
    for (double l : {0.05, 1.0, 20.0})
      zero_exact = zero_exact && rindler_alpha(k, -l, a) == cplx(0.0) && rindler_alpha(-k, l, a) == cplx(0.0);

  // |alpha_kl|^2 = 1 / (2 pi a l (1 - e^{-2 pi k / a})), from |Gamma(ix)|^2 = pi / (x sinh pi x).
  double modulus = 0.0;
  for (double acc : {0.5, 1.0, 3.0})
    for (double k : {0.01, 0.3, 1.0, 7.0})
      for (double l : {0.05, 1.0, 20.0}) {
        const double expected = 1.0 / (2 * std::numbers::pi * acc * l * -std::expm1(-2 * std::numbers::pi * k / acc));
        modulus = std::max(modulus, std::abs(std::norm(rindler_alpha(k, l, acc)) / expected - 1.0));
        const double x = k / acc;
        const double gamma_sq = std::norm(gamma(cplx(0.0, x)));
        modulus = std::max(modulus, std::abs(gamma_sq * x * std::sinh(std::numbers::pi * x) / std::numbers::pi - 1.0));
      }

  const std::vector<double> samples = {0.5, 1, 2, 4, 8};
  const Window split_l{0.1, 10.0, 16, Window::Spacing::logarithmic};
  const RindlerKernel reference{a, {1e-3, 100.0, 8001, Window::Spacing::linear}, split_l};
  // Refinement: half the node spacing over a window ten times wider.
  const RindlerKernel refined{a, {1e-3, 1000.0, 160001, Window::Spacing::linear}, split_l};
  const ConstraintReport ref = rindler_constraints(reference, samples);
  const ConstraintReport fin = rindler_constraints(refined, samples);
  const bool constraints = ref.second_max <= 1e-2 && ref.off_diagonal_max <= 0.05 &&
                           fin.off_diagonal_max < ref.off_diagonal_max && fin.second_max < ref.second_max;

  const RindlerKernel split_kernel{a, {0.05, 5.0, 64, Window::Spacing::linear}, split_l};
  const MinkowskiModes mink = minkowski_modes(split_kernel);
  const RegionalSplit split = regional_split(invariant_coeff(mink.labels, uniform_weights(mink.labels.size())),
                                             split_kernel);
  const double weight = split.first.window_weight;
  double split_error = 0.0;
  for (int lambda = 0; lambda <= 3; ++lambda) {
    const GridFunction f = eigenfunction_grid(lambda, 5.0, GridSpec{1, 0.05, 30.0});
    const SlotMoments m = replicate_moments(grid_pair_moments(f), mink.labels.size());
    const double value = expectation_from_moments(split.first.form, m).real();
    // lambda = 0 is measured against the lambda = 1 scale.
    split_error = std::max(split_error, std::abs(value - lambda * weight) / (std::max(lambda, 1) * weight));
  }

  const bool ok = zero_exact && modulus <= 1e-10 && constraints && split_error <= 0.02;
  return {ok, fmt::format("opposite-sign zero: {}, modulus identity {:.3e} (<= 1e-10), second {:.3e} (<= 1e-2), "
                          "off-diagonal {:.3e} (<= 0.05) -> {:.3e} refined, second -> {:.3e} refined, "
                          "split error {:.3e} (<= 0.02)",
                          zero_exact ? "yes" : "no", modulus, ref.second_max, ref.off_diagonal_max,
                          fin.off_diagonal_max, fin.second_max, split_error)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact invariance", 10, exact_invariance},
      {2, "representation cross-check", 60, representation_cross_check},
      {3, "round-trip protocol", 300, round_trip},
      {4, "asymmetric negative control", 300, negative_control},
      {5, "spectrum invariance", 300, spectrum_invariance},
      {6, "grid eigenfunctions", 300, grid_eigenfunctions},
      {7, "expanding-universe channel", 300, expanding_universe},
      {8, "Rindler kernel and regional split", 600, rindler},
  };
  fmt::print("kernels: {}\n", simd::isa_name(simd::active_isa()));
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = o.passed && in_time;
    failures += pass ? 0 : 1;
    fmt::print("{} criterion {} ({}): {}; {:.1f} s (< {:.0f} s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail,
               seconds, c.budget_seconds);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
