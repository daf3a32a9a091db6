#include <doctest.h>

#include <cmath>

#include "bogo/error.hpp"
#include "bogo/protocol.hpp"

using namespace bogo;

namespace {

ProtocolConfig small_config(ChannelFamily family) {
  ProtocolConfig c;
  c.alphabet = {0, 1, 2};
  c.family = family;
  c.ensemble = 6;
  c.cutoff = 50;
  c.seed = 17;
  c.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("channel seeds follow splitmix64") {
  // Reference values from an independent splitmix64 implementation.
  CHECK(channel_seed(0, 0) == 16294208416658607535ULL);
  CHECK(channel_seed(1, 0) == 10451216379200822465ULL);
  CHECK(channel_seed(12345, 999) == 11146372364405179148ULL);
  CHECK(channel_seed(7, 19) == 13970124788236171000ULL);
}

TEST_CASE("families and automatic cutoff") {
  for (ChannelFamily f : {ChannelFamily::identity, ChannelFamily::symmetric, ChannelFamily::asymmetric,
                          ChannelFamily::expanding})
    CHECK(parse_family(family_name(f)) == f);
  CHECK_THROWS_AS(parse_family("bogus"), ValidationError);
  CHECK(auto_cutoff(2) == 60);
  CHECK(auto_cutoff(4) == 21);
  ProtocolConfig c;
  CHECK(protocol_modes(c).cutoff() == 60);
  c.family = ChannelFamily::expanding;
  const ModeSet m = protocol_modes(c);
  CHECK(m.labels() == std::vector<double>{1.0, -1.0});
  CHECK(protocol_weights(c) == std::vector<double>{0.5, 0.5});
  c.cutoff = -1;
  CHECK_THROWS_AS(protocol_modes(c), ValidationError);
}

TEST_CASE("encode and decode without a channel") {
  const ProtocolConfig c = small_config(ChannelFamily::identity);
  const ModeSet modes = protocol_modes(c);
  const InvariantObservable l = build_invariant(modes, protocol_weights(c));
  for (int lambda : c.alphabet) {
    const FockVector v = encode(lambda, c, modes);
    const Decoded d = decode_expectation(v, l);
    CHECK(d.value == doctest::Approx(lambda).epsilon(1e-13));
    CHECK(d.decoded == lambda);
    CHECK(observable_variance(v, l) < 1e-12);
  }
  CHECK_THROWS_AS(encode(7, c, modes), ValidationError);  // not in the alphabet
}

TEST_CASE("Born-rule sampler") {
  const ModeSet modes({1.0}, 6);
  const InvariantObservable l = build_invariant(modes, {1.0});
  const SpectralSampler sampler(l);
  const FockVector e2 = schwinger_eigenstate(2, modes);
  const auto d2 = sampler.distribution(e2);
  CHECK(d2.at(2) == doctest::Approx(1.0).epsilon(1e-12));

  // Superposition with probabilities 0.2, 0.3, 0.5 on lambda = -1, 0, 3.
  CVector amp = std::sqrt(0.2) * schwinger_eigenstate(-1, modes).amplitudes() +
                std::sqrt(0.3) * schwinger_eigenstate(0, modes).amplitudes() +
                std::sqrt(0.5) * kI * schwinger_eigenstate(3, modes).amplitudes();
  const FockVector mix(modes, amp);
  const auto dist = sampler.distribution(mix);
  CHECK(dist.at(-1) == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(dist.at(3) == doctest::Approx(0.5).epsilon(1e-10));
  std::mt19937_64 rng(5);
  const int n = 10000;
  std::map<long, int> counts;
  for (int i = 0; i < n; ++i) ++counts[sampler.sample(mix, rng)];
  CHECK(counts.size() == 3);
  for (const auto& [value, p] : std::map<long, double>{{-1, 0.2}, {0, 0.3}, {3, 0.5}}) {
    const double sigma = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(counts[value] - n * p) <= 3 * sigma);
  }
  CHECK_THROWS_AS(SpectralSampler(build_invariant(ModeSet({1.0, 2.0}, 8), {0.5, 0.5}), 100), ValidationError);
}

TEST_CASE("identity and symmetric channels decode exactly") {
  for (ChannelFamily f : {ChannelFamily::identity, ChannelFamily::symmetric}) {
    const ProtocolResult r = run_experiment(small_config(f));
    CHECK(r.records.size() == 18);
    CHECK(r.success_rate == 1.0);
    CHECK(r.worst_residual < 1e-6);
    CHECK(r.invalid_trials == 0);
  }
}

TEST_CASE("asymmetric channels break decoding") {
  ProtocolConfig c = small_config(ChannelFamily::asymmetric);
  c.ensemble = 20;
  const ProtocolResult r = run_experiment(c);
  CHECK(r.success_rate < 1.0);
  CHECK(r.worst_residual > 0.1);
}

TEST_CASE("results do not depend on the thread count") {
  ProtocolConfig c = small_config(ChannelFamily::symmetric);
  c.ensemble = 8;
  const ProtocolResult one = run_experiment(c);
  c.threads = 3;
  const ProtocolResult three = run_experiment(c);
  REQUIRE(one.records.size() == three.records.size());
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    CHECK(one.records[i].expectation == three.records[i].expectation);
    CHECK(one.records[i].leakage == three.records[i].leakage);
    CHECK(one.records[i].seed == three.records[i].seed);
  }
}

TEST_CASE("leakage guard") {
  const BogolyubovMap id = BogolyubovMap::identity(2);
  CHECK(leakage_estimate(id, 10, 2) == 0.0);
  BogolyubovMap squeeze = id;
  squeeze.alpha *= std::cosh(0.5);
  squeeze.beta(0, 1) = squeeze.beta(1, 0) = std::sinh(0.5);
  CHECK(leakage_estimate(squeeze, 10, 4) == doctest::Approx(std::pow(std::tanh(0.5), 12)).epsilon(1e-12));

  // A tiny cutoff under strong channels exhausts the budget on most trials.
  ProtocolConfig c = small_config(ChannelFamily::symmetric);
  c.cutoff = 6;
  c.strength = 1.0;
  c.leakage_budget = 1e-12;
  CHECK_THROWS_AS(run_experiment(c), NumericalError);
}

TEST_CASE("protocol validation") {
  ProtocolConfig c = small_config(ChannelFamily::symmetric);
  c.alphabet = {};
  CHECK_THROWS_AS(run_experiment(c), ValidationError);
  c = small_config(ChannelFamily::symmetric);
  c.alphabet = {-1};
  CHECK_THROWS_AS(run_experiment(c), ValidationError);
  c.alphabet = {51};
  CHECK_THROWS_AS(run_experiment(c), ValidationError);
  c = small_config(ChannelFamily::symmetric);
  c.labels = {1.0, 2.0};
  c.cutoff = 8;
  c.weights = {0.7, 0.7};
  CHECK_THROWS_AS(run_experiment(c), ValidationError);
  c = small_config(ChannelFamily::symmetric);
  c.ensemble = 0;
  CHECK_THROWS_AS(run_experiment(c), ValidationError);
}

TEST_CASE("spectrum check separates symmetric from asymmetric channels") {
  const ModeSet modes({1.0}, 4);
  const SpectrumComparison sym = spectrum_check(random_symmetric_channel(3, 0.3, modes), modes, {1.0}, 40);
  CHECK(sym.evolved_difference < 1e-8);
  CHECK(sym.transformed_difference < 1e-10);
  CHECK(sym.reference.size() == 15);
  const SpectrumComparison asym = spectrum_check(random_asymmetric_channel(3, 0.3, modes), modes, {1.0}, 40);
  CHECK(asym.transformed_difference > 1e-3);
  CHECK_THROWS_AS(spectrum_check(random_symmetric_channel(3, 0.3, modes), modes, {1.0}, 3), ValidationError);
}
