#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "bogo/channels.hpp"
#include "bogo/evolve.hpp"
#include "bogo/invariant.hpp"

namespace bogo {

enum class ChannelFamily { identity, symmetric, asymmetric, expanding };
std::string_view family_name(ChannelFamily family);
ChannelFamily parse_family(std::string_view name);

struct ProtocolConfig {
  std::vector<int> alphabet = {0, 1, 2, 3, 4};
  std::vector<double> labels = {1.0};
  std::vector<double> weights;  //< empty: uniform
  ChannelFamily family = ChannelFamily::symmetric;
  std::size_t ensemble = 100;
  double strength = 0.3;
  // 0: the largest cutoff <= kAutoCutoffMax with (cutoff+1)^(2M) <= kAutoDimension.
  int cutoff = 0;
  static constexpr int kAutoCutoffMax = 60;
  static constexpr double kAutoDimension = 250'000;
  double leakage_budget = 1e-6;
  std::uint64_t seed = 1;
  unsigned threads = 0;  //< 0: hardware concurrency
  EigenProfile profile;
  double krylov_tolerance = 1e-12;
  // Expanding family: the sector {k, -k} replaces `labels`.
  ChannelParams expanding{.epsilon = 1.0, .sigma = 1.0, .mass = 1.0, .k = 1.0};
};

struct TrialRecord {
  std::size_t trial = 0;
  int lambda_sent = 0;
  double expectation = 0.0;
  long decoded = 0;
  double residual = 0.0;
  double variance = 0.0;
  double leakage = 0.0;
  std::size_t channel_id = 0;
  std::uint64_t seed = 0;
  bool valid = true;
};

struct ProtocolResult {
  std::vector<TrialRecord> records;
  std::size_t valid_trials = 0;
  std::size_t invalid_trials = 0;
  std::size_t correct_trials = 0;
  double success_rate = 0.0;  //< correct / valid
  double worst_residual = 0.0;
  double max_leakage = 0.0;
};

// Resolved mode set and weights of a configuration.
ModeSet protocol_modes(const ProtocolConfig& config);
int auto_cutoff(std::size_t slots);
std::vector<double> protocol_weights(const ProtocolConfig& config);

// Seed of channel `index` derived from the run seed.
std::uint64_t channel_seed(std::uint64_t run_seed, std::size_t index);

ChannelSpec make_channel(const ProtocolConfig& config, const ModeSet& modes, std::size_t index);

// L eigenstate with eigenvalue lambda (lambda must be in the alphabet).
FockVector encode(int lambda, const ProtocolConfig& config, const ModeSet& modes);

// Evolves through a generator-based channel; the result carries leakage.
Evolution transmit(const FockVector& state, const ChannelSpec& channel, double krylov_tolerance = 1e-12);

struct Decoded {
  double value = 0.0;
  long decoded = 0;
};
// <L> on the normalized state and its nearest integer. Takes no channel.
Decoded decode_expectation(const FockVector& state, const InvariantObservable& l);
// <L^2> - <L>^2
double observable_variance(const FockVector& state, const InvariantObservable& l);

// Born-rule sampling of L, eigenspaces grouped by rounded eigenvalue. Needs a
// dense eigendecomposition, so construction refuses dimensions above the cap.
class SpectralSampler {
 public:
  static constexpr std::size_t kDefaultMaxDimension = 4096;
  explicit SpectralSampler(const InvariantObservable& l, std::size_t max_dimension = kDefaultMaxDimension);

  std::map<long, double> distribution(const FockVector& state) const;
  long sample(const FockVector& state, std::mt19937_64& rng) const;

 private:
  Eigen::VectorXd eigenvalues_;
  CMatrix eigenvectors_;
};

long decode_sample(const FockVector& state, const InvariantObservable& l, std::mt19937_64& rng);

// Rough tail estimate of the population pushed past the cutoff by a map with
// squeezing r = asinh(||beta||_2) acting on occupations <= max_occupation:
// tanh(r)^(2 (cutoff - max_occupation)).
double leakage_estimate(const BogolyubovMap& map, int cutoff, int max_occupation);

ProtocolResult run_experiment(const ProtocolConfig& config);

// Sorted spectra of L and of U+ L U on the closed sector of `modes`
// (n_k + n~_k <= cutoff), the latter built from states evolved at
// `working_cutoff` and, independently, from the exact Heisenberg transform.
struct SpectrumComparison {
  std::vector<double> reference;
  std::vector<double> evolved;
  std::vector<double> transformed;
  double evolved_difference = 0.0;
  double transformed_difference = 0.0;
  double max_leakage = 0.0;
};
SpectrumComparison spectrum_check(const ChannelSpec& channel, const ModeSet& modes, const std::vector<double>& weights,
                                  int working_cutoff = 100, double krylov_tolerance = 1e-13);

}  // namespace bogo
