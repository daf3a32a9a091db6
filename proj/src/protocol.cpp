#include "bogo/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fmt/format.h>
#include <thread>

#include "bogo/error.hpp"

namespace bogo {

std::string_view family_name(ChannelFamily family) {
  switch (family) {
    case ChannelFamily::identity: return "identity";
    case ChannelFamily::symmetric: return "symmetric";
    case ChannelFamily::asymmetric: return "asymmetric";
    case ChannelFamily::expanding: return "expanding";
  }
  return "unknown";
}

ChannelFamily parse_family(std::string_view name) {
  for (ChannelFamily f : {ChannelFamily::identity, ChannelFamily::symmetric, ChannelFamily::asymmetric,
                          ChannelFamily::expanding})
    if (family_name(f) == name) return f;
  throw ValidationError(fmt::format("unknown channel family '{}' (identity, symmetric, asymmetric, expanding)", name));
}

int auto_cutoff(std::size_t slots) {
  // Largest cutoff <= kAutoCutoffMax whose dimension fits the working cap.
  int c = ProtocolConfig::kAutoCutoffMax;
  while (c > 6 && std::pow(c + 1.0, static_cast<double>(slots)) > ProtocolConfig::kAutoDimension) --c;
  return c;
}

ModeSet protocol_modes(const ProtocolConfig& config) {
  if (config.cutoff < 0) throw ValidationError("cutoff must be >= 0 (0 picks one automatically)");
  std::vector<double> labels = config.labels;
  if (config.family == ChannelFamily::expanding) {
    if (config.expanding.k == 0.0) throw ValidationError("expanding-universe channel needs k != 0");
    labels = {config.expanding.k, -config.expanding.k};
  }
  const int cutoff = config.cutoff > 0 ? config.cutoff : auto_cutoff(2 * labels.size());
  return ModeSet(std::move(labels), cutoff);
}

std::vector<double> protocol_weights(const ProtocolConfig& config) {
  const ModeSet modes = protocol_modes(config);
  if (config.weights.empty() || config.family == ChannelFamily::expanding) return uniform_weights(modes.mode_count());
  validate_weights(config.weights, modes.mode_count());
  return config.weights;
}

std::uint64_t channel_seed(std::uint64_t run_seed, std::size_t index) {
  // splitmix64 of (seed, index)
  std::uint64_t z = run_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ChannelSpec make_channel(const ProtocolConfig& config, const ModeSet& modes, std::size_t index) {
  const std::uint64_t seed = channel_seed(config.seed, index);
  switch (config.family) {
    case ChannelFamily::identity: {
      ChannelSpec c = random_symmetric_channel(seed, 0.0, modes);
      return c;
    }
    case ChannelFamily::symmetric: return random_symmetric_channel(seed, config.strength, modes);
    case ChannelFamily::asymmetric: return random_asymmetric_channel(seed, config.strength, modes);
    case ChannelFamily::expanding: {
      const ChannelParams& p = config.expanding;
      return rw_channel(p.k, p.mass, p.epsilon, p.sigma);
    }
  }
  throw ValidationError("unknown channel family");
}

FockVector encode(int lambda, const ProtocolConfig& config, const ModeSet& modes) {
  if (std::find(config.alphabet.begin(), config.alphabet.end(), lambda) == config.alphabet.end())
    throw ValidationError(fmt::format("{} is not in the alphabet", lambda));
  return schwinger_eigenstate(lambda, modes, config.profile);
}

Evolution transmit(const FockVector& state, const ChannelSpec& channel, double krylov_tolerance) {
  if (!channel.generator) throw ValidationError("transmit needs a generator-based channel");
  EvolveOptions opt;
  opt.tolerance = krylov_tolerance;
  return exp_evolve(to_fock(*channel.generator, state.modes()), state, opt);
}

Decoded decode_expectation(const FockVector& state, const InvariantObservable& l) {
  const double value = expectation(l.fock_form, state).real();
  return {value, std::lround(value)};
}

double observable_variance(const FockVector& state, const InvariantObservable& l) {
  const CVector lv = l.fock_form.apply(state.amplitudes());
  const double norm2 = state.amplitudes().squaredNorm();
  const double mean = state.amplitudes().dot(lv).real() / norm2;
  return std::max(0.0, lv.squaredNorm() / norm2 - mean * mean);
}

SpectralSampler::SpectralSampler(const InvariantObservable& l, std::size_t max_dimension) {
  const std::size_t dim = l.fock_form.dimension();
  if (dim > max_dimension)
    throw ValidationError(fmt::format("dimension {} too large for a dense decomposition (cap {}); decode by expectation",
                                      dim, max_dimension));
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(CMatrix(l.fock_form.matrix()));
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition of L failed");
  eigenvalues_ = eig.eigenvalues();
  eigenvectors_ = eig.eigenvectors();
}

std::map<long, double> SpectralSampler::distribution(const FockVector& state) const {
  if (static_cast<Eigen::Index>(state.modes().dimension()) != eigenvectors_.rows())
    throw ValidationError("state dimension does not match the observable");
  const CVector coeff = eigenvectors_.adjoint() * state.amplitudes();
  const double total = coeff.squaredNorm();
  std::map<long, double> out;
  for (Eigen::Index i = 0; i < coeff.size(); ++i) out[std::lround(eigenvalues_[i])] += std::norm(coeff[i]) / total;
  return out;
}

long SpectralSampler::sample(const FockVector& state, std::mt19937_64& rng) const {
  const std::map<long, double> p = distribution(state);
  const double u = unit_uniform(rng);
  double acc = 0.0;
  for (const auto& [value, prob] : p) {
    acc += prob;
    if (u < acc) return value;
  }
  return p.rbegin()->first;
}

long decode_sample(const FockVector& state, const InvariantObservable& l, std::mt19937_64& rng) {
  return SpectralSampler(l).sample(state, rng);
}

double leakage_estimate(const BogolyubovMap& map, int cutoff, int max_occupation) {
  if (cutoff <= max_occupation) return 1.0;
  const double beta = map.beta.size() == 0 ? 0.0 : Eigen::JacobiSVD<CMatrix>(map.beta).singularValues()[0];
  const double t = std::tanh(std::asinh(beta));
  return std::pow(t, 2.0 * (cutoff - max_occupation));
}

ProtocolResult run_experiment(const ProtocolConfig& config) {
  if (config.alphabet.empty()) throw ValidationError("alphabet is empty");
  if (config.ensemble == 0) throw ValidationError("ensemble size must be >= 1");
  if (!(config.leakage_budget > 0.0)) throw ValidationError("leakage budget must be positive");
  const ModeSet modes = protocol_modes(config);
  const std::vector<double> weights = protocol_weights(config);
  const int capacity = eigen_capacity(modes, config.profile);
  for (int lambda : config.alphabet) {
    if (lambda < 0) throw ValidationError(fmt::format("alphabet values must be nonnegative, got {}", lambda));
    if (lambda > capacity)
      throw ValidationError(fmt::format("alphabet value {} exceeds the eigenvalue capacity {} at cutoff {}", lambda,
                                        capacity, modes.cutoff()));
  }
  const InvariantObservable l = build_invariant(modes, weights);
  const std::size_t per_channel = config.alphabet.size();
  const std::size_t channels = config.family == ChannelFamily::expanding ? 1 : config.ensemble;

  ProtocolResult result;
  result.records.resize(channels * per_channel);
  std::vector<std::exception_ptr> errors(channels);

  auto run_channel = [&](std::size_t c) {
    const ChannelSpec channel = make_channel(config, modes, c);
    const BogolyubovMap map = bogoliubov_of(*channel.generator);
    const std::uint64_t seed = config.family == ChannelFamily::expanding ? config.seed : channel_seed(config.seed, c);
    for (std::size_t i = 0; i < per_channel; ++i) {
      const int lambda = config.alphabet[i];
      TrialRecord& r = result.records[c * per_channel + i];
      r.trial = c * per_channel + i;
      r.lambda_sent = lambda;
      r.channel_id = c;
      r.seed = seed;
      const int top = lambda + 2 * config.profile.extra_pairs;
      const double guard = leakage_estimate(map, modes.cutoff(), top);
      if (guard > config.leakage_budget) {
        r.valid = false;
        r.leakage = guard;
        continue;
      }
      const Evolution ev = transmit(encode(lambda, config, modes), channel, config.krylov_tolerance);
      r.leakage = ev.leakage;
      r.valid = ev.leakage <= config.leakage_budget;
      const Decoded d = decode_expectation(ev.state, l);
      r.expectation = d.value;
      r.decoded = d.decoded;
      r.residual = std::abs(d.value - lambda);
      r.variance = observable_variance(ev.state, l);
    }
  };

  unsigned threads = config.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, channels));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t c = t; c < channels; c += threads) {
        try {
          run_channel(c);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      }
    });
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  for (const TrialRecord& r : result.records) {
    result.max_leakage = std::max(result.max_leakage, r.leakage);
    if (!r.valid) {
      ++result.invalid_trials;
      continue;
    }
    ++result.valid_trials;
    if (r.decoded == r.lambda_sent) ++result.correct_trials;
    result.worst_residual = std::max(result.worst_residual, r.residual);
  }
  if (10 * result.invalid_trials > result.records.size())
    throw NumericalError(fmt::format("{} of {} trials exceeded the leakage budget {:.1e}; raise the cutoff",
                                     result.invalid_trials, result.records.size(), config.leakage_budget));
  result.success_rate = result.valid_trials == 0 ? 0.0
                                                 : static_cast<double>(result.correct_trials) /
                                                       static_cast<double>(result.valid_trials);
  return result;
}

namespace {

std::vector<double> sorted_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  std::vector<double> v(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
  return g;
}

}  // namespace

SpectrumComparison spectrum_check(const ChannelSpec& channel, const ModeSet& modes, const std::vector<double>& weights,
                                  int working_cutoff, double krylov_tolerance) {
  if (!channel.generator) throw ValidationError("spectrum check needs a generator-based channel");
  if (working_cutoff < modes.cutoff()) throw ValidationError("working cutoff must be at least the report cutoff");
  const std::vector<std::size_t> sector = closed_sector_indices(modes);
  const InvariantObservable l = build_invariant(modes, weights);

  SpectrumComparison out;
  out.reference = sorted_eigenvalues(compress(l.fock_form, sector));

  const ModeSet work = modes.with_cutoff(working_cutoff);
  const FockOperator h = to_fock(*channel.generator, work);
  const FockOperator l_work = to_fock(l.coeff_form, work);
  EvolveOptions opt;
  opt.tolerance = krylov_tolerance;
  opt.project_boundary = false;
  std::vector<CVector> evolved;
  for (std::size_t idx : sector) {
    CVector e = CVector::Zero(static_cast<Eigen::Index>(modes.dimension()));
    e[static_cast<Eigen::Index>(idx)] = 1.0;
    const FockVector start = change_cutoff(FockVector(modes, std::move(e)), working_cutoff);
    Evolution ev = exp_evolve(h, start, opt);
    out.max_leakage = std::max(out.max_leakage, ev.state.boundary_population());
    evolved.push_back(std::move(ev.state.amplitudes()));
  }
  const auto n = static_cast<Eigen::Index>(sector.size());
  CMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const CVector lj = l_work.apply(evolved[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = evolved[static_cast<std::size_t>(i)].dot(lj);
  }
  out.evolved = sorted_eigenvalues(m);

  const CoefficientMatrix rotated = heisenberg_transform(l.coeff_form, bogoliubov_of(*channel.generator));
  out.transformed = sorted_eigenvalues(compress(to_fock(rotated, modes), sector));

  out.evolved_difference = max_gap(out.reference, out.evolved);
  out.transformed_difference = max_gap(out.reference, out.transformed);
  return out;
}

}  // namespace bogo
