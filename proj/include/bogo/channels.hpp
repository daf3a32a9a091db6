#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "bogo/coeff.hpp"
#include "bogo/modes.hpp"

namespace bogo {

// Real coefficients D^xi_ij, xi = 1..4, over field-local mode indices.
class CoefficientTable {
 public:
  explicit CoefficientTable(std::size_t mode_count);

  std::size_t mode_count() const { return modes_; }
  double at(int xi, std::size_t i, std::size_t j) const { return values_[offset(xi, i, j)]; }
  // Rejects non-finite values.
  void set(int xi, std::size_t i, std::size_t j, double value);
  const std::vector<double>& values() const { return values_; }

  bool operator==(const CoefficientTable& other) const = default;

 private:
  std::size_t offset(int xi, std::size_t i, std::size_t j) const;
  std::size_t modes_;
  std::vector<double> values_;
};

struct AssembledHamiltonian {
  CoefficientMatrix generator;
  bool symmetric = false;  //< D == D~ entrywise
};

// H = sum D^xi_ij G^xi_ij on phi + sum D~^xi_ij G^xi_ij on phi-tilde.
AssembledHamiltonian assemble_hamiltonian(const CoefficientTable& d, const CoefficientTable& d_tilde,
                                          const std::vector<double>& labels);

enum class ChannelKind { generic_symmetric, generic_asymmetric, expanding_universe, rindler };
std::string_view channel_kind_name(ChannelKind kind);

struct ChannelParams {
  double epsilon = 0.0;
  double sigma = 1.0;
  double mass = 0.0;
  double k = 0.0;
  double acceleration = 1.0;
  std::uint64_t seed = 0;
  double strength = 0.0;
};

struct ChannelSpec {
  ChannelKind kind = ChannelKind::generic_symmetric;
  std::optional<CoefficientMatrix> generator;
  std::optional<BogolyubovMap> bogomap;  //< per-field map when known in closed form
  bool symmetric = false;
  ChannelParams params;
};

// Uniform double in [0, 1) from the top 53 bits; fixed across platforms,
// unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// D^xi_ij uniform in [-strength, strength] for every xi and ordered (i, j).
CoefficientTable random_table(std::mt19937_64& rng, std::size_t mode_count, double strength);

// Random Hermitian quadratic form over all slots (cross-field terms and a
// real scalar included), entries of size ~scale.
CoefficientMatrix random_quadratic(std::mt19937_64& rng, const std::vector<double>& labels, double scale);

ChannelSpec random_symmetric_channel(std::uint64_t seed, double strength, const ModeSet& modes);
ChannelSpec random_asymmetric_channel(std::uint64_t seed, double strength, const ModeSet& modes);

// Asymptotic in/out frequencies sqrt(k^2 + m^2) and sqrt(k^2 + m^2 (1 + 2 eps)).
std::pair<double, double> rw_frequencies(double k, double m, double eps);

// Real, nonnegative sector coefficients (|alpha|, |beta|).
struct SectorCoefficients {
  double alpha = 1.0;
  double beta = 0.0;
};

// Closed form for C(tau) = 1 + eps (1 + tanh(sigma tau)), evaluated in log
// space. Throws NumericalError if |alpha|^2 - |beta|^2 deviates from 1.
SectorCoefficients rw_coefficients(double k, double m, double eps, double sigma);

// Complex in-mode projection from integrating chi'' + (k^2 + C m^2) chi = 0
// across tau in [-T/sigma, T/sigma].
struct ModeOracle {
  cplx alpha;
  cplx beta;
  int steps = 0;
};
ModeOracle rw_mode_oracle(double k, double m, double eps, double sigma, double tolerance = 1e-13,
                          double half_span = 25.0);

// Map over the two-mode sector {k, -k} of one field:
// U+ a_k U = alpha a_k - beta a+_{-k}.
BogolyubovMap rw_bogoliubov(double k, double m, double eps, double sigma);

// Symmetric generator on labels {k, -k} whose exponential reproduces
// rw_bogoliubov on both fields: a two-mode squeeze with
// |xi| = artanh(|beta| / |alpha|).
ChannelSpec rw_channel(double k, double m, double eps, double sigma);

// Block-diagonal two-field map built from a per-field map.
BogolyubovMap two_field_map(const BogolyubovMap& per_field);

}  // namespace bogo
