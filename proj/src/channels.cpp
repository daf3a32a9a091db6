#include "bogo/channels.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "bogo/error.hpp"

namespace bogo {

CoefficientTable::CoefficientTable(std::size_t mode_count)
    : modes_(mode_count), values_(4 * mode_count * mode_count, 0.0) {
  if (mode_count == 0) throw ValidationError("coefficient table needs at least one mode");
}

std::size_t CoefficientTable::offset(int xi, std::size_t i, std::size_t j) const {
  if (xi < 1 || xi > 4) throw ValidationError(fmt::format("generator index xi must be 1..4, got {}", xi));
  if (i >= modes_ || j >= modes_)
    throw ValidationError(fmt::format("table indices ({}, {}) out of range ({} modes)", i, j, modes_));
  return (static_cast<std::size_t>(xi - 1) * modes_ + i) * modes_ + j;
}

void CoefficientTable::set(int xi, std::size_t i, std::size_t j, double value) {
  if (!std::isfinite(value)) throw ValidationError(fmt::format("coefficient D^{}_{}{} is not finite", xi, i, j));
  values_[offset(xi, i, j)] = value;
}

AssembledHamiltonian assemble_hamiltonian(const CoefficientTable& d, const CoefficientTable& d_tilde,
                                          const std::vector<double>& labels) {
  const std::size_t m = labels.size();
  if (d.mode_count() != m || d_tilde.mode_count() != m)
    throw ValidationError(fmt::format("coefficient tables cover {} and {} modes, mode set has {}", d.mode_count(),
                                      d_tilde.mode_count(), m));
  const ModeSet shape(labels, 1, ~std::size_t{0});
  CoefficientMatrix h(labels);
  for (int xi = 1; xi <= 4; ++xi)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (const double v = d.at(xi, i, j); v != 0.0) h += cplx(v) * generator_coeff(xi, i, j, shape);
        if (const double v = d_tilde.at(xi, i, j); v != 0.0)
          h += cplx(v) * generator_coeff(xi, m + i, m + j, shape);
      }
  return {std::move(h), d == d_tilde};
}

std::string_view channel_kind_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::generic_symmetric: return "generic-symmetric";
    case ChannelKind::generic_asymmetric: return "generic-asymmetric";
    case ChannelKind::expanding_universe: return "expanding-universe";
    case ChannelKind::rindler: return "rindler";
  }
  return "unknown";
}

CoefficientTable random_table(std::mt19937_64& rng, std::size_t mode_count, double strength) {
  if (!(strength >= 0.0) || !std::isfinite(strength)) throw ValidationError("channel strength must be >= 0");
  CoefficientTable t(mode_count);
  for (int xi = 1; xi <= 4; ++xi)
    for (std::size_t i = 0; i < mode_count; ++i)
      for (std::size_t j = 0; j < mode_count; ++j) t.set(xi, i, j, strength * (2.0 * unit_uniform(rng) - 1.0));
  return t;
}

CoefficientMatrix random_quadratic(std::mt19937_64& rng, const std::vector<double>& labels, double scale) {
  const auto n = static_cast<Eigen::Index>(2 * labels.size());
  auto draw = [&] {
    const double re = scale * (2.0 * unit_uniform(rng) - 1.0);
    const double im = scale * (2.0 * unit_uniform(rng) - 1.0);
    return cplx(re, im);
  };
  CMatrix a(n, n), b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = draw();
      b(i, j) = draw();
    }
  a = 0.5 * (a + a.adjoint()).eval();
  b = 0.5 * (b + b.transpose()).eval();
  const double s = scale * (2.0 * unit_uniform(rng) - 1.0);
  return CoefficientMatrix::from_blocks(labels, a, b, b.conjugate(), s);
}

ChannelSpec random_symmetric_channel(std::uint64_t seed, double strength, const ModeSet& modes) {
  std::mt19937_64 rng(seed);
  const CoefficientTable d = random_table(rng, modes.mode_count(), strength);
  AssembledHamiltonian h = assemble_hamiltonian(d, d, modes.labels());
  ChannelParams p;
  p.seed = seed;
  p.strength = strength;
  return {ChannelKind::generic_symmetric, std::move(h.generator), std::nullopt, h.symmetric, p};
}

ChannelSpec random_asymmetric_channel(std::uint64_t seed, double strength, const ModeSet& modes) {
  std::mt19937_64 rng(seed);
  const CoefficientTable d = random_table(rng, modes.mode_count(), strength);
  const CoefficientTable dt = random_table(rng, modes.mode_count(), strength);
  AssembledHamiltonian h = assemble_hamiltonian(d, dt, modes.labels());
  ChannelParams p;
  p.seed = seed;
  p.strength = strength;
  return {ChannelKind::generic_asymmetric, std::move(h.generator), std::nullopt, h.symmetric, p};
}

std::pair<double, double> rw_frequencies(double k, double m, double eps) {
  if (!(m >= 0.0) || !(eps >= 0.0) || !std::isfinite(k) || !std::isfinite(m) || !std::isfinite(eps))
    throw ValidationError("expanding-universe parameters need finite k and m >= 0, eps >= 0");
  return {std::sqrt(k * k + m * m), std::sqrt(k * k + m * m * (1.0 + 2.0 * eps))};
}

namespace {

// log(sinh x) for x > 0 without overflow.
double log_sinh(double x) { return x + std::log(-std::expm1(-2.0 * x)) - std::numbers::ln2; }

void require_sector(double k, double m, double eps, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be positive");
  const auto [w_in, w_out] = rw_frequencies(k, m, eps);
  if (!(w_in > 0.0)) throw ValidationError("sector frequency is zero (k = m = 0)");
  (void)w_out;
}

}  // namespace

SectorCoefficients rw_coefficients(double k, double m, double eps, double sigma) {
  require_sector(k, m, eps, sigma);
  const auto [w_in, w_out] = rw_frequencies(k, m, eps);
  const double s = std::numbers::pi / sigma;
  const double x_in = s * w_in, x_out = s * w_out;
  const double x_plus = 0.5 * s * (w_out + w_in), x_minus = 0.5 * s * (w_out - w_in);
  const double base = log_sinh(x_in) + log_sinh(x_out);
  SectorCoefficients c;
  c.alpha = std::exp(0.5 * (2.0 * log_sinh(x_plus) - base));
  c.beta = x_minus > 0.0 ? std::exp(0.5 * (2.0 * log_sinh(x_minus) - base)) : 0.0;
  const double residual = std::abs(c.alpha * c.alpha - c.beta * c.beta - 1.0);
  if (residual > 1e-10 * c.alpha * c.alpha)
    throw NumericalError(fmt::format("sector coefficients not canonical: residual {:.3e}", residual));
  return c;
}

ModeOracle rw_mode_oracle(double k, double m, double eps, double sigma, double tolerance, double half_span) {
  require_sector(k, m, eps, sigma);
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 4>;  // Re chi, Im chi, Re chi', Im chi'
  const auto [w_in, w_out] = rw_frequencies(k, m, eps);

  auto rhs = [&](const State& y, State& dy, double tau) {
    const double c = 1.0 + eps * (1.0 + std::tanh(sigma * tau));
    const double w2 = k * k + c * m * m;
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = -w2 * y[0];
    dy[3] = -w2 * y[1];
  };

  const double t0 = -half_span / sigma, t1 = half_span / sigma;
  const cplx chi0 = std::exp(-kI * w_in * t0) / std::sqrt(2.0 * w_in);
  const cplx dchi0 = -kI * w_in * chi0;
  State y = {chi0.real(), chi0.imag(), dchi0.real(), dchi0.imag()};

  auto stepper = ode::make_controlled(tolerance, tolerance, ode::runge_kutta_dopri5<State>());
  int steps = 0;
  try {
    steps = static_cast<int>(ode::integrate_adaptive(stepper, rhs, y, t0, t1, 0.01 / std::max(w_out, w_in)));
  } catch (const std::exception& e) {
    throw NumericalError(fmt::format("mode equation integration failed: {}", e.what()));
  }
  const cplx chi(y[0], y[1]), dchi(y[2], y[3]);
  if (!std::isfinite(std::abs(chi)) || !std::isfinite(std::abs(dchi)))
    throw NumericalError("mode equation integration produced non-finite values");
  const double r = std::sqrt(0.5 * w_out);
  ModeOracle out;
  out.alpha = r * std::exp(kI * w_out * t1) * (chi + kI * dchi / w_out);
  out.beta = r * std::exp(-kI * w_out * t1) * (chi - kI * dchi / w_out);
  out.steps = steps;
  const double residual = std::abs(std::norm(out.alpha) - std::norm(out.beta) - 1.0);
  if (residual > 1e-6) throw NumericalError(fmt::format("mode oracle lost the Wronskian: residual {:.3e}", residual));
  return out;
}

BogolyubovMap rw_bogoliubov(double k, double m, double eps, double sigma) {
  const SectorCoefficients c = rw_coefficients(k, m, eps, sigma);
  BogolyubovMap map{CMatrix::Identity(2, 2) * c.alpha, CMatrix::Zero(2, 2)};
  map.beta(0, 1) = -c.beta;
  map.beta(1, 0) = -c.beta;
  return map;
}

ChannelSpec rw_channel(double k, double m, double eps, double sigma) {
  if (k == 0.0) throw ValidationError("the expanding-universe sector needs k != 0 so that k and -k differ");
  const SectorCoefficients c = rw_coefficients(k, m, eps, sigma);
  const double ratio = c.beta / c.alpha;
  if (!(ratio < 1.0)) throw NumericalError("|beta| / |alpha| >= 1; the map cannot be canonical");
  const std::vector<double> labels = {k, -k};
  CoefficientTable d(2);
  // exp(i xi G^4_01) sends a_0 to cosh(xi) a_0 + sinh(xi) a+_1.
  d.set(4, 0, 1, -std::atanh(ratio));
  AssembledHamiltonian h = assemble_hamiltonian(d, d, labels);
  ChannelParams p;
  p.k = k;
  p.mass = m;
  p.epsilon = eps;
  p.sigma = sigma;
  return {ChannelKind::expanding_universe, std::move(h.generator), rw_bogoliubov(k, m, eps, sigma), h.symmetric, p};
}

BogolyubovMap two_field_map(const BogolyubovMap& per_field) {
  const Eigen::Index n = per_field.alpha.rows();
  BogolyubovMap out{CMatrix::Zero(2 * n, 2 * n), CMatrix::Zero(2 * n, 2 * n)};
  out.alpha.topLeftCorner(n, n) = per_field.alpha;
  out.alpha.bottomRightCorner(n, n) = per_field.alpha;
  out.beta.topLeftCorner(n, n) = per_field.beta;
  out.beta.bottomRightCorner(n, n) = per_field.beta;
  return out;
}

}  // namespace bogo
