#include "bogo/invariant.hpp"

#include <array>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

#include "bogo/error.hpp"

namespace bogo {

std::vector<double> uniform_weights(std::size_t count) {
  if (count == 0) throw ValidationError("weights need at least one mode");
  return std::vector<double>(count, 1.0 / static_cast<double>(count));
}

void validate_weights(const std::vector<double>& weights, std::size_t count) {
  if (weights.size() != count)
    throw ValidationError(fmt::format("expected {} weights, got {}", count, weights.size()));
  for (double w : weights)
    if (!std::isfinite(w) || w < 0.0) throw ValidationError(fmt::format("weight {} is not a nonnegative number", w));
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError(fmt::format("weights sum to {:.17g}, not 1", sum));
}

CoefficientMatrix invariant_coeff(const std::vector<double>& labels, const std::vector<double>& weights) {
  validate_weights(weights, labels.size());
  const auto m = static_cast<Eigen::Index>(labels.size());
  const Eigen::Index n = 2 * m;
  CMatrix a = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < m; ++k) {
    a(k, m + k) = -kI * weights[static_cast<std::size_t>(k)];
    a(m + k, k) = kI * weights[static_cast<std::size_t>(k)];
  }
  return CoefficientMatrix::from_blocks(labels, a, CMatrix::Zero(n, n), CMatrix::Zero(n, n));
}

InvariantObservable build_invariant(const ModeSet& modes, std::vector<double> weights) {
  CoefficientMatrix coeff = invariant_coeff(modes.labels(), weights);
  FockOperator fock = to_fock(coeff, modes);
  return {modes, std::move(weights), std::move(fock), std::move(coeff)};
}

double commutation_residual(const CoefficientMatrix& l, const CoefficientMatrix& h) {
  const double scale = l.norm() * h.norm();
  if (scale == 0.0) return 0.0;
  return quad_bracket(l, h).norm() / scale;
}

FockOperator quadrature_form(const ModeSet& modes, const std::vector<double>& weights) {
  validate_weights(weights, modes.mode_count());
  const double r = 1.0 / std::sqrt(2.0);
  SparseOp total(static_cast<Eigen::Index>(modes.dimension()), static_cast<Eigen::Index>(modes.dimension()));
  for (std::size_t k = 0; k < modes.mode_count(); ++k) {
    const FockOperator a = annihilator(modes.slot(Field::phi, k), modes);
    const FockOperator at = annihilator(modes.slot(Field::phi_tilde, k), modes);
    const SparseOp x = r * (a.matrix() + SparseOp(a.matrix().adjoint()));
    const SparseOp p = (r / kI) * (a.matrix() - SparseOp(a.matrix().adjoint()));
    const SparseOp xt = r * (at.matrix() + SparseOp(at.matrix().adjoint()));
    const SparseOp pt = (r / kI) * (at.matrix() - SparseOp(at.matrix().adjoint()));
    total += cplx(weights[k]) * SparseOp(x * pt - p * xt);
  }
  return FockOperator(std::move(total), true);
}

int eigen_capacity(const ModeSet& modes, const EigenProfile& profile) {
  return modes.cutoff() - 2 * profile.extra_pairs;
}

namespace {

double binomial(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }
double log_factorial(int n) { return std::lgamma(n + 1.0); }

cplx ipow(int e) {
  static constexpr std::array<cplx, 4> cycle = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  return cycle[static_cast<std::size_t>(((e % 4) + 4) % 4)];
}

// |n+ = p, n- = q> expanded on |n, n~> of one mode pair; indexed n * (c+1) + n~.
void add_schwinger_pair(int p, int q, cplx weight, int cutoff, std::vector<cplx>& local) {
  const double norm = std::exp(-0.5 * (log_factorial(p) + log_factorial(q))) * std::pow(2.0, -0.5 * (p + q));
  for (int m1 = 0; m1 <= p; ++m1)
    for (int m2 = 0; m2 <= q; ++m2) {
      const int n = m1 + m2;
      const int nt = p + q - n;
      const double mag = binomial(p, m1) * binomial(q, m2) * norm *
                         std::exp(0.5 * (log_factorial(n) + log_factorial(nt)));
      // (a+ + i a~+)^p (a+ - i a~+)^q
      const cplx phase = ipow(p - m1) * ipow(-(q - m2));
      local[static_cast<std::size_t>(n * (cutoff + 1) + nt)] += weight * mag * phase;
    }
}

}  // namespace

FockVector schwinger_eigenstate(int lambda, const ModeSet& modes, const EigenProfile& profile) {
  if (profile.extra_pairs < 0) throw ValidationError("extra_pairs must be >= 0");
  if (!(std::abs(profile.decay) < 1.0 || profile.extra_pairs == 0)) throw ValidationError("profile decay must lie in (-1, 1)");
  const int capacity = eigen_capacity(modes, profile);
  if (std::abs(lambda) > capacity)
    throw ValidationError(fmt::format("eigenvalue {} exceeds the capacity {} at cutoff {}", lambda, capacity, modes.cutoff()));

  const int c = modes.cutoff();
  const std::size_t loc = static_cast<std::size_t>(c + 1) * static_cast<std::size_t>(c + 1);
  std::vector<cplx> local(loc, 0.0);
  const int n0 = lambda >= 0 ? lambda : 0;
  const int m0 = lambda >= 0 ? 0 : -lambda;
  double amp = 1.0, total = 0.0;
  for (int j = 0; j <= profile.extra_pairs; ++j, amp *= profile.decay) {
    add_schwinger_pair(n0 + j, m0 + j, amp, c, local);
    total += amp * amp;
  }
  for (cplx& v : local) v /= std::sqrt(total);

  // Product over modes; mode k occupies slots k and M + k.
  std::vector<std::pair<std::size_t, cplx>> support;
  for (std::size_t i = 0; i < loc; ++i)
    if (local[i] != cplx(0.0)) support.emplace_back(i, local[i]);

  const std::size_t m = modes.mode_count();
  CVector out = CVector::Zero(static_cast<Eigen::Index>(modes.dimension()));
  std::vector<std::size_t> pick(m, 0);
  for (;;) {
    std::size_t index = 0;
    cplx value = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      const auto [cell, a] = support[pick[k]];
      index += (cell / static_cast<std::size_t>(c + 1)) * modes.stride(k) +
               (cell % static_cast<std::size_t>(c + 1)) * modes.stride(m + k);
      value *= a;
    }
    out[static_cast<Eigen::Index>(index)] = value;
    std::size_t k = 0;
    while (k < m && ++pick[k] == support.size()) pick[k++] = 0;
    if (k == m) break;
  }
  return FockVector(modes, std::move(out));
}

SlotMoments moments_of(const FockVector& state) {
  const ModeSet& modes = state.modes();
  const auto n = static_cast<Eigen::Index>(modes.slot_count());
  const double norm2 = state.norm() * state.norm();
  if (norm2 == 0.0) throw ValidationError("moments of a zero vector");
  std::vector<FockOperator> lowering;
  std::vector<CVector> lowered;
  for (Eigen::Index s = 0; s < n; ++s) {
    lowering.push_back(annihilator(static_cast<std::size_t>(s), modes));
    lowered.push_back(lowering.back().apply(state.amplitudes()));
  }
  SlotMoments m{CMatrix(n, n), CMatrix(n, n)};
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index t = 0; t < n; ++t) {
      m.normal(s, t) = lowered[static_cast<std::size_t>(s)].dot(lowered[static_cast<std::size_t>(t)]) / norm2;
      const CVector st = lowering[static_cast<std::size_t>(s)].apply(lowered[static_cast<std::size_t>(t)]);
      m.anomalous(s, t) = state.amplitudes().dot(st) / norm2;
    }
  return m;
}

cplx expectation_from_moments(const CoefficientMatrix& q, const SlotMoments& m) {
  const auto n = static_cast<Eigen::Index>(q.slot_count());
  if (m.normal.rows() != n || m.anomalous.rows() != n) throw ValidationError("moment matrices do not match the operator");
  // <a+_s a+_t> = conj(<a_t a_s>)
  return q.block_a().cwiseProduct(m.normal).sum() +
         0.5 * q.block_b().cwiseProduct(m.anomalous.transpose().conjugate()).sum() +
         0.5 * q.block_c().cwiseProduct(m.anomalous).sum() + q.scalar_part();
}

}  // namespace bogo
