#include "bogo/rindler.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <numeric>

#include "bogo/error.hpp"
#include "bogo/special.hpp"

namespace bogo {

cplx rindler_alpha(double k, double l, double a) {
  if (!std::isfinite(k) || !std::isfinite(l) || k == 0.0 || l == 0.0)
    throw ValidationError("rindler_alpha needs finite, nonzero k and l");
  if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("acceleration must be positive");
  if ((k > 0.0) != (l > 0.0)) return 0.0;
  const double sign_l = l > 0.0 ? 1.0 : -1.0;
  // Log(a / (i l)) on the principal branch.
  const cplx log_base(std::log(a / std::abs(l)), -0.5 * std::numbers::pi * sign_l);
  const cplx z = kI * (k / a);
  const double log_prefactor = std::log(2.0 * std::abs(k) / (4.0 * std::numbers::pi * a * std::sqrt(std::abs(k * l))));
  cplx lg;
  try {
    lg = log_gamma(z);
  } catch (const NumericalError& e) {
    throw NumericalError(fmt::format("Gamma evaluation failed at k/a = {}: {}", k / a, e.what()));
  }
  const cplx value = std::exp(log_prefactor + z * log_base + lg);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw NumericalError(fmt::format("rindler_alpha overflowed at k = {}, l = {}", k, l));
  return value;
}

void Window::validate() const {
  if (!(min > 0.0) || !(max > min) || !std::isfinite(max))
    throw ValidationError(fmt::format("window ({}, {}) must satisfy 0 < min < max", min, max));
  if (count < 2) throw ValidationError("window needs at least 2 nodes");
}

std::vector<double> Window::nodes() const {
  validate();
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = spacing == Spacing::linear ? min + t * (max - min) : min * std::pow(max / min, t);
  }
  out.back() = max;
  return out;
}

std::vector<double> Window::weights() const {
  const std::vector<double> x = nodes();
  std::vector<double> w(count);
  const double step = spacing == Spacing::linear ? (max - min) / static_cast<double>(count - 1)
                                                 : std::log(max / min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double end = i == 0 || i + 1 == count ? 0.5 : 1.0;
    w[i] = end * step * (spacing == Spacing::linear ? 1.0 : x[i]);
  }
  return w;
}

void RindlerKernel::validate() const {
  if (!(acceleration > 0.0) || !std::isfinite(acceleration)) throw ValidationError("acceleration must be positive");
  k_window.validate();
  l_window.validate();
}

namespace {

struct Quadrature {
  std::vector<double> k;
  std::vector<double> w;
};

// Both signs of the k window.
Quadrature mirrored(const Window& window) {
  const std::vector<double> nodes = window.nodes();
  const std::vector<double> weights = window.weights();
  Quadrature q;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    q.k.push_back(nodes[i]);
    q.w.push_back(weights[i]);
    q.k.push_back(-nodes[i]);
    q.w.push_back(weights[i]);
  }
  return q;
}

void integrate_constraints(const Quadrature& q, double a, const std::vector<double>& samples, CMatrix& first,
                           CMatrix& second) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  const auto nk = static_cast<Eigen::Index>(q.k.size());
  CMatrix alpha(nk, n);
  for (Eigen::Index i = 0; i < nk; ++i)
    for (Eigen::Index j = 0; j < n; ++j) alpha(i, j) = rindler_alpha(q.k[static_cast<std::size_t>(i)], samples[static_cast<std::size_t>(j)], a);
  first = CMatrix::Zero(n, n);
  second = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < nk; ++i) {
    const double damp = std::exp(-std::numbers::pi * std::abs(q.k[static_cast<std::size_t>(i)]) / a);
    const double w = q.w[static_cast<std::size_t>(i)];
    for (Eigen::Index l = 0; l < n; ++l)
      for (Eigen::Index p = 0; p < n; ++p) {
        const cplx direct = std::conj(alpha(i, l)) * alpha(i, p);
        const cplx crossed = alpha(i, l) * std::conj(alpha(i, p));
        first(l, p) += w * (direct - crossed * damp * damp);
        second(l, p) += w * damp * (direct - crossed);
      }
  }
}

}  // namespace

ConstraintReport rindler_constraints(const RindlerKernel& kernel, const std::vector<double>& samples,
                                     double refinement_tolerance) {
  kernel.validate();
  if (samples.empty()) throw ValidationError("constraint check needs at least one sample wavevector");
  for (double s : samples)
    if (s == 0.0 || !std::isfinite(s)) throw ValidationError("sample wavevectors must be finite and nonzero");

  ConstraintReport r;
  r.samples = samples;
  integrate_constraints(mirrored(kernel.k_window), kernel.acceleration, samples, r.first, r.second);
  const auto n = static_cast<Eigen::Index>(samples.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = r.first(i, i).real();
    if (!(d > 0.0)) throw NumericalError(fmt::format("non-positive diagonal {} at l = {}", d, samples[static_cast<std::size_t>(i)]));
    r.diagonal.push_back(d);
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double scale = std::sqrt(r.diagonal[static_cast<std::size_t>(i)] * r.diagonal[static_cast<std::size_t>(j)]);
      if (i != j) r.off_diagonal_max = std::max(r.off_diagonal_max, std::abs(r.first(i, j)) / scale);
      r.second_max = std::max(r.second_max, std::abs(r.second(i, j)) / scale);
    }

  CMatrix first_fine, second_fine;
  integrate_constraints(mirrored(kernel.k_window.refined()), kernel.acceleration, samples, first_fine, second_fine);
  // The diagonal integrand is flat in k, so only the oscillating entries can
  // reveal an under-resolved grid.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double scale = std::sqrt(r.diagonal[static_cast<std::size_t>(i)] * r.diagonal[static_cast<std::size_t>(j)]);
      r.refinement_change = std::max({r.refinement_change, std::abs(first_fine(i, j) - r.first(i, j)) / scale,
                                      std::abs(second_fine(i, j) - r.second(i, j)) / scale});
    }
  if (r.refinement_change > refinement_tolerance)
    throw NumericalError(fmt::format("k quadrature under-resolved: constraints moved by {:.3e} on refinement",
                                     r.refinement_change));
  return r;
}

MinkowskiModes minkowski_modes(const RindlerKernel& kernel) {
  kernel.validate();
  const std::vector<double> l = kernel.l_window.nodes();
  const std::vector<double> w = kernel.l_window.weights();
  MinkowskiModes m;
  m.labels = l;
  for (double v : l) m.labels.push_back(-v);
  m.weights = w;
  m.weights.insert(m.weights.end(), w.begin(), w.end());
  return m;
}

namespace {

// Coefficients of the adjoint linear form: (sum u_s xi_s)^+ = sum conj(u_s) xi_{s +- N}.
CVector adjoint_form(const CVector& u) {
  const Eigen::Index n = u.size() / 2;
  CVector out(u.size());
  out << u.tail(n).conjugate(), u.head(n).conjugate();
  return out;
}

WedgeOperator build_wedge(int wedge, const MinkowskiModes& mink, const std::vector<double>& p_nodes,
                          const std::vector<double>& p_weights, const std::vector<double>& rho, double a) {
  const std::size_t half = mink.labels.size() / 2;  // modes per sign
  const std::size_t m = mink.labels.size();
  const auto n = static_cast<Eigen::Index>(2 * m);  // slots
  const double sign = wedge == 1 ? 1.0 : -1.0;
  CoefficientMatrix form(mink.labels);
  double window_weight = 0.0;

  for (std::size_t ip = 0; ip < p_nodes.size(); ++ip) {
    const double p = sign * p_nodes[ip];
    const double q = std::exp(-std::numbers::pi * std::abs(p) / a);
    CVector u = CVector::Zero(2 * n), ut = CVector::Zero(2 * n);
    double mass = 0.0;
    for (std::size_t j = 0; j < half; ++j) {
      // Same-sign Minkowski mode and its mirror.
      const std::size_t same = wedge == 1 ? j : half + j;
      const std::size_t mirror = wedge == 1 ? half + j : j;
      const cplx alpha = rindler_alpha(p, mink.labels[same], a);
      const double sw = std::sqrt(mink.weights[same]);
      const auto phi_same = static_cast<Eigen::Index>(same), phi_mirror = static_cast<Eigen::Index>(mirror);
      const auto tl_same = static_cast<Eigen::Index>(m + same), tl_mirror = static_cast<Eigen::Index>(m + mirror);
      u[phi_same] += sw * std::conj(alpha);
      u[n + phi_mirror] -= sw * q * alpha;
      ut[tl_same] += sw * std::conj(alpha);
      ut[n + tl_mirror] -= sw * q * alpha;
      mass += mink.weights[same] * std::norm(alpha);
    }
    const double c = p_weights[ip] * rho[ip];
    window_weight += c * (1.0 - q * q) * mass;
    const CoefficientMatrix part = product_of_linear_forms(mink.labels, adjoint_form(u), ut) -
                                   product_of_linear_forms(mink.labels, u, adjoint_form(ut));
    form += cplx(0.0, -c) * part;
  }
  return {wedge, std::move(form), window_weight};
}

}  // namespace

RegionalSplit regional_split(const CoefficientMatrix& invariant, const RindlerKernel& kernel) {
  kernel.validate();
  MinkowskiModes mink = minkowski_modes(kernel);
  if (invariant.labels() != mink.labels)
    throw ValidationError("invariant observable is not built on the kernel's Minkowski window");
  if (!invariant.is_hermitian()) throw ValidationError("invariant observable must be Hermitian");

  const std::vector<double> p_nodes = kernel.k_window.nodes();
  const std::vector<double> p_weights = kernel.k_window.weights();
  const double total = std::accumulate(p_weights.begin(), p_weights.end(), 0.0);
  std::vector<double> rho(p_nodes.size(), 1.0 / total);

  WedgeOperator one = build_wedge(1, mink, p_nodes, p_weights, rho, kernel.acceleration);
  WedgeOperator two = build_wedge(2, mink, p_nodes, p_weights, rho, kernel.acceleration);
  return {std::move(one), std::move(two), std::move(mink), std::move(rho)};
}

}  // namespace bogo
