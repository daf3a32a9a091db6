#include "bogo/grid.hpp"

#include <array>
#include <cmath>
#include <fmt/format.h>

#include "bogo/error.hpp"
#include "bogo/simd/kernels.hpp"

namespace bogo {

std::size_t GridSpec::axis_points() const {
  return static_cast<std::size_t>(std::llround(2.0 * extent / spacing));
}

std::size_t GridSpec::total_points() const {
  std::size_t total = 1;
  for (std::size_t a = 0; a < axis_count(); ++a) total *= axis_points();
  return total;
}

void GridSpec::validate() const {
  if (modes == 0) throw ValidationError("grid needs at least one mode");
  if (!(spacing > 0.0) || !(extent > 0.0) || !std::isfinite(spacing) || !std::isfinite(extent))
    throw ValidationError("grid spacing and extent must be positive");
  if (axis_points() < 5) throw ValidationError("grid needs at least 5 points per axis");
  const double points = std::pow(static_cast<double>(axis_points()), static_cast<double>(axis_count()));
  if (points > static_cast<double>(point_budget))
    throw ValidationError(fmt::format("grid of {:.3g} points exceeds the budget of {}", points, point_budget));
}

std::size_t GridFunction::stride(std::size_t axis) const {
  std::size_t s = 1;
  for (std::size_t a = axis + 1; a < spec.axis_count(); ++a) s *= spec.axis_points();
  return s;
}

double GridFunction::norm() const {
  const double cell = std::pow(spec.spacing, static_cast<double>(spec.axis_count()));
  return std::sqrt(simd::norm_sq(values) * cell);
}

RadialProfile gaussian_profile(double width) {
  return [width](double r2) { return std::exp(-r2 / (2.0 * width * width)); };
}

namespace {

// Per-axis node indices of a flat index.
void unflatten(std::size_t flat, std::size_t n, std::vector<std::size_t>& idx) {
  for (std::size_t a = idx.size(); a-- > 0;) {
    idx[a] = flat % n;
    flat /= n;
  }
}

bool in_interior(const std::vector<std::size_t>& idx, std::size_t n) {
  for (std::size_t i : idx)
    if (i == 0 || i + 1 >= n) return false;
  return true;
}

}  // namespace

GridFunction eigenfunction_grid(int lambda, double gaussian_width, const GridSpec& spec) {
  return eigenfunction_grid(lambda, gaussian_width, spec, gaussian_profile(gaussian_width));
}

GridFunction eigenfunction_grid(int lambda, double gaussian_width, const GridSpec& spec, const RadialProfile& profile) {
  spec.validate();
  if (!(gaussian_width > 0.0)) throw ValidationError("gaussian width must be positive");
  if (spec.spacing > gaussian_width / 4.0)
    throw ValidationError(fmt::format("grid too coarse: h = {} exceeds width/4 = {}", spec.spacing, gaussian_width / 4.0));
  if (spec.extent < 5.0 * gaussian_width * (1.0 - 1e-12))
    throw ValidationError(fmt::format("grid extent {} covers fewer than 5 widths of {}", spec.extent, gaussian_width));

  const std::size_t n = spec.axis_points();
  const std::size_t m = spec.modes;
  GridFunction f{spec, std::vector<cplx>(spec.total_points())};
  std::vector<std::size_t> idx(spec.axis_count());
  for (std::size_t flat = 0; flat < f.values.size(); ++flat) {
    unflatten(flat, n, idx);
    cplx v = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double x = spec.coordinate(idx[k]);
      const double xt = spec.coordinate(idx[m + k]);
      const double phi = std::atan2(xt, x);
      v *= std::polar(profile(x * x + xt * xt), lambda * phi);
    }
    f.values[flat] = v;
  }
  return f;
}

GridFunction apply_L_grid(const GridFunction& f, const std::vector<double>& weights) {
  const GridSpec& spec = f.spec;
  validate_weights(weights, spec.modes);
  const std::size_t n = spec.axis_points();
  const std::size_t d = spec.axis_count();
  const std::size_t m = spec.modes;
  GridFunction out{spec, std::vector<cplx>(f.values.size(), 0.0)};

  std::vector<double> axis(n);
  for (std::size_t i = 0; i < n; ++i) axis[i] = spec.coordinate(i);
  std::vector<double> ca(n - 2), cb(n - 2);

  // Walk the contiguous lines along the last axis, interior lines only.
  const std::size_t lines = f.values.size() / n;
  std::vector<std::size_t> idx(d);
  for (std::size_t line = 0; line < lines; ++line) {
    const std::size_t base = line * n;
    unflatten(base, n, idx);
    bool interior = true;
    for (std::size_t a = 0; a + 1 < d; ++a) interior = interior && idx[a] > 0 && idx[a] + 1 < n;
    if (!interior) continue;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t ax = k, axt = m + k;
      for (std::size_t j = 1; j + 1 < n; ++j) {
        ca[j - 1] = ax == d - 1 ? axis[j] : axis[idx[ax]];
        cb[j - 1] = axt == d - 1 ? axis[j] : axis[idx[axt]];
      }
      const cplx s = -kI * weights[k] / (2.0 * spec.spacing);
      simd::stencil_pair(s, ca, cb, f.values.data() + base + 1, static_cast<std::ptrdiff_t>(f.stride(axt)),
                         static_cast<std::ptrdiff_t>(f.stride(ax)), {out.values.data() + base + 1, n - 2});
    }
  }
  return out;
}

double eigen_residual(const GridFunction& f, int lambda, const std::vector<double>& weights, double exclusion_radius) {
  const GridFunction lf = apply_L_grid(f, weights);
  const GridSpec& spec = f.spec;
  const std::size_t n = spec.axis_points();
  const std::size_t m = spec.modes;
  std::vector<std::size_t> idx(spec.axis_count());
  double num = 0.0, den = 0.0;
  const double r0sq = exclusion_radius * exclusion_radius;
  for (std::size_t flat = 0; flat < f.values.size(); ++flat) {
    unflatten(flat, n, idx);
    if (!in_interior(idx, n)) continue;
    bool keep = true;
    for (std::size_t k = 0; k < m && keep; ++k) {
      const double x = spec.coordinate(idx[k]);
      const double xt = spec.coordinate(idx[m + k]);
      keep = x * x + xt * xt > r0sq;
    }
    if (!keep) continue;
    num += std::norm(lf.values[flat] - static_cast<double>(lambda) * f.values[flat]);
    den += std::norm(f.values[flat]);
  }
  if (den == 0.0) throw ValidationError("exclusion region removes the whole grid");
  return std::sqrt(num / den);
}

cplx sample(const GridFunction& f, std::span<const double> point) {
  const GridSpec& spec = f.spec;
  const std::size_t d = spec.axis_count();
  if (point.size() != d) throw ValidationError("sample point has the wrong dimension");
  const std::size_t n = spec.axis_points();
  std::vector<std::size_t> lo(d);
  std::vector<double> frac(d);
  for (std::size_t a = 0; a < d; ++a) {
    const double u = (point[a] + spec.extent) / spec.spacing - 0.5;
    if (!(u >= 0.0) || u > static_cast<double>(n - 1)) throw ValidationError("sample point outside the grid");
    lo[a] = std::min(static_cast<std::size_t>(u), n - 2);
    frac[a] = u - static_cast<double>(lo[a]);
  }
  cplx acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t a = 0; a < d; ++a) {
      const bool up = (corner >> a) & 1U;
      w *= up ? frac[a] : 1.0 - frac[a];
      flat += (lo[a] + (up ? 1 : 0)) * f.stride(a);
    }
    acc += w * f.values[flat];
  }
  return acc;
}

GridMoments grid_pair_moments(const GridFunction& f) {
  const GridSpec& spec = f.spec;
  if (spec.modes != 1) throw ValidationError("grid moments are defined for one-mode grids");
  const std::size_t n = spec.axis_points();
  const double h = spec.spacing;
  const double r = 1.0 / std::sqrt(2.0);

  // a_s F on interior nodes, zero on the band.
  auto lower = [&](const std::vector<cplx>& g, std::size_t axis) {
    std::vector<cplx> out(g.size(), 0.0);
    const std::size_t st = axis == 0 ? n : 1;
    for (std::size_t i = 1; i + 1 < n; ++i)
      for (std::size_t j = 1; j + 1 < n; ++j) {
        const std::size_t p = i * n + j;
        const double x = spec.coordinate(axis == 0 ? i : j);
        out[p] = r * (x * g[p] + (g[p + st] - g[p - st]) / (2.0 * h));
      }
    return out;
  };
  auto braket = [](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    return simd::dot(a, b);
  };

  const double norm2 = simd::norm_sq(f.values);
  if (norm2 == 0.0) throw ValidationError("moments of a zero grid function");
  const std::array<std::vector<cplx>, 2> once = {lower(f.values, 0), lower(f.values, 1)};

  GridMoments m{{CMatrix(2, 2), CMatrix(2, 2)}, CVector(2)};
  for (std::size_t s = 0; s < 2; ++s) {
    m.mean[static_cast<Eigen::Index>(s)] = braket(f.values, once[s]) / norm2;
    for (std::size_t t = 0; t < 2; ++t) {
      m.pair.normal(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = braket(once[s], once[t]) / norm2;
      m.pair.anomalous(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) =
          braket(f.values, lower(once[t], s)) / norm2;
    }
  }
  return m;
}

SlotMoments replicate_moments(const GridMoments& single, std::size_t mode_count) {
  const auto mm = static_cast<Eigen::Index>(mode_count);
  const Eigen::Index n = 2 * mm;
  SlotMoments out{CMatrix(n, n), CMatrix(n, n)};
  auto local = [mm](Eigen::Index s) { return s < mm ? Eigen::Index{0} : Eigen::Index{1}; };
  auto mode = [mm](Eigen::Index s) { return s < mm ? s : s - mm; };
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index t = 0; t < n; ++t) {
      if (mode(s) == mode(t)) {
        out.normal(s, t) = single.pair.normal(local(s), local(t));
        out.anomalous(s, t) = single.pair.anomalous(local(s), local(t));
      } else {
        out.normal(s, t) = std::conj(single.mean[local(s)]) * single.mean[local(t)];
        out.anomalous(s, t) = single.mean[local(s)] * single.mean[local(t)];
      }
    }
  return out;
}

}  // namespace bogo
