#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bogo/invariant.hpp"
#include "bogo/types.hpp"

namespace bogo {

// Uniform cell-centred grid over the 2M quadrature variables
// (x_1..x_M, x~_1..x~_M): per axis x_i = -extent + (i + 1/2) h, so the
// origin of each (x_k, x~_k) plane is never a node.
struct GridSpec {
  std::size_t modes = 1;
  double spacing = 0.05;
  double extent = 30.0;
  std::size_t point_budget = 40'000'000;

  std::size_t axis_points() const;
  std::size_t axis_count() const { return 2 * modes; }
  std::size_t total_points() const;
  double coordinate(std::size_t i) const { return -extent + (static_cast<double>(i) + 0.5) * spacing; }
  void validate() const;
};

// Row-major samples, axis 0 slowest.
struct GridFunction {
  GridSpec spec;
  std::vector<cplx> values;

  std::size_t stride(std::size_t axis) const;
  // Discrete L2 norm including the cell volume h^(2M).
  double norm() const;
};

// Radial profile g(r^2) of each mode factor.
using RadialProfile = std::function<double(double r2)>;
RadialProfile gaussian_profile(double width);

// F = prod_k exp(i lambda phi_k) g(x_k^2 + x~_k^2) with phi_k the polar angle
// atan2(x~_k, x_k) of the (x_k, x~_k) plane, the convention in which
// -i(x d/dx~ - x~ d/dx) has eigenvalue +lambda.
// Requires h <= width / 4 and extent >= 5 widths.
GridFunction eigenfunction_grid(int lambda, double gaussian_width, const GridSpec& spec);
GridFunction eigenfunction_grid(int lambda, double gaussian_width, const GridSpec& spec, const RadialProfile& profile);

// Central-difference sum_k rho_k (-i)(x_k d/dx~_k - x~_k d/dx_k) F. Nodes in
// the one-cell boundary band are set to zero.
GridFunction apply_L_grid(const GridFunction& f, const std::vector<double>& weights);

// ||(L - lambda) F|| / ||F|| over interior nodes whose every (x_k, x~_k)
// radius exceeds `exclusion_radius` (the phase is singular at the origin).
double eigen_residual(const GridFunction& f, int lambda, const std::vector<double>& weights, double exclusion_radius);

// Multilinear interpolation; the point must lie inside the node hull.
cplx sample(const GridFunction& f, std::span<const double> point);

// Single-mode moments of a one-mode grid state: slot 0 is the phi mode and
// slot 1 the phi-tilde mode, with a = (x + d/dx)/sqrt(2).
struct GridMoments {
  SlotMoments pair;
  CVector mean;  // <a>, <a~>
};
GridMoments grid_pair_moments(const GridFunction& f);

// Moments of the product state that carries the same one-mode state on
// each of `mode_count` modes (mode k on slots k and M + k).
SlotMoments replicate_moments(const GridMoments& single, std::size_t mode_count);

}  // namespace bogo
