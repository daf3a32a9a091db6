#include "bogo/evolve.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <vector>

#include "bogo/error.hpp"
#include "bogo/simd/kernels.hpp"

namespace bogo {

namespace {

std::span<cplx> as_span(CVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const cplx> as_cspan(const CVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// Lanczos basis and tridiagonal projection of H for one starting vector.
struct Krylov {
  std::vector<CVector> basis;
  Eigen::VectorXd diag;
  Eigen::VectorXd offdiag;  // offdiag[j] couples j and j+1
  double residual_beta = 0.0;  // beta_m; zero on happy breakdown
};

Krylov lanczos(const FockOperator& h, const CVector& start, int max_dim, int& matvecs) {
  Krylov k;
  const double beta0 = start.norm();
  k.basis.push_back(start / beta0);
  std::vector<double> alphas, betas;
  CVector w(start.size());
  for (int j = 0; j < max_dim; ++j) {
    h.apply(as_cspan(k.basis[static_cast<std::size_t>(j)]), as_span(w));
    ++matvecs;
    // Full reorthogonalization; the basis is small.
    for (int pass = 0; pass < 2; ++pass)
      for (const CVector& v : k.basis) {
        const cplx c = simd::dot(as_cspan(v), as_cspan(w));
        simd::axpy(-c, as_cspan(v), as_span(w));
        if (pass == 0 && &v == &k.basis.back()) alphas.push_back(c.real());
      }
    const double beta = std::sqrt(simd::norm_sq(as_cspan(w)));
    if (beta < 1e-13 * (std::abs(alphas.back()) + 1.0)) {
      k.residual_beta = 0.0;
      break;
    }
    if (j + 1 == max_dim) {
      k.residual_beta = beta;
      break;
    }
    betas.push_back(beta);
    k.basis.push_back(w / beta);
  }
  const auto m = static_cast<Eigen::Index>(alphas.size());
  k.basis.resize(static_cast<std::size_t>(m));
  k.diag = Eigen::Map<Eigen::VectorXd>(alphas.data(), m);
  k.offdiag = Eigen::Map<Eigen::VectorXd>(betas.data(), std::max<Eigen::Index>(m - 1, 0));
  return k;
}

}  // namespace

Evolution exp_evolve(const FockOperator& h, const FockVector& psi, const EvolveOptions& options) {
  if (!h.hermitian()) throw ValidationError("exp_evolve requires a Hermitian generator");
  if (h.dimension() != psi.modes().dimension())
    throw ValidationError("generator and state dimensions differ");

  Evolution out{psi, 0.0, 0.0, 0, 0};
  CVector v = psi.amplitudes();
  const double norm0 = v.norm();
  if (norm0 == 0.0 || h.matrix().nonZeros() == 0) return out;

  double remaining = options.time;
  double step = options.time;
  const double step_tol = options.tolerance / std::max(std::abs(options.time), 1e-300);

  while (remaining > 0.0) {
    if (out.substeps >= options.max_substeps)
      throw NumericalError(fmt::format("Krylov evolution did not converge in {} substeps", options.max_substeps));
    const Krylov k = lanczos(h, v, options.krylov_dim, out.matvecs);
    const auto m = k.diag.size();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    t.diagonal() = k.diag;
    if (m > 1) {
      t.diagonal(1) = k.offdiag;
      t.diagonal(-1) = k.offdiag;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    const Eigen::MatrixXd& q = eig.eigenvectors();
    const Eigen::VectorXd& lam = eig.eigenvalues();

    step = std::min(step * 2.0, remaining);
    CVector y(m);
    double err = 0.0;
    for (;;) {
      // y = exp(i step T) e1
      CVector phase(m);
      for (Eigen::Index i = 0; i < m; ++i) phase[i] = std::exp(kI * (step * lam[i])) * q(0, i);
      y = q.cast<cplx>() * phase;
      err = k.residual_beta * std::abs(y[m - 1]);
      // y is only accurate to rounding in the eigenbasis of T, so the estimate
      // cannot drop below ~eps * beta_m however small the step.
      const double floor = 16.0 * std::numeric_limits<double>::epsilon() * k.residual_beta;
      if (err <= std::max(step_tol * step, floor) || k.residual_beta == 0.0) break;
      step *= 0.5;
      if (step < 1e-14 * std::abs(options.time))
        throw NumericalError("Krylov substep underflow; generator norm too large for the subspace size");
    }

    const double vnorm = v.norm();
    CVector next = CVector::Zero(v.size());
    for (Eigen::Index j = 0; j < m; ++j)
      simd::axpy(y[j] * vnorm, as_cspan(k.basis[static_cast<std::size_t>(j)]), as_span(next));
    v = std::move(next);
    out.error_estimate += err * vnorm;
    remaining -= step;
    if (remaining < 1e-15 * std::abs(options.time)) remaining = 0.0;
    ++out.substeps;
  }

  FockVector evolved(psi.modes(), std::move(v));
  if (options.project_boundary) {
    const double total = simd::norm_sq(evolved.span());
    double edge = 0.0;
    for (std::size_t i : boundary_indices(psi.modes())) {
      auto& a = evolved.amplitudes()[static_cast<Eigen::Index>(i)];
      edge += std::norm(a);
      a = 0.0;
    }
    out.leakage = edge / total;
  }
  out.state = std::move(evolved);
  return out;
}

}  // namespace bogo
