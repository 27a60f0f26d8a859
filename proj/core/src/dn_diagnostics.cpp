#include "waves/dn_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "waves/error.hpp"

namespace waves::dn {

double dn_contraction_gap(const SurfaceField& eta1, const SurfaceField& eta2, const SurfaceField& g,
                          const FluidConfig& cfg, const DnBackend& backend, double s) {
  const auto a = dn_apply(eta1, g, cfg, backend);
  const auto b = dn_apply(eta2, g, cfg, backend);
  return spectral::sobolev_norm(a - b, {s - 1.0, false});
}

double coercivity_ratio(const DnOperator& op, const SurfaceField& g, HalfNormWeight weight) {
  const double half = spectral::dot_h_half_norm(g, weight);
  if (half == 0.0) raise(ErrorCode::kZeroInput, "coercivity ratio of a zero (or constant) field");
  if (!g.mean_zero()) raise(ErrorCode::kMeanNotZero, "coercivity ratio needs mean-zero data");
  return spectral::inner_product(op.apply(g), g) / (half * half);
}

double coercivity_ratio(const SurfaceField& eta, const SurfaceField& g, const FluidConfig& cfg,
                        const DnBackend& backend, HalfNormWeight weight) {
  if (spectral::dot_h_half_norm(g, weight) == 0.0) {
    raise(ErrorCode::kZeroInput, "coercivity ratio of a zero (or constant) field");
  }
  return coercivity_ratio(*make_dn_operator(eta, cfg, backend), g, weight);
}

double coercivity_infimum(const DnOperator& op, int max_mode, HalfNormWeight weight) {
  const PeriodicGrid& grid = op.surface().grid();
  const int top = grid.n() / 2 - 1;
  if (max_mode <= 0 || max_mode > top) max_mode = top;
  std::vector<SurfaceField> basis;
  const int k2_max = grid.dim() == 2 ? max_mode : 0;
  for (int k2 = 0; k2 <= k2_max; ++k2) {
    for (int k1 = -max_mode; k1 <= max_mode; ++k1) {
      // One representative per ±k pair.
      if (k2 == 0 && k1 <= 0) continue;
      basis.push_back(SurfaceField::sample(grid, [=](double x, double y) { return std::cos(k1 * x + k2 * y); }));
      basis.push_back(SurfaceField::sample(grid, [=](double x, double y) { return std::sin(k1 * x + k2 * y); }));
    }
  }
  const auto m = static_cast<Eigen::Index>(basis.size());
  std::vector<SurfaceField> images;
  images.reserve(basis.size());
  for (const auto& b : basis) images.push_back(op.apply(b));
  Eigen::MatrixXd a(m, m), w = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) a(i, j) = spectral::inner_product(images[j], basis[i]);
    const double h = spectral::dot_h_half_norm(basis[i], weight);
    w(i, i) = h * h;
  }
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, w, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) raise(ErrorCode::kNoConvergence, "generalized eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

double coercivity_bound_shape(const SurfaceField& eta, const FluidConfig& cfg) {
  double grad = 0.0;
  for (const auto& gi : spectral::gradient(eta)) grad = std::max(grad, gi.max_abs());
  if (cfg.is_finite()) {
    const auto lifted = eta + SurfaceField::constant(eta.grid(), cfg.nominal_depth());
    const double w1 = spectral::w_infinity_norm(lifted, 1);
    return cfg.separation_margin / (1.0 + grad * grad + w1 * w1);
  }
  return 1.0 / (1.0 + grad);
}

CommutatorResult commutator_residual(const DnOperator& op, const SurfaceField& f, MultiIndex alpha,
                                     double sigma) {
  if (sigma < 0.5) raise(ErrorCode::kInvalidArgument, "commutator diagnostic needs sigma >= 1/2");
  const auto outer = spectral::derivative(op.apply(f), alpha);
  const auto inner = op.apply(spectral::derivative(f, alpha));
  CommutatorResult result{outer - inner, 0.0};
  const double denom = spectral::sobolev_norm(f, {sigma + alpha.order(), false});
  if (denom == 0.0) raise(ErrorCode::kZeroInput, "commutator ratio of a zero field");
  result.ratio = spectral::sobolev_norm(result.commutator, {sigma, false}) / denom;
  return result;
}

CommutatorResult commutator_residual(const SurfaceField& eta, const SurfaceField& f, MultiIndex alpha,
                                     double sigma, const FluidConfig& cfg, const DnBackend& backend) {
  return commutator_residual(*make_dn_operator(eta, cfg, backend), f, alpha, sigma);
}

}  // namespace waves::dn
