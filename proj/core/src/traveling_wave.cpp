#include "waves/traveling_wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "waves/spectral.hpp"

namespace waves::tw {
namespace {

constexpr int kGrowthWindow = 3;

const dn::DnBackend& residual_backend(const dn::DnBackend& solve_backend) {
  static const dn::DnBackend fallback = dn::MappedElliptic{};
  return std::holds_alternative<dn::MappedElliptic>(solve_backend) ? solve_backend : fallback;
}

double hs_norm(const SurfaceField& f, double s) { return spectral::sobolev_norm(f, {s, false}); }

}  // namespace

double separation_mu(const SurfaceField& phi, const dn::FluidConfig& cfg) {
  if (!cfg.is_finite()) return std::numeric_limits<double>::infinity();
  return std::get<dn::FiniteDepth>(cfg.depth).b - phi.max_value();
}

TravelingWaveProblem TravelingWaveProblem::make(SurfaceField phi, double gamma, dn::FluidConfig cfg) {
  TravelingWaveProblem prob{std::move(phi), gamma, std::move(cfg)};
  prob.delta = 0.5 * std::min(1.0, separation_mu(prob.phi, prob.cfg));
  return prob;
}

void validate(const TravelingWaveProblem& prob) {
  if (prob.phi.grid().dim() != prob.cfg.dim) raise(ErrorCode::kInvalidArgument, "phi grid dimension differs from cfg.dim");
  if (!prob.phi.mean_zero()) raise(ErrorCode::kInvalidArgument, "phi must be mean-zero");
  const double mu = separation_mu(prob.phi, prob.cfg);
  if (!(mu > 0.0)) raise(ErrorCode::kInvalidArgument, "inf(b - phi) must be positive");
  if (!(prob.delta > 0.0 && prob.delta < 1.0 && prob.delta < mu))
    raise(ErrorCode::kInvalidArgument, "delta must lie in (0, min(1, mu(phi)))");
  if (!(prob.tol > 0.0)) raise(ErrorCode::kInvalidArgument, "tol must be positive");
  if (prob.max_iter < 1) raise(ErrorCode::kInvalidArgument, "max_iter must be positive");
  if (!std::isfinite(prob.gamma)) raise(ErrorCode::kInvalidArgument, "gamma must be finite");
}

FixedPointMap::FixedPointMap(SurfaceField phi, dn::FluidConfig cfg, dn::DnBackend backend, bool freeze_base)
    : phi_(std::move(phi)), cfg_(std::move(cfg)), backend_(std::move(backend)), mu_(separation_mu(phi_, cfg_)) {
  dn::validate(backend_);
  auto op = dn::make_dn_operator(-phi_, cfg_, backend_);
  base_ = freeze_base ? dn::freeze(*op) : std::move(op);
}

SurfaceField FixedPointMap::operator()(const SurfaceField& zeta, double gamma) const {
  if (!(zeta.max_abs() < mu_)) raise(ErrorCode::kBallExit, "zeta outside the admissible ball");
  const SurfaceField zeta0 = zeta.without_mean();
  const SurfaceField eta = zeta0 - phi_;
  SurfaceField rhs(zeta0.grid());
  if (gamma != 0.0) rhs = gamma * spectral::derivative(eta, {1, 0});
  if (zeta0.max_abs() > 0.0) {
    const SurfaceField g_eta = dn::dn_apply(eta, zeta0, cfg_, backend_);
    rhs = rhs - (g_eta - base_->apply(zeta0));
  }
  rhs = rhs.without_mean();
  if (rhs.max_abs() == 0.0) return rhs;
  const SurfaceField* guess = last_inverse_ ? &*last_inverse_ : nullptr;
  SurfaceField out = dn::dn_inverse(*base_, rhs, 1e-13, guess, nullptr, 400);
  last_inverse_ = out;
  return out;
}

SurfaceField apply_T(const SurfaceField& zeta, const TravelingWaveProblem& prob, const dn::DnBackend& backend) {
  validate(prob);
  const FixedPointMap map(prob.phi, prob.cfg, backend, false);
  return map(zeta, prob.gamma);
}

double fit_contraction_factor(const std::vector<double>& trace, double floor) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i] > floor) {
      xs.push_back(static_cast<double>(i));
      ys.push_back(std::log(trace[i]));
    }
  }
  if (xs.size() < 2) {
    // One informative difference followed by a sub-floor one: report the ratio.
    if (xs.size() == 1 && xs[0] + 1 < trace.size()) return trace[xs[0] + 1] / trace[xs[0]];
    return 0.0;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return std::exp(sxy / sxx);
}

TravelingWaveSolution solve_traveling_wave(const FixedPointMap& map, const TravelingWaveProblem& prob,
                                           const SurfaceField* zeta0) {
  validate(prob);
  if (!(map.phi().grid() == prob.phi.grid())) raise(ErrorCode::kInvalidArgument, "map and problem grids differ");
  SurfaceField zeta = zeta0 ? zeta0->without_mean() : SurfaceField(prob.phi.grid());
  if (!(zeta.grid() == prob.phi.grid())) raise(ErrorCode::kInvalidArgument, "initial guess grid differs");
  if (!(zeta.max_abs() < separation_mu(prob.phi, prob.cfg)))
    raise(ErrorCode::kBallExit, "initial guess outside the admissible ball");

  std::vector<double> trace;
  int growth = 0;
  bool converged = false;
  double res = 0.0;
  for (int it = 0; it < prob.max_iter; ++it) {
    SurfaceField next(zeta.grid());
    try {
      next = map(zeta, prob.gamma);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSeparationViolated || e.code() == ErrorCode::kBallExit ||
          e.code() == ErrorCode::kSeriesDiverging || e.code() == ErrorCode::kSolverStalled ||
          e.code() == ErrorCode::kNoConvergence)
        raise(ErrorCode::kNoContraction, "iteration left the regime where T_gamma is defined: " + std::string(e.what()));
      throw;
    }
    const double diff = hs_norm(next - zeta, prob.s);
    if (!std::isfinite(diff)) raise(ErrorCode::kNoContraction, "iteration produced non-finite values");
    if (!trace.empty() && diff >= trace.back()) {
      if (++growth >= kGrowthWindow)
        raise(ErrorCode::kNoContraction, "successive differences grew for 3 iterations");
    } else {
      growth = 0;
    }
    trace.push_back(diff);
    zeta = next;
    if (zeta.max_abs() > prob.delta) raise(ErrorCode::kNoContraction, "iterate left the delta-ball");
    if (diff <= prob.tol) {
      // The independent residual decides; differences far below tol with a
      // residual above it mean the backends disagree beyond tol.
      res = residual((zeta - prob.phi).without_mean(), prob.gamma, prob.phi, prob.cfg,
                     residual_backend(map.backend()), prob.s);
      if (res <= prob.tol) {
        converged = true;
        break;
      }
      if (diff <= 1e-3 * prob.tol)
        raise(ErrorCode::kNoConvergence, "residual stalls above tol while iterates have converged");
    }
  }
  if (!converged) raise(ErrorCode::kMaxIterations, "Picard iteration did not reach tol");

  TravelingWaveSolution sol{(zeta - prob.phi).without_mean(), prob.gamma, res, {}, 0.0, map.backend(), 0.0};
  sol.gamma = prob.gamma;
  sol.iter_trace = std::move(trace);
  sol.contraction_factor = fit_contraction_factor(sol.iter_trace, 10.0 * prob.tol);
  sol.backend = map.backend();
  sol.zeta_w1_inf = spectral::w_infinity_norm(zeta, 1);
  sol.residual_norm = res;
  return sol;
}

TravelingWaveSolution solve_traveling_wave(const TravelingWaveProblem& prob, const dn::DnBackend& backend,
                                           const SurfaceField* zeta0) {
  validate(prob);
  const FixedPointMap map(prob.phi, prob.cfg, backend);
  return solve_traveling_wave(map, prob, zeta0);
}

double residual(const SurfaceField& eta, double gamma, const SurfaceField& phi, const dn::FluidConfig& cfg,
                const dn::DnBackend& backend, double s) {
  SurfaceField r = dn::dn_apply(eta, eta + phi, cfg, backend);
  if (gamma != 0.0) r = r - gamma * spectral::derivative(eta, {1, 0});
  return spectral::sobolev_norm(r, {s - 1.0, false});
}

ContinuationResult continuation_in_gamma(const SurfaceField& phi, const dn::FluidConfig& cfg,
                                         const std::vector<double>& gammas, double delta, double tol,
                                         const dn::DnBackend& backend, double s) {
  if (!std::is_sorted(gammas.begin(), gammas.end()) && !std::is_sorted(gammas.rbegin(), gammas.rend()))
    raise(ErrorCode::kInvalidArgument, "gamma list must be sorted");
  TravelingWaveProblem base = TravelingWaveProblem::make(phi, 0.0, cfg);
  if (delta > 0.0) base.delta = delta;
  base.tol = tol;
  base.s = s;
  validate(base);
  const FixedPointMap map(phi, cfg, backend);

  ContinuationResult out;
  std::optional<SurfaceField> warm;
  for (double g : gammas) {
    ContinuationEntry entry;
    entry.gamma = g;
    TravelingWaveProblem prob = base;
    prob.gamma = g;
    try {
      entry.solution = solve_traveling_wave(map, prob, warm ? &*warm : nullptr);
      warm = entry.solution->eta + phi;
    } catch (const Error& e) {
      entry.error = e.code();
      entry.message = e.what();
      warm.reset();
    }
    out.entries.push_back(std::move(entry));
  }
  for (std::size_t i = 0; i + 1 < out.entries.size(); ++i) {
    const auto& a = out.entries[i];
    const auto& b = out.entries[i + 1];
    if (!a.solution || !b.solution || a.gamma == b.gamma) continue;
    const double q = spectral::sobolev_norm(b.solution->eta - a.solution->eta, {s, false}) / std::abs(b.gamma - a.gamma);
    out.quotients.push_back(q);
    out.lipschitz_estimate = std::max(out.lipschitz_estimate, q);
  }
  return out;
}

}  // namespace waves::tw
