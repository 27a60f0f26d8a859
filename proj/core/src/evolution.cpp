#include "waves/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "waves/error.hpp"
#include "waves/spectral.hpp"

namespace waves::evo {
namespace {

constexpr int kMaxHalvings = 10;
constexpr double kGrowthLimit = 1.5;

struct EtdCoefficients {
  std::vector<Complex> e, phi1, phi2;
};

// φ₁(z) = (eᶻ − 1)/z, φ₂(z) = (eᶻ − 1 − z)/z², by Taylor series near 0.
void phi_functions(Complex z, Complex& e, Complex& p1, Complex& p2) {
  e = std::exp(z);
  if (std::abs(z) < 0.5) {
    Complex term = 1.0, s1 = 0.0, s2 = 0.0;
    // term_j = z^j / j!; φ₁ = Σ z^j/(j+1)!, φ₂ = Σ z^j/(j+2)!.
    for (int j = 0; j < 24; ++j) {
      s1 += term / static_cast<double>(j + 1);
      s2 += term / static_cast<double>((j + 1) * (j + 2));
      term *= z / static_cast<double>(j + 1);
    }
    p1 = s1;
    p2 = s2;
  } else {
    p1 = (e - 1.0) / z;
    p2 = (e - 1.0 - z) / (z * z);
  }
}

// Λ(k) = iγk₁ − G₀(k) − ε|k|²; the Nyquist mode carries no transport.
Complex linear_symbol(const PeriodicGrid& grid, const Wavevector& k, double gamma, const dn::FluidConfig& cfg,
                      double epsilon) {
  const double k1 = grid.is_nyquist(k[0]) ? 0.0 : k[0];
  const double k2sq = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1];
  return Complex(-dn::flat_symbol(cfg, k) - epsilon * k2sq, gamma * k1);
}

EtdCoefficients make_coefficients(const PeriodicGrid& grid, double gamma, const dn::FluidConfig& cfg,
                                  const SchemeConfig& scheme, double dt) {
  const double eps = scheme.scheme == Scheme::kEpsViscosity ? scheme.epsilon : 0.0;
  EtdCoefficients c;
  c.e.resize(grid.size());
  c.phi1.resize(grid.size());
  c.phi2.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex z = dt * linear_symbol(grid, grid.wavevector(i), gamma, cfg, eps);
    phi_functions(z, c.e[i], c.phi1[i], c.phi2[i]);
  }
  return c;
}

using Remainder = std::function<SurfaceField(const SurfaceField&)>;

// One exponential step of u' = Λu + R(u) with precomputed coefficients.
SurfaceField etd_step(const SurfaceField& u, const Remainder& rem, const EtdCoefficients& c, double dt,
                      Scheme scheme) {
  const PeriodicGrid& grid = u.grid();
  const SurfaceField n0 = rem(u);
  std::vector<Complex> a(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) a[i] = c.e[i] * u.coeff(i) + dt * c.phi1[i] * n0.coeff(i);
  if (scheme == Scheme::kImex1) return SurfaceField::from_coefficients(grid, std::move(a));
  const SurfaceField stage = SurfaceField::from_coefficients(grid, a);
  const SurfaceField n1 = rem(stage);
  for (std::size_t i = 0; i < grid.size(); ++i) a[i] += dt * c.phi2[i] * (n1.coeff(i) - n0.coeff(i));
  return SurfaceField::from_coefficients(grid, std::move(a));
}

double hs_norm(const SurfaceField& f, double s) { return spectral::sobolev_norm(f, {s, false}); }

class Stepper {
 public:
  Stepper(const EvolutionProblem& prob, const SchemeConfig& scheme, const dn::DnBackend& backend, double s)
      : prob_(prob), scheme_(scheme), backend_(backend), s_(s),
        forcing_scale_(2.0 * hs_norm(prob.phi, s + 1.0)) {}

  SurfaceField advance(const SurfaceField& eta, double dt) { return advance(eta, dt, 0); }

 private:
  const EtdCoefficients& coefficients(double dt) {
    for (auto& [h, c] : cache_)
      if (h == dt) return c;
    cache_.emplace_back(dt, make_coefficients(prob_.phi.grid(), prob_.gamma, prob_.cfg, scheme_, dt));
    return cache_.back().second;
  }

  SurfaceField remainder(const SurfaceField& eta) const {
    const SurfaceField g = dn::dn_apply(eta, eta + prob_.phi, prob_.cfg, backend_);
    SurfaceField r = dn::dn_flat(eta, prob_.cfg) - g;
    return spectral::dealias(r, scheme_.dealias).without_mean();
  }

  SurfaceField advance(const SurfaceField& eta, double dt, int depth) {
    try {
      const SurfaceField next =
          etd_step(eta, [this](const SurfaceField& u) { return remainder(u); }, coefficients(dt), dt, scheme_.scheme);
      const double before = hs_norm(eta, s_);
      const double after = hs_norm(next, s_);
      if (!std::isfinite(after) || after > kGrowthLimit * before + forcing_scale_ * dt)
        raise(ErrorCode::kStepRejected, "norm growth beyond the safeguard in one step");
      dn::check_admissible(next, prob_.cfg);
      return next;
    } catch (const Error& e) {
      const bool retry = e.code() == ErrorCode::kStepRejected || e.code() == ErrorCode::kSeparationViolated;
      if (!retry) throw;
      if (depth >= kMaxHalvings) throw;
      const SurfaceField mid = advance(eta, 0.5 * dt, depth + 1);
      return advance(mid, 0.5 * dt, depth + 1);
    }
  }

  const EvolutionProblem& prob_;
  const SchemeConfig& scheme_;
  const dn::DnBackend& backend_;
  double s_;
  double forcing_scale_;
  std::vector<std::pair<double, EtdCoefficients>> cache_;
};

void check_problem(const SurfaceField& eta, const EvolutionProblem& prob) {
  if (!(eta.grid() == prob.phi.grid())) raise(ErrorCode::kInvalidArgument, "eta and phi grids differ");
  if (eta.grid().dim() != prob.cfg.dim) raise(ErrorCode::kInvalidArgument, "grid dimension differs from cfg.dim");
  if (!prob.phi.mean_zero()) raise(ErrorCode::kInvalidArgument, "phi must be mean-zero");
  dn::check_admissible(eta, prob.cfg);
}

TrajectoryRecord make_record(const SurfaceField& eta, double t, const std::optional<SurfaceField>& ref, double s) {
  const SurfaceField d = ref ? eta - *ref : eta;
  return {t, spectral::l2_norm(d), hs_norm(d, s), spectral::dot_h_half_norm(d), eta.mean()};
}

}  // namespace

void validate(const SchemeConfig& scheme) {
  if (!(scheme.dt > 0.0) || !std::isfinite(scheme.dt)) raise(ErrorCode::kInvalidArgument, "dt must be positive");
  if (scheme.scheme == Scheme::kEpsViscosity && !(scheme.epsilon > 0.0 && scheme.epsilon < 1.0))
    raise(ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1)");
}

int scheme_order(Scheme scheme) noexcept { return scheme == Scheme::kImex1 ? 1 : 2; }

EvolutionState step(const EvolutionState& state, const EvolutionProblem& prob, const SchemeConfig& scheme,
                    const dn::DnBackend& backend) {
  validate(scheme);
  check_problem(state.eta, prob);
  Stepper stepper(prob, scheme, backend, 3.0);
  return {stepper.advance(state.eta, scheme.dt), state.t + scheme.dt};
}

Trajectory simulate(const SurfaceField& eta0, const EvolutionProblem& prob, const SchemeConfig& scheme,
                    const dn::DnBackend& backend, const SimulateOptions& options) {
  validate(scheme);
  check_problem(eta0, prob);
  if (!(options.horizon >= 0.0)) raise(ErrorCode::kInvalidArgument, "horizon must be nonnegative");
  if (options.record_every < 1) raise(ErrorCode::kInvalidArgument, "record_every must be positive");
  if (options.reference && !(options.reference->grid() == eta0.grid()))
    raise(ErrorCode::kInvalidArgument, "reference grid differs");

  Trajectory traj{{}, {}, EvolutionState{eta0, 0.0}};
  traj.records.push_back(make_record(eta0, 0.0, options.reference, options.s));
  if (options.keep_states) traj.states.push_back(traj.final_state);

  const double ratio = options.horizon / scheme.dt;
  const long full = static_cast<long>(std::floor(ratio + 1e-9));
  const double tail = options.horizon - full * scheme.dt;
  const long total = full + (tail > 1e-12 * scheme.dt ? 1 : 0);

  Stepper stepper(prob, scheme, backend, options.s);
  SurfaceField eta = eta0;
  for (long n = 0; n < total; ++n) {
    const double h = n < full ? scheme.dt : tail;
    eta = stepper.advance(eta, h);
    const double t = n + 1 == total ? options.horizon : (n + 1) * scheme.dt;
    const SurfaceField d = options.reference ? eta - *options.reference : eta;
    const double w = hs_norm(d, options.s + 0.5);
    traj.dissipation_integral += w * w * h;
    ++traj.steps;
    traj.final_state = {eta, t};
    if ((n + 1) % options.record_every == 0 || n + 1 == total) {
      traj.records.push_back(make_record(eta, t, options.reference, options.s));
      if (options.keep_states) traj.states.push_back(traj.final_state);
    }
  }
  return traj;
}

LinearizedFlow::LinearizedFlow(const SurfaceField& eta_star, double gamma, dn::FluidConfig cfg, SchemeConfig scheme,
                               const dn::DnBackend& backend, bool freeze_operator)
    : gamma_(gamma), cfg_(std::move(cfg)), scheme_(scheme) {
  validate(scheme_);
  auto op = dn::make_dn_operator(eta_star, cfg_, backend);
  op_ = freeze_operator ? dn::freeze(*op) : std::move(op);
  auto c = make_coefficients(eta_star.grid(), gamma_, cfg_, scheme_, scheme_.dt);
  e_ = std::move(c.e);
  phi1_ = std::move(c.phi1);
  phi2_ = std::move(c.phi2);
}

SurfaceField LinearizedFlow::apply_linear(const SurfaceField& g) const {
  SurfaceField out = -op_->apply(g);
  if (gamma_ != 0.0) out = out + gamma_ * spectral::derivative(g, {1, 0});
  return out;
}

SurfaceField LinearizedFlow::step(const SurfaceField& g, const SurfaceField* forcing) const {
  if (!(g.grid() == op_->surface().grid())) raise(ErrorCode::kInvalidArgument, "g grid differs from eta*");
  if (!g.mean_zero()) raise(ErrorCode::kMeanNotZero, "g must be mean-zero");
  if (forcing && !forcing->mean_zero()) raise(ErrorCode::kMeanNotZero, "forcing must be mean-zero");
  const Remainder rem = [&](const SurfaceField& u) {
    SurfaceField r = dn::dn_flat(u, cfg_) - op_->apply(u);
    if (forcing) r = r + *forcing;
    return spectral::dealias(r, scheme_.dealias).without_mean();
  };
  const EtdCoefficients c{e_, phi1_, phi2_};
  return etd_step(g, rem, c, scheme_.dt, scheme_.scheme).without_mean();
}

SurfaceField linearized_step(const SurfaceField& g, const SurfaceField& eta_star, double gamma,
                             const dn::FluidConfig& cfg, const SchemeConfig& scheme, const SurfaceField* forcing,
                             const dn::DnBackend& backend) {
  const LinearizedFlow flow(eta_star, gamma, cfg, scheme, backend, false);
  return flow.step(g, forcing);
}

double energy(const SurfaceField& g, int s, double A) {
  if (s < 0) raise(ErrorCode::kInvalidArgument, "s must be a nonnegative integer");
  const PeriodicGrid& grid = g.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Wavevector k = grid.wavevector(i);
    const double q1 = static_cast<double>(k[0]) * k[0];
    const double q2 = static_cast<double>(k[1]) * k[1];
    double symbol = 0.0;
    if (grid.dim() == 1) {
      symbol = std::pow(q1, s);
    } else {
      for (int a = 0; a <= s; ++a) symbol += std::pow(q1, a) * std::pow(q2, s - a);
    }
    sum += (A + symbol) * std::norm(g.coeff(i));
  }
  return 0.5 * sum;
}

EnergyConstants energy_equivalence(int s, double A, int dim) {
  if (s < 0) raise(ErrorCode::kInvalidArgument, "s must be a nonnegative integer");
  if (dim != 1 && dim != 2) raise(ErrorCode::kInvalidArgument, "dim must be 1 or 2");
  double ms = 1.0;
  if (dim == 2) {
    // Largest binomial coefficient C(s, ⌊s/2⌋).
    for (int j = 1; j <= s / 2; ++j) ms = ms * (s - s / 2 + j) / j;
  }
  const double kappa = 1.0 / (std::pow(2.0, s) * ms);
  if (s == 0) return {0.5 * (A + 1.0), 0.5 * (A + 1.0)};
  return {0.5 * std::min(A, kappa), 0.5 * std::max(A, 1.0)};
}

}  // namespace waves::evo
