#include "waves/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "waves/random_field.hpp"
#include "waves/spectral.hpp"

namespace waves::lab {
namespace {

double hs_norm(const SurfaceField& f, double s) { return spectral::sobolev_norm(f, {s, false}); }

DecayReport fit_trajectory(const evo::Trajectory& traj, const FitWindow& window, double derived_floor) {
  std::vector<double> times, norms;
  for (const auto& r : traj.records) {
    times.push_back(r.t);
    norms.push_back(r.hs);
  }
  FitWindow w = window;
  if (w.floor <= 0.0) w.floor = derived_floor;
  DecayReport rep = fit_decay(std::move(times), std::move(norms), w);
  rep.trajectory = traj;
  return rep;
}

}  // namespace

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::kDecayed: return "Decayed";
    case Verdict::kNotDecayed: return "NotDecayed";
    case Verdict::kInconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

DecayReport fit_decay(std::vector<double> times, std::vector<double> norms, const FitWindow& window) {
  if (times.size() != norms.size()) raise(ErrorCode::kInvalidArgument, "times and norms differ in length");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) raise(ErrorCode::kInvalidArgument, "times must be strictly increasing");
  DecayReport rep;
  rep.times = std::move(times);
  rep.hs_norms = std::move(norms);
  rep.floor = window.floor;
  if (rep.times.empty()) {
    rep.note = "no samples";
    return rep;
  }
  rep.initial_norm = rep.hs_norms.front();
  const double t0 = rep.times.front();
  const double horizon = rep.times.back() - t0;
  const double cutoff = window.floor_factor * window.floor;

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    if (rep.times[i] - t0 < window.start_fraction * horizon) continue;
    if (!(rep.hs_norms[i] > cutoff) || !std::isfinite(rep.hs_norms[i])) continue;
    xs.push_back(rep.times[i]);
    ys.push_back(std::log(rep.hs_norms[i]));
  }
  rep.fit_samples = static_cast<int>(xs.size());
  if (rep.fit_samples < std::max(window.min_samples, 2)) {
    rep.verdict = Verdict::kInconclusive;
    rep.note = "too few samples above the round-off floor";
    return rep;
  }
  rep.fit_start = xs.front();
  rep.fit_end = xs.back();
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  rep.rate = -slope;
  rep.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  rep.prefactor = rep.initial_norm > 0.0 ? std::exp(intercept + slope * t0) / rep.initial_norm : 0.0;
  rep.verdict = rep.rate > 0.0 && rep.r2 >= window.min_r2 ? Verdict::kDecayed : Verdict::kNotDecayed;
  if (rep.fit_end < rep.times.back()) rep.note = "fit window ends before the horizon";
  return rep;
}

SurfaceField make_perturbation(const PeriodicGrid& grid, const PerturbationSpec& spec) {
  if (spec.seed) {
    Rng rng(*spec.seed);
    const SurfaceField f = random_smooth_field(grid, rng, RandomFieldSpec{3, 0.5});
    const double sup = f.max_abs();
    return sup > 0.0 ? (spec.amplitude / sup) * f : f;
  }
  const SurfaceField f = SurfaceField::sample(grid, [&](double x1, double x2) {
    double v = 0.0;
    for (const auto& m : spec.modes) v += m.weight * std::cos(m.k1 * x1 + m.k2 * x2 + m.phase);
    return v;
  });
  return (spec.amplitude * f).without_mean();
}

SurfaceField nonlinear_remainder(const SurfaceField& f, const SurfaceField& eta_star, const SurfaceField& phi,
                                 const dn::FluidConfig& cfg, const dn::DnBackend& backend) {
  if (!f.mean_zero()) raise(ErrorCode::kMeanNotZero, "f must be mean-zero");
  if (f.max_abs() == 0.0) return SurfaceField(f.grid());
  const SurfaceField eta = f + eta_star;
  const SurfaceField zeta = eta_star + phi;
  const auto base = dn::make_dn_operator(eta_star, cfg, backend);
  const auto moved = dn::make_dn_operator(eta, cfg, backend);
  SurfaceField out = base->apply(f) - moved->apply(f);
  if (zeta.max_abs() > 0.0) out = out + (base->apply(zeta) - moved->apply(zeta));
  return out.without_mean();
}

DecayReport decay_experiment(const tw::TravelingWaveSolution& wave, const SurfaceField& phi,
                             const dn::FluidConfig& cfg, const PerturbationSpec& pert,
                             const evo::SchemeConfig& scheme, double horizon, const FitWindow& window,
                             const dn::DnBackend& backend, int record_every) {
  const double wave_norm = hs_norm(wave.eta, pert.s);
  const double threshold = pert.admission_threshold >= 0.0 ? pert.admission_threshold : 1e-2 * wave_norm + 1e-3;
  if (pert.amplitude > threshold) raise(ErrorCode::kInvalidArgument, "perturbation amplitude above the admission threshold");
  if (pert.amplitude < 0.0) raise(ErrorCode::kInvalidArgument, "perturbation amplitude must be nonnegative");
  const SurfaceField f0 = make_perturbation(wave.eta.grid(), pert);
  evo::SimulateOptions opts;
  opts.horizon = horizon;
  opts.record_every = record_every;
  opts.reference = wave.eta;
  opts.s = pert.s;
  const evo::Trajectory traj = evo::simulate(wave.eta + f0, {phi, wave.gamma, cfg}, scheme, backend, opts);
  const double floor = std::max(1e-13 * (1.0 + wave_norm), wave.residual_norm);
  return fit_trajectory(traj, window, floor);
}

ScanResult stability_threshold_scan(const tw::TravelingWaveSolution& wave, const SurfaceField& phi,
                                    const dn::FluidConfig& cfg, const std::vector<double>& amplitudes,
                                    const PerturbationSpec& shape, const evo::SchemeConfig& scheme, double horizon,
                                    const FitWindow& window, const dn::DnBackend& backend, int record_every) {
  if (!std::is_sorted(amplitudes.begin(), amplitudes.end()))
    raise(ErrorCode::kInvalidArgument, "amplitudes must be increasing");
  ScanResult out;
  for (double a : amplitudes) {
    ScanRow row;
    row.amplitude = a;
    PerturbationSpec p = shape;
    p.amplitude = a;
    p.admission_threshold = std::numeric_limits<double>::infinity();
    try {
      const DecayReport rep = decay_experiment(wave, phi, cfg, p, scheme, horizon, window, backend, record_every);
      row.verdict = rep.verdict;
      row.rate = rep.rate;
      if (rep.verdict == Verdict::kDecayed) out.margin = std::max(out.margin, a);
    } catch (const Error& e) {
      row.verdict = Verdict::kNotDecayed;
      row.error = e.code();
      row.message = e.what();
    }
    out.rows.push_back(row);
  }
  return out;
}

DecayReport linear_decay_experiment(const SurfaceField& eta_star, double gamma, const dn::FluidConfig& cfg,
                                    const SurfaceField& g0, const evo::SchemeConfig& scheme, double horizon,
                                    const FitWindow& window, const dn::DnBackend& backend, double s) {
  if (!(horizon >= 0.0)) raise(ErrorCode::kInvalidArgument, "horizon must be nonnegative");
  const evo::LinearizedFlow flow(eta_star, gamma, cfg, scheme, backend);
  const long steps = std::lround(horizon / scheme.dt);
  evo::Trajectory traj{{}, {}, evo::EvolutionState{g0, 0.0}};
  auto record = [&](const SurfaceField& g, double t) {
    traj.records.push_back({t, spectral::l2_norm(g), hs_norm(g, s), spectral::dot_h_half_norm(g), g.mean()});
  };
  SurfaceField g = g0;
  record(g, 0.0);
  for (long n = 1; n <= steps; ++n) {
    g = flow.step(g);
    const double w = hs_norm(g, s + 0.5);
    traj.dissipation_integral += w * w * scheme.dt;
    record(g, n * scheme.dt);
  }
  traj.steps = static_cast<int>(steps);
  traj.final_state = {g, steps * scheme.dt};
  return fit_trajectory(traj, window, 1e-14 * hs_norm(g0, s));
}

}  // namespace waves::lab
