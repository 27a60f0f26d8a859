#include "waves/run.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "json.hpp"
#include "waves/dn_diagnostics.hpp"
#include "waves/field_io.hpp"
#include "waves/random_field.hpp"
#include "waves/spectral.hpp"
#include "waves/stability.hpp"
#include "waves/traveling_wave.hpp"

#ifndef WAVES_VERSION
#define WAVES_VERSION "unknown"
#endif

namespace waves::harness {
namespace {

using nlohmann::json;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json number(double v) { return std::isfinite(v) ? json::parse(io::format_number(v)) : json(nullptr); }

json coefficient_table(const SurfaceField& f) {
  return json::parse(io::field_to_string(f, io::FieldFormat::kJson))["coefficients"];
}

class Context {
 public:
  Context(const RunConfig& cfg, RunManifest& manifest) : cfg(cfg), manifest_(manifest) {}

  void write(const std::string& name, const std::string& content, const std::string& role) {
    io::write_file_atomic(manifest_.output_dir / name, content);
    manifest_.outputs.push_back({name, role, static_cast<std::uintmax_t>(content.size())});
  }

  void check(const std::string& name, bool passed, const std::string& detail) {
    manifest_.checks.push_back({name, passed, detail});
  }

  const RunConfig& cfg;
  json reports = json::object();

 private:
  RunManifest& manifest_;
};

std::string fmt(const char* label, double v) { return std::string(label) + "=" + io::format_number(v); }

tw::TravelingWaveProblem wave_problem(const RunConfig& cfg) {
  auto prob = tw::TravelingWaveProblem::make(cfg.phi(), cfg.problem.gamma, cfg.fluid());
  if (cfg.solver.delta > 0.0) prob.delta = cfg.solver.delta;
  prob.tol = cfg.solver.tw_tol;
  prob.max_iter = cfg.solver.max_iter;
  prob.s = cfg.solver.s;
  return prob;
}

// η* = −φ, which solves the traveling-wave equation only at γ = 0.
tw::TravelingWaveSolution trivial_wave(const RunConfig& cfg) {
  if (cfg.problem.gamma != 0.0) raise(ErrorCode::kInvalidArgument, "initial \"flat\" requires gamma = 0");
  const SurfaceField phi = cfg.phi();
  tw::TravelingWaveSolution sol{-phi, 0.0, 0.0, {}, 0.0, cfg.solver.backend, 0.0};
  sol.backend = cfg.solver.backend;
  sol.residual_norm = tw::residual(sol.eta, 0.0, phi, cfg.fluid(), cfg.solver.backend, cfg.solver.s);
  return sol;
}

json wave_report(const tw::TravelingWaveSolution& sol) {
  json trace = json::array();
  for (double d : sol.iter_trace) trace.push_back(number(d));
  return {{"gamma", number(sol.gamma)},
          {"residual", number(sol.residual_norm)},
          {"contraction_factor", number(sol.contraction_factor)},
          {"iterations", sol.iterations()},
          {"iter_trace", trace},
          {"zeta_w1_inf", number(sol.zeta_w1_inf)},
          {"backend", dn::describe(sol.backend)},
          {"eta_coeffs", coefficient_table(sol.eta)}};
}

tw::TravelingWaveSolution initial_wave(Context& ctx) {
  if (ctx.cfg.experiment.initial == InitialState::kFlat) return trivial_wave(ctx.cfg);
  const auto prob = wave_problem(ctx.cfg);
  auto sol = tw::solve_traveling_wave(prob, ctx.cfg.solver.backend);
  ctx.reports["wave"] = wave_report(sol);
  return sol;
}

lab::PerturbationSpec perturbation(const RunConfig& cfg) {
  lab::PerturbationSpec p = cfg.experiment.perturbation;
  if (cfg.experiment.random_perturbation) p.seed = cfg.experiment.seed;
  return p;
}

void run_dn_check(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const PeriodicGrid grid(cfg.problem.dim, cfg.problem.n);
  const dn::FluidConfig fluid = cfg.fluid();
  const auto& backend = cfg.solver.backend;
  Rng rng(cfg.experiment.seed);

  // Flat anchors: G[0]cos(k·x) = symbol(k)·cos(k·x).
  const auto flat_op = dn::make_dn_operator(SurfaceField(grid), fluid, backend);
  double flat_err = 0.0;
  const int kmax = std::min(20, grid.n() / 2 - 1);
  for (int k = 1; k <= kmax; ++k) {
    const SurfaceField g = SurfaceField::sample(grid, [k](double x, double) { return std::cos(k * x); });
    const double sym = dn::flat_symbol(fluid, {k, 0});
    const SurfaceField err = flat_op->apply(g) - sym * g;
    flat_err = std::max(flat_err, spectral::l2_norm(err) / (sym * spectral::l2_norm(g)));
  }
  ctx.check("flat_exactness", flat_err <= 1e-8, fmt("max_relative_error", flat_err));

  const SurfaceField phi = cfg.phi();
  SurfaceField eta = -phi;
  if (phi.max_abs() == 0.0) {
    const SurfaceField r = random_smooth_field(grid, rng);
    eta = (0.1 / r.max_abs()) * r;
  }
  const auto op = dn::make_dn_operator(eta, fluid, backend);
  double mean_defect = 0.0, sym_defect = 0.0, min_coercivity = INFINITY;
  json samples = json::array();
  for (int i = 0; i < cfg.experiment.samples; ++i) {
    const SurfaceField g = random_smooth_field(grid, rng);
    const SurfaceField f = random_smooth_field(grid, rng);
    const SurfaceField gg = op->apply(g);
    const SurfaceField gf = op->apply(f);
    // apply() projects the mean away; the elliptic solve reports the raw flux mean.
    double md = std::abs(gg.mean()) / std::max(spectral::l2_norm(gg), 1e-300);
    if (const auto* me = std::get_if<dn::MappedElliptic>(&backend)) {
      const auto [flux, report] = dn::dn_elliptic(eta, g, fluid, *me);
      md = std::abs(report.flux_defect) / std::max(spectral::l2_norm(flux), 1e-300);
    }
    const double sd = std::abs(spectral::inner_product(gf, g) - spectral::inner_product(f, gg)) /
                      (spectral::sobolev_norm(f, {0.5, false}) * spectral::sobolev_norm(g, {0.5, false}));
    const double c = dn::coercivity_ratio(*op, g);
    mean_defect = std::max(mean_defect, md);
    sym_defect = std::max(sym_defect, sd);
    min_coercivity = std::min(min_coercivity, c);
    samples.push_back({{"mean_defect", number(md)}, {"symmetry_defect", number(sd)}, {"coercivity_ratio", number(c)}});
    if (i == 0) {
      ctx.write("g.csv", io::field_to_string(g, io::FieldFormat::kCsv), "dn input sample");
      ctx.write("dn_g.csv", io::field_to_string(gg, io::FieldFormat::kCsv), "dn output sample");
    }
  }
  ctx.check("mean_zero_range", mean_defect <= 1e-11, fmt("max_mean_defect", mean_defect));
  ctx.check("symmetry", sym_defect <= 1e-8, fmt("max_symmetry_defect", sym_defect));
  ctx.check("coercivity_positive", min_coercivity > 0.0, fmt("min_ratio", min_coercivity));
  ctx.write("surface.csv", io::field_to_string(eta, io::FieldFormat::kCsv), "dn surface");
  ctx.reports["dn_check"] = {{"backend", dn::describe(backend)},
                             {"flat_max_relative_error", number(flat_err)},
                             {"coercivity_bound_shape", number(dn::coercivity_bound_shape(eta, fluid))},
                             {"samples", samples}};
}

void run_tw_solve(Context& ctx) {
  const auto prob = wave_problem(ctx.cfg);
  const auto sol = tw::solve_traveling_wave(prob, ctx.cfg.solver.backend);
  const json rep = wave_report(sol);
  ctx.reports["tw_solve"] = rep;
  ctx.write("wave.json", rep.dump(2) + "\n", "traveling wave");
  ctx.write("eta.csv", io::field_to_string(sol.eta, io::FieldFormat::kCsv), "wave profile");
  std::string trace = "iteration,difference\n";
  for (std::size_t i = 0; i < sol.iter_trace.size(); ++i)
    trace += std::to_string(i + 1) + "," + io::format_number(sol.iter_trace[i]) + "\n";
  ctx.write("iterations.csv", trace, "Picard trace");
  ctx.check("residual_within_tol", sol.residual_norm <= prob.tol, fmt("residual", sol.residual_norm));
  ctx.check("contraction_below_one", sol.contraction_factor < 1.0, fmt("factor", sol.contraction_factor));
  ctx.check("eta_mean_zero", sol.eta.mean_zero(), fmt("mean", sol.eta.mean()));
}

void run_evolve(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const auto wave = initial_wave(ctx);
  const SurfaceField phi = cfg.phi();
  const SurfaceField f0 = lab::make_perturbation(wave.eta.grid(), perturbation(cfg));
  evo::SimulateOptions opts;
  opts.horizon = cfg.evolution.horizon;
  opts.record_every = cfg.evolution.record_every;
  opts.reference = wave.eta;
  opts.s = cfg.solver.s;
  const auto traj =
      evo::simulate(wave.eta + f0, {phi, cfg.problem.gamma, cfg.fluid()}, cfg.evolution.scheme, cfg.solver.backend, opts);
  ctx.write("trajectory.csv", io::trajectory_to_csv(traj), "norm time series");
  ctx.write("final_eta.csv", io::field_to_string(traj.final_state.eta, io::FieldFormat::kCsv), "final surface");
  double drift = 0.0;
  bool finite = true;
  for (const auto& r : traj.records) {
    drift = std::max(drift, std::abs(r.mean - traj.records.front().mean));
    finite = finite && std::isfinite(r.l2) && std::isfinite(r.hs) && std::isfinite(r.hhalf_dot);
  }
  ctx.check("mean_conserved", drift <= 1e-11, fmt("max_mean_drift", drift));
  ctx.check("norms_finite", finite, finite ? "all finite" : "non-finite norm recorded");
  ctx.reports["evolve"] = {{"steps", traj.steps},
                           {"final_time", number(traj.final_state.t)},
                           {"final_hs", number(traj.records.back().hs)},
                           {"dissipation_integral", number(traj.dissipation_integral)}};
}

json decay_json(const lab::DecayReport& rep, const tw::TravelingWaveSolution& wave, double s) {
  return {{"wave",
           {{"gamma", number(wave.gamma)},
            {"residual", number(wave.residual_norm)},
            {"hs_norm", number(spectral::sobolev_norm(wave.eta, {s, false}))}}},
          {"fit_window",
           {{"start", number(rep.fit_start)},
            {"end", number(rep.fit_end)},
            {"samples", rep.fit_samples},
            {"floor", number(rep.floor)}}},
          {"c0", number(rep.rate)},
          {"r2", number(rep.r2)},
          {"C0", number(rep.prefactor)},
          {"initial_norm", number(rep.initial_norm)},
          {"verdict", lab::to_string(rep.verdict)},
          {"note", rep.note}};
}

void run_stability(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const auto wave = initial_wave(ctx);
  const SurfaceField phi = cfg.phi();
  const auto pert = perturbation(cfg);
  const auto rep = lab::decay_experiment(wave, phi, cfg.fluid(), pert, cfg.evolution.scheme, cfg.evolution.horizon,
                                         cfg.experiment.window, cfg.solver.backend, cfg.evolution.record_every);
  const json dj = decay_json(rep, wave, cfg.solver.s);
  ctx.reports["decay"] = dj;
  ctx.write("trajectory.csv", io::trajectory_to_csv(*rep.trajectory), "perturbation norm time series");
  ctx.write("decay.json", dj.dump(2) + "\n", "decay fit");
  if (pert.amplitude > 0.0)
    ctx.check("decayed", rep.verdict == lab::Verdict::kDecayed,
              std::string("verdict=") + lab::to_string(rep.verdict) + " " + fmt("c0", rep.rate) + " " + fmt("r2", rep.r2));
  if (!cfg.experiment.amplitudes.empty()) {
    const auto scan = lab::stability_threshold_scan(wave, phi, cfg.fluid(), cfg.experiment.amplitudes, pert,
                                                    cfg.evolution.scheme, cfg.evolution.horizon,
                                                    cfg.experiment.window, cfg.solver.backend,
                                                    cfg.evolution.record_every);
    std::string csv = "amplitude,verdict,rate\n";
    json rows = json::array();
    for (const auto& r : scan.rows) {
      csv += io::format_number(r.amplitude) + "," + lab::to_string(r.verdict) + "," + io::format_number(r.rate) + "\n";
      rows.push_back({{"amplitude", number(r.amplitude)},
                      {"verdict", lab::to_string(r.verdict)},
                      {"rate", number(r.rate)},
                      {"error", r.error ? json(std::string(to_string(*r.error))) : json(nullptr)}});
    }
    ctx.write("scan.csv", csv, "stability scan");
    ctx.reports["scan"] = {{"rows", rows}, {"margin", number(scan.margin)}};
  }
}

void run_props(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const PeriodicGrid grid(cfg.problem.dim, cfg.problem.n);
  const dn::FluidConfig fluid = cfg.fluid();
  const auto& backend = cfg.solver.backend;
  Rng rng(cfg.experiment.seed);

  // Surfaces stay band-limited relative to n so products with the test fields resolve.
  const RandomFieldSpec surface_band{std::max(2, std::min(8, grid.n() / 8)), 0.5};
  double min_coercivity = INFINITY, max_sym = 0.0, worst_linearity = 0.0, commutator_spread = 0.0;
  json per_surface = json::array();
  for (int i = 0; i < cfg.experiment.samples; ++i) {
    const SurfaceField r = random_smooth_field(grid, rng, surface_band);
    const SurfaceField eta = (0.25 / r.max_abs()) * r;
    const auto op = dn::make_dn_operator(eta, fluid, backend);
    double coer = INFINITY;
    double sym = 0.0;
    for (int j = 0; j < 5; ++j) {
      const SurfaceField g = random_smooth_field(grid, rng);
      const SurfaceField f = random_smooth_field(grid, rng);
      coer = std::min(coer, dn::coercivity_ratio(*op, g));
      sym = std::max(sym, std::abs(spectral::inner_product(op->apply(f), g) - spectral::inner_product(f, op->apply(g))) /
                              (spectral::sobolev_norm(f, {0.5, false}) * spectral::sobolev_norm(g, {0.5, false})));
    }
    // Lipschitz dependence on the surface: halving η₂ − η₁ halves the gap.
    const SurfaceField h = random_smooth_field(grid, rng);
    const SurfaceField dir = (1.0 / h.max_abs()) * h;
    const SurfaceField g = random_smooth_field(grid, rng);
    const double gap1 = dn::dn_contraction_gap(eta, eta + 1e-2 * dir, g, fluid, backend, cfg.solver.s);
    const double gap2 = dn::dn_contraction_gap(eta, eta + 5e-3 * dir, g, fluid, backend, cfg.solver.s);
    const double linearity = std::abs(gap1 / gap2 - 2.0) / 2.0;
    min_coercivity = std::min(min_coercivity, coer);
    max_sym = std::max(max_sym, sym);
    worst_linearity = std::max(worst_linearity, linearity);
    per_surface.push_back({{"min_coercivity_ratio", number(coer)},
                           {"symmetry_defect", number(sym)},
                           {"gap_halving_defect", number(linearity)}});
  }
  // One-derivative gain of [∂₁, G[η]]: the gained ratio must not grow with k.
  // In d = 1 it decays (the principal symbol of G[η] is |ξ| for every η).
  json commutator_ratios = json::object();
  {
    const SurfaceField r = random_smooth_field(grid, rng, {3, 0.5});
    const SurfaceField eta = (0.1 / r.max_abs()) * r;
    const auto op = dn::make_dn_operator(eta, fluid, backend);
    double first = 0.0, hi = 0.0;
    for (int k = 4; k <= grid.n() / 4; k *= 2) {
      const SurfaceField f = SurfaceField::sample(grid, [k](double x, double) { return std::cos(k * x); });
      const double ratio = dn::commutator_residual(*op, f, {1, 0}, 0.5).ratio;
      if (first == 0.0) first = ratio;
      hi = std::max(hi, ratio);
      commutator_ratios[std::to_string(k)] = number(ratio);
    }
    commutator_spread = first > 0.0 ? hi / first : 1.0;
  }
  ctx.check("coercivity", min_coercivity > 0.0, fmt("min_ratio", min_coercivity));
  ctx.check("symmetry", max_sym <= 1e-8, fmt("max_defect", max_sym));
  ctx.check("contraction", worst_linearity <= 0.1, fmt("max_gap_halving_defect", worst_linearity));
  ctx.check("commutator", commutator_spread < 2.0, fmt("max_ratio_growth", commutator_spread));
  json props = {{"coercivity", {{"passed", min_coercivity > 0.0}, {"min_ratio", number(min_coercivity)}}},
                {"symmetry", {{"passed", max_sym <= 1e-8}, {"max_defect", number(max_sym)}}},
                {"contraction", {{"passed", worst_linearity <= 0.1}, {"max_gap_halving_defect", number(worst_linearity)}}},
                {"commutator",
                 {{"passed", commutator_spread < 2.0},
                  {"max_ratio_growth", number(commutator_spread)},
                  {"ratios", commutator_ratios}}},
                {"surfaces", per_surface}};
  ctx.reports["props"] = props;
  ctx.write("props.json", props.dump(2) + "\n", "property suite");
}

}  // namespace

int RunManifest::exit_status() const noexcept {
  if (error_code || !error.empty()) return 2;
  for (const auto& c : checks)
    if (!c.passed) return 1;
  return 0;
}

std::string manifest_to_json(const RunManifest& m) {
  json outputs = json::array();
  for (const auto& o : m.outputs) outputs.push_back({{"path", o.path}, {"role", o.role}, {"bytes", o.bytes}});
  json checks = json::array();
  for (const auto& c : m.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  const int status = m.exit_status();
  json doc = {{"kind", m.kind},
              {"config_hash", m.config_hash},
              {"version", m.version},
              {"started", m.started},
              {"finished", m.finished},
              {"seed", m.seed},
              {"output_dir", m.output_dir.string()},
              {"outputs", outputs},
              {"checks", checks},
              {"reports", json::parse(m.reports_json)},
              {"status", status == 0 ? "ok" : status == 1 ? "failed" : "error"},
              {"exit_status", status}};
  if (status == 2)
    doc["error"] = {{"code", m.error_code ? std::string(to_string(*m.error_code)) : "Unknown"}, {"message", m.error}};
  return doc.dump(2) + "\n";
}

RunManifest run(RunConfig config, const RunOptions& options) {
  RunManifest m;
  m.started = utc_now();
  m.version = WAVES_VERSION;
  if (options.kind) {
    if (config.experiment.kind_given && config.experiment.kind != *options.kind)
      raise(ErrorCode::kSchemaViolation, "experiment.kind: config says " + std::string(to_string(config.experiment.kind)) +
                                             " but the command is " + to_string(*options.kind));
    config.experiment.kind = *options.kind;
  }
  if (options.output_dir) config.experiment.output_dir = *options.output_dir;
  if (options.seed) config.experiment.seed = *options.seed;
  m.kind = to_string(config.experiment.kind);
  m.seed = config.experiment.seed;
  m.output_dir = std::filesystem::absolute(config.experiment.output_dir).lexically_normal();
  const std::string normalized = emit_config(config);
  // Where a run writes does not change what it computes.
  RunConfig located = config;
  located.experiment.output_dir.clear();
  m.config_hash = fnv1a_hex(emit_config(located));

  Context ctx(config, m);
  ctx.write("config.json", normalized, "normalized config");
  try {
    switch (config.experiment.kind) {
      case RunKind::kDnCheck: run_dn_check(ctx); break;
      case RunKind::kTwSolve: run_tw_solve(ctx); break;
      case RunKind::kEvolve: run_evolve(ctx); break;
      case RunKind::kStability: run_stability(ctx); break;
      case RunKind::kProps: run_props(ctx); break;
    }
  } catch (const Error& e) {
    m.error_code = e.code();
    m.error = e.what();
  }
  m.reports_json = ctx.reports.dump();
  m.finished = utc_now();
  io::write_file_atomic(m.output_dir / "run.json", manifest_to_json(m));
  return m;
}

}  // namespace waves::harness
