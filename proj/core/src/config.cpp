#include "waves/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <set>

#include "json.hpp"
#include "waves/error.hpp"
#include "waves/field_io.hpp"

namespace waves::harness {
namespace {

using nlohmann::json;

constexpr const char* kKinds[] = {"dn-check", "tw-solve", "evolve", "stability", "props"};

// Walks a JSON document, collecting violations by key path.
class Reader {
 public:
  std::vector<std::string> violations;

  void fail(const std::string& path, const std::string& what) { violations.push_back(path + ": " + what); }

  bool object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto& [key, _] : j.items())
      if (!allowed.count(key)) fail(join(path, key), "unknown key");
    return true;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  void number(const json& j, const std::string& key, const std::string& path, double& out, double lo, double hi,
              bool required = false) {
    const std::string p = join(path, key);
    if (!j.contains(key)) {
      if (required) fail(p, "required key missing");
      return;
    }
    const json& v = j.at(key);
    if (!v.is_number()) return fail(p, "expected a number");
    const double x = v.get<double>();
    if (!(x >= lo && x <= hi)) return fail(p, "out of range [" + io::format_number(lo) + ", " + io::format_number(hi) + "]");
    out = x;
  }

  void integer(const json& j, const std::string& key, const std::string& path, int& out, int lo, int hi,
               bool required = false) {
    const std::string p = join(path, key);
    if (!j.contains(key)) {
      if (required) fail(p, "required key missing");
      return;
    }
    const json& v = j.at(key);
    if (!v.is_number_integer()) return fail(p, "expected an integer");
    const long long x = v.get<long long>();
    if (x < lo || x > hi) return fail(p, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out = static_cast<int>(x);
  }

  void boolean(const json& j, const std::string& key, const std::string& path, bool& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_boolean()) return fail(join(path, key), "expected a boolean");
    out = j.at(key).get<bool>();
  }

  bool string(const json& j, const std::string& key, const std::string& path, std::string& out) {
    if (!j.contains(key)) return false;
    if (!j.at(key).is_string()) {
      fail(join(path, key), "expected a string");
      return false;
    }
    out = j.at(key).get<std::string>();
    return true;
  }
};

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void read_phi(Reader& r, const json& v, ProblemBlock& p) {
  const std::string path = "problem.phi";
  if (v.is_string()) {
    // Tokens: "zero", "cos:<a>" (a·cos x), "cos:<a>:<k>" (a·cos kx).
    const std::string tok = v.get<std::string>();
    if (tok == "zero") return;
    double a = 0.0;
    int k = 1;
    char tail = 0;
    const int got = std::sscanf(tok.c_str(), "cos:%lf:%d%c", &a, &k, &tail);
    if (tok.rfind("cos:", 0) != 0 || got < 1 || got > 2 || k < 1 || !std::isfinite(a))
      return r.fail(path, "unknown token '" + tok + "' (expected zero, cos:<a> or cos:<a>:<k>)");
    p.phi.push_back({k, 0, a, 0.0});
    return;
  }
  if (!v.is_array()) return r.fail(path, "expected a mode table or a token");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string mp = path + "[" + std::to_string(i) + "]";
    const json& m = v[i];
    if (!r.object(m, mp, {"k", "amplitude", "phase"})) continue;
    PhiMode mode;
    if (!m.contains("k")) {
      r.fail(mp + ".k", "required key missing");
    } else if (m["k"].is_number_integer()) {
      mode.k1 = m["k"].get<int>();
    } else if (m["k"].is_array() && m["k"].size() == 2 && m["k"][0].is_number_integer() && m["k"][1].is_number_integer()) {
      mode.k1 = m["k"][0].get<int>();
      mode.k2 = m["k"][1].get<int>();
    } else {
      r.fail(mp + ".k", "expected an integer or a pair of integers");
    }
    if (mode.k1 == 0 && mode.k2 == 0) r.fail(mp + ".k", "the zero mode would give phi a mean");
    r.number(m, "amplitude", mp, mode.amplitude, -1e3, 1e3, true);
    r.number(m, "phase", mp, mode.phase, -1e3, 1e3);
    p.phi.push_back(mode);
  }
}

void read_problem(Reader& r, const json& j, ProblemBlock& p) {
  if (!r.object(j, "problem", {"phi", "gamma", "depth", "separation_margin", "dim", "n"})) return;
  if (j.contains("phi")) read_phi(r, j["phi"], p);
  r.number(j, "gamma", "problem", p.gamma, -1e3, 1e3);
  if (!j.contains("depth")) {
    r.fail("problem.depth", "required key missing");
  } else if (j["depth"].is_string()) {
    if (j["depth"].get<std::string>() == "infinite") p.infinite = true;
    else r.fail("problem.depth", "expected a positive number or \"infinite\"");
  } else {
    r.number(j, "depth", "problem", p.depth, 1e-6, 1e6);
  }
  r.number(j, "separation_margin", "problem", p.separation_margin, 0.0, 1e6);
  r.integer(j, "dim", "problem", p.dim, 1, 2);
  r.integer(j, "n", "problem", p.n, 8, 4096, true);
  if (j.contains("n") && !is_power_of_two(p.n)) r.fail("problem.n", "must be a power of two");
  for (const auto& m : p.phi) {
    if (p.dim == 1 && m.k2 != 0) r.fail("problem.phi", "two-component wavevector in a 1-d problem");
    if (std::abs(m.k1) >= p.n / 2 || std::abs(m.k2) >= p.n / 2) r.fail("problem.phi", "mode not resolved by the grid");
  }
}

void read_solver(Reader& r, const json& j, SolverBlock& s) {
  if (!r.object(j, "solver", {"backend", "vertical_points", "elliptic_tol", "max_elliptic_iterations", "order",
                              "dealias", "tw_tol", "delta", "max_iter", "s"}))
    return;
  std::string name = "mapped-elliptic";
  r.string(j, "backend", "solver", name);
  const std::set<std::string> me_keys = {"vertical_points", "elliptic_tol", "max_elliptic_iterations"};
  const std::set<std::string> cs_keys = {"order", "dealias"};
  auto reject = [&](const std::set<std::string>& keys) {
    for (const auto& k : keys)
      if (j.contains(k)) r.fail("solver." + k, "not used by backend " + name);
  };
  if (name == "mapped-elliptic") {
    dn::MappedElliptic me;
    r.integer(j, "vertical_points", "solver", me.vertical_points, 16, 512);
    r.number(j, "elliptic_tol", "solver", me.solver_tol, 1e-14, 1e-6);
    r.integer(j, "max_elliptic_iterations", "solver", me.max_iterations, 1, 100000);
    reject(cs_keys);
    s.backend = me;
  } else if (name == "craig-sulem") {
    dn::CraigSulem cs;
    r.integer(j, "order", "solver", cs.order, 0, 8);
    std::string d = "two-thirds";
    r.string(j, "dealias", "solver", d);
    if (d == "none") cs.dealias = DealiasRule::kNone;
    else if (d != "two-thirds") r.fail("solver.dealias", "expected none or two-thirds");
    reject(me_keys);
    s.backend = cs;
  } else if (name == "flat") {
    reject(me_keys);
    reject(cs_keys);
    s.backend = dn::FlatSymbol{};
  } else {
    r.fail("solver.backend", "expected flat, craig-sulem or mapped-elliptic");
  }
  r.number(j, "tw_tol", "solver", s.tw_tol, 1e-15, 1.0);
  r.number(j, "delta", "solver", s.delta, 0.0, 1.0);
  r.integer(j, "max_iter", "solver", s.max_iter, 1, 100000);
  r.number(j, "s", "solver", s.s, 0.0, 12.0);
}

void read_evolution(Reader& r, const json& j, EvolutionBlock& e) {
  if (!r.object(j, "evolution", {"scheme", "epsilon", "dt", "T", "record_every", "dealias"})) return;
  std::string scheme = "imex2";
  r.string(j, "scheme", "evolution", scheme);
  if (scheme == "imex1") e.scheme.scheme = evo::Scheme::kImex1;
  else if (scheme == "imex2") e.scheme.scheme = evo::Scheme::kImex2;
  else if (scheme == "eps-viscosity") e.scheme.scheme = evo::Scheme::kEpsViscosity;
  else r.fail("evolution.scheme", "expected imex1, imex2 or eps-viscosity");
  r.number(j, "epsilon", "evolution", e.scheme.epsilon, 0.0, 1.0);
  if (e.scheme.scheme == evo::Scheme::kEpsViscosity && !(e.scheme.epsilon > 0.0 && e.scheme.epsilon < 1.0))
    r.fail("evolution.epsilon", "eps-viscosity needs epsilon in (0, 1)");
  r.number(j, "dt", "evolution", e.scheme.dt, 1e-8, 10.0);
  r.number(j, "T", "evolution", e.horizon, 0.0, 1e6);
  r.integer(j, "record_every", "evolution", e.record_every, 1, 1000000);
  std::string d = "none";
  r.string(j, "dealias", "evolution", d);
  if (d == "two-thirds") e.scheme.dealias = DealiasRule::kTwoThirds;
  else if (d != "none") r.fail("evolution.dealias", "expected none or two-thirds");
}

void read_experiment(Reader& r, const json& j, ExperimentBlock& x) {
  if (!r.object(j, "experiment", {"kind", "seed", "output_dir", "initial", "perturbation", "amplitudes", "fit", "samples"}))
    return;
  std::string kind;
  if (r.string(j, "kind", "experiment", kind)) {
    try {
      x.kind = parse_kind(kind);
      x.kind_given = true;
    } catch (const Error&) {
      r.fail("experiment.kind", "expected dn-check, tw-solve, evolve, stability or props");
    }
  }
  if (j.contains("seed")) {
    if (j["seed"].is_number_unsigned()) x.seed = j["seed"].get<std::uint64_t>();
    else r.fail("experiment.seed", "expected a nonnegative integer");
  }
  std::string dir;
  if (r.string(j, "output_dir", "experiment", dir)) {
    if (dir.empty()) r.fail("experiment.output_dir", "must not be empty");
    x.output_dir = dir;
  }
  std::string initial = "wave";
  r.string(j, "initial", "experiment", initial);
  if (initial == "flat") x.initial = InitialState::kFlat;
  else if (initial != "wave") r.fail("experiment.initial", "expected flat or wave");
  r.integer(j, "samples", "experiment", x.samples, 1, 10000);

  if (j.contains("perturbation")) {
    const json& p = j["perturbation"];
    const std::string pp = "experiment.perturbation";
    if (r.object(p, pp, {"modes", "random", "amplitude", "admission_threshold"})) {
      r.boolean(p, "random", pp, x.random_perturbation);
      r.number(p, "amplitude", pp, x.perturbation.amplitude, 0.0, 1e3);
      r.number(p, "admission_threshold", pp, x.perturbation.admission_threshold, -1.0, 1e6);
      if (p.contains("modes")) {
        x.perturbation.modes.clear();
        const json& modes = p["modes"];
        if (!modes.is_array()) r.fail(pp + ".modes", "expected an array");
        else
          for (std::size_t i = 0; i < modes.size(); ++i) {
            const std::string mp = pp + ".modes[" + std::to_string(i) + "]";
            if (!r.object(modes[i], mp, {"k", "weight", "phase"})) continue;
            lab::ModeAmplitude m;
            const json& k = modes[i].contains("k") ? modes[i]["k"] : json();
            if (k.is_number_integer()) m.k1 = k.get<int>();
            else if (k.is_array() && k.size() == 2 && k[0].is_number_integer() && k[1].is_number_integer())
              m.k1 = k[0].get<int>(), m.k2 = k[1].get<int>();
            else r.fail(mp + ".k", "expected an integer or a pair of integers");
            r.number(modes[i], "weight", mp, m.weight, -1e3, 1e3);
            r.number(modes[i], "phase", mp, m.phase, -1e3, 1e3);
            x.perturbation.modes.push_back(m);
          }
      }
    }
  }
  if (j.contains("amplitudes")) {
    const json& a = j["amplitudes"];
    if (!a.is_array()) r.fail("experiment.amplitudes", "expected an array");
    else
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number() || a[i].get<double>() < 0.0)
          r.fail("experiment.amplitudes[" + std::to_string(i) + "]", "expected a nonnegative number");
        else x.amplitudes.push_back(a[i].get<double>());
      }
    for (std::size_t i = 1; i < x.amplitudes.size(); ++i)
      if (x.amplitudes[i] < x.amplitudes[i - 1]) r.fail("experiment.amplitudes", "must be increasing");
  }
  if (j.contains("fit")) {
    const json& f = j["fit"];
    const std::string fp = "experiment.fit";
    if (r.object(f, fp, {"start_fraction", "floor_factor", "floor", "min_r2", "min_samples"})) {
      r.number(f, "start_fraction", fp, x.window.start_fraction, 0.0, 1.0);
      r.number(f, "floor_factor", fp, x.window.floor_factor, 0.0, 1e12);
      r.number(f, "floor", fp, x.window.floor, 0.0, 1e6);
      r.number(f, "min_r2", fp, x.window.min_r2, 0.0, 1.0);
      r.integer(f, "min_samples", fp, x.window.min_samples, 2, 1000000);
    }
  }
}

json emit_modes_k(int k1, int k2, int dim) { return dim == 1 ? json(k1) : json::array({k1, k2}); }

RunConfig parse_json(const json& doc, std::vector<std::string>& violations) {
  Reader r;
  RunConfig cfg;
  if (r.object(doc, "", {"problem", "solver", "evolution", "experiment"})) {
    if (!doc.contains("problem")) r.fail("problem", "required key missing");
    else read_problem(r, doc["problem"], cfg.problem);
    if (doc.contains("solver")) read_solver(r, doc["solver"], cfg.solver);
    if (doc.contains("evolution")) read_evolution(r, doc["evolution"], cfg.evolution);
    if (doc.contains("experiment")) read_experiment(r, doc["experiment"], cfg.experiment);
    if (cfg.experiment.perturbation.modes.empty() && !cfg.experiment.random_perturbation)
      cfg.experiment.perturbation.modes = {{1, 0, 1.0, 0.0}};
    cfg.experiment.perturbation.s = cfg.solver.s;
    if (!cfg.problem.infinite && cfg.problem.separation_margin >= cfg.problem.depth)
      r.fail("problem.separation_margin", "must be smaller than the depth");
  }
  violations = std::move(r.violations);
  return cfg;
}

std::vector<std::string> parse_text(const std::string& text, RunConfig& cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    return {std::string("(document): invalid JSON: ") + e.what()};
  }
  std::vector<std::string> violations;
  cfg = parse_json(doc, violations);
  return violations;
}

}  // namespace

const char* to_string(RunKind kind) noexcept { return kKinds[static_cast<int>(kind)]; }

RunKind parse_kind(const std::string& name) {
  for (int i = 0; i < 5; ++i)
    if (name == kKinds[i]) return static_cast<RunKind>(i);
  raise(ErrorCode::kInvalidArgument, "unknown run kind '" + name + "'");
}

SurfaceField RunConfig::phi() const {
  const PeriodicGrid grid(problem.dim, problem.n);
  const auto modes = problem.phi;
  return SurfaceField::sample(grid, [&modes](double x1, double x2) {
           double v = 0.0;
           for (const auto& m : modes) v += m.amplitude * std::cos(m.k1 * x1 + m.k2 * x2 + m.phase);
           return v;
         }).without_mean();
}

dn::FluidConfig RunConfig::fluid() const {
  dn::FluidConfig f = problem.infinite ? dn::FluidConfig::infinite(1.0, problem.dim)
                                       : dn::FluidConfig::finite(problem.depth, problem.dim);
  if (problem.separation_margin >= 0.0) f.separation_margin = problem.separation_margin;
  return f;
}

std::vector<std::string> schema_violations(const std::string& text) {
  RunConfig cfg;
  return parse_text(text, cfg);
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  const auto violations = parse_text(text, cfg);
  if (!violations.empty()) {
    std::string msg = "config has " + std::to_string(violations.size()) + " schema violation(s): ";
    for (std::size_t i = 0; i < violations.size(); ++i) msg += (i ? "; " : "") + violations[i];
    raise(ErrorCode::kSchemaViolation, msg);
  }
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) { return parse_config_text(io::read_file(path)); }

std::string emit_config(const RunConfig& cfg) {
  const auto& p = cfg.problem;
  json phi = json::array();
  for (const auto& m : p.phi)
    phi.push_back({{"k", emit_modes_k(m.k1, m.k2, p.dim)}, {"amplitude", m.amplitude}, {"phase", m.phase}});
  json problem = {{"phi", phi}, {"gamma", p.gamma}, {"separation_margin", cfg.fluid().separation_margin}, {"dim", p.dim}, {"n", p.n}};
  problem["depth"] = p.infinite ? json("infinite") : json(p.depth);

  json solver;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, dn::FlatSymbol>) {
          solver["backend"] = "flat";
        } else if constexpr (std::is_same_v<T, dn::CraigSulem>) {
          solver["backend"] = "craig-sulem";
          solver["order"] = b.order;
          solver["dealias"] = b.dealias == DealiasRule::kNone ? "none" : "two-thirds";
        } else {
          solver["backend"] = "mapped-elliptic";
          solver["vertical_points"] = b.vertical_points;
          solver["elliptic_tol"] = b.solver_tol;
          solver["max_elliptic_iterations"] = b.max_iterations;
        }
      },
      cfg.solver.backend);
  solver["tw_tol"] = cfg.solver.tw_tol;
  solver["delta"] = cfg.solver.delta;
  solver["max_iter"] = cfg.solver.max_iter;
  solver["s"] = cfg.solver.s;

  const auto& e = cfg.evolution;
  const char* scheme = e.scheme.scheme == evo::Scheme::kImex1 ? "imex1"
                       : e.scheme.scheme == evo::Scheme::kImex2 ? "imex2"
                                                                : "eps-viscosity";
  json evolution = {{"scheme", scheme},
                    {"epsilon", e.scheme.epsilon},
                    {"dt", e.scheme.dt},
                    {"T", e.horizon},
                    {"record_every", e.record_every},
                    {"dealias", e.scheme.dealias == DealiasRule::kNone ? "none" : "two-thirds"}};

  const auto& x = cfg.experiment;
  json modes = json::array();
  for (const auto& m : x.perturbation.modes)
    modes.push_back({{"k", emit_modes_k(m.k1, m.k2, p.dim)}, {"weight", m.weight}, {"phase", m.phase}});
  json experiment = {
      {"kind", to_string(x.kind)},
      {"seed", x.seed},
      {"output_dir", x.output_dir.string()},
      {"initial", x.initial == InitialState::kFlat ? "flat" : "wave"},
      {"perturbation",
       {{"modes", modes},
        {"random", x.random_perturbation},
        {"amplitude", x.perturbation.amplitude},
        {"admission_threshold", x.perturbation.admission_threshold}}},
      {"amplitudes", x.amplitudes},
      {"fit",
       {{"start_fraction", x.window.start_fraction},
        {"floor_factor", x.window.floor_factor},
        {"floor", x.window.floor},
        {"min_r2", x.window.min_r2},
        {"min_samples", x.window.min_samples}}},
      {"samples", x.samples}};
  json doc = {{"problem", problem}, {"solver", solver}, {"evolution", evolution}, {"experiment", experiment}};
  return doc.dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace waves::harness
