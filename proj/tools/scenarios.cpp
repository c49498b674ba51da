#include "scenarios.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "rnls/classify.hpp"
#include "rnls/diagnostics.hpp"
#include "rnls/dynamics.hpp"
#include "rnls/groundstate.hpp"
#include "rnls/json_io.hpp"
#include "rnls/reference_q.hpp"
#include "rnls/snapshot.hpp"
#include "rnls/spectrum.hpp"
#include "rnls/stability.hpp"

#ifndef RNLS_VERSION
#define RNLS_VERSION "unknown"
#endif

namespace rnls::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context {
  const ExperimentConfig& config;
  std::ostream& log;
  json results = json::object();
  std::vector<std::string> artifacts;
  std::uint64_t solver_seed = 0;
  std::uint64_t perturbation_seed = 0;
  std::mutex mutex;

  Context(const ExperimentConfig& c, std::ostream& l) : config(c), log(l) {
    std::mt19937_64 rng(c.seed);
    solver_seed = rng();
    perturbation_seed = rng();
  }

  fs::path path(const std::string& name) {
    std::lock_guard lock(mutex);
    artifacts.push_back(name);
    const fs::path p = config.out_dir / name;
    fs::create_directories(p.parent_path());
    return p;
  }

  void write_json(const std::string& name, const json& j) {
    std::ofstream os(path(name));
    os << j.dump(2) << '\n';
  }

  void write_snapshot(const std::string& name, const ComplexField& f, const PhysicsParams& p, double t) {
    rnls::write_snapshot(path(name), Snapshot{f, p, t});
  }

  void note(const std::string& line) {
    std::lock_guard lock(mutex);
    log << "[rnls] " << line << '\n';
  }

  SolverOptions solver_options() const {
    SolverOptions o;
    o.tol = config.solver.tol;
    o.max_iterations = config.solver.max_iterations;
    o.seed = config.solver.perturb ? solver_seed : 0;
    return o;
  }
};

template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t count = std::min<std::size_t>(std::max(threads, 1), n);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

json config_json(const ExperimentConfig& c) {
  return json{
      {"scenario", to_string(c.scenario)},
      {"grid", {{"dim", c.grid.dim}, {"half_width", c.grid.half_width}, {"points", c.grid.points}}},
      {"physics", c.physics},
      {"solver",
       {{"tol", c.solver.tol}, {"max_iterations", c.solver.max_iterations},
        {"perturb", c.solver.perturb}, {"source", c.solver.source}, {"omega", c.solver.omega}, {"q", c.solver.q},
        {"r", c.solver.r}, {"q_list", c.solver.q_list}, {"omega_list", c.solver.omega_list},
        {"rescaled_half_width", c.solver.rescaled_half_width}}},
      {"reference", {{"tol", c.reference.tol}, {"cache_dir", c.reference.cache_dir.string()}}},
      {"initial",
       {{"kind", c.initial.kind}, {"amplitude", c.initial.amplitude}, {"width", c.initial.width},
        {"charge", c.initial.charge}, {"center", c.initial.center},
        {"path", c.initial.path.string()}}},
      {"evolve",
       {{"dt", c.evolve.dt}, {"horizon", c.evolve.horizon}, {"sample_every", c.evolve.sample_every},
        {"growth_factor", c.evolve.growth_factor}, {"tail_threshold", c.evolve.tail_threshold},
        {"dt_shrink", c.evolve.dt_shrink}, {"snapshot_every", c.evolve.snapshot_every}}},
      {"classify", {{"l_mode", c.classify.l_mode}, {"evolve", c.classify.evolve}}},
      {"stability",
       {{"kind", c.stability.kind}, {"deltas", c.stability.deltas},
        {"horizon", c.stability.horizon}, {"scaling_sign", c.stability.scaling_sign},
        {"epsilon_factor", c.stability.epsilon_factor},
        {"linear_spread", c.stability.linear_spread}}},
      {"output_dir", c.out_dir.string()},
      {"seed", c.seed},
      {"threads", c.threads},
  };
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

QProfile reference_profile(Context& ctx, int dim, double p) {
  bool hit = false;
  const auto& c = ctx.config;
  QProfile q = load_or_solve_q(dim, p, c.reference.tol, c.reference.cache_dir, &hit);
  const fs::path file = c.reference.cache_dir / q_cache_name(dim, p, c.reference.tol);
  ctx.note(std::string(hit ? "cache hit: " : "cache miss, solved and stored: ") + file.string());
  return q;
}

ComplexField initial_field(const ExperimentConfig& c, PhysicsParams& params) {
  const InitialSpec& in = c.initial;
  if (in.kind == "snapshot") {
    Snapshot s = read_snapshot(in.path);
    if (s.field.grid().dim != params.dim)
      throw std::invalid_argument("initial.path: snapshot dimension differs from physics.dim");
    return std::move(s.field);
  }
  const GridPtr grid = c.grid.make();
  const double w2 = in.width * in.width;
  const bool vortex = in.kind == "vortex";
  return ComplexField::sample(grid, [&](const Point& x) {
    double r2 = 0.0;
    std::array<double, 3> y{};
    for (int a = 0; a < grid->dim; ++a) {
      y[a] = x[a] - in.center[a];
      r2 += y[a] * y[a];
    }
    const double g = in.amplitude * std::exp(-0.5 * r2 / w2);
    return vortex ? cplx{y[0], in.charge * y[1]} * g : cplx{g, 0.0};
  });
}

GroundState compute_ground_state(Context& ctx) {
  const auto& c = ctx.config;
  const GridPtr grid = c.grid.make();
  if (c.solver.source == "local") {
    const QProfile q = reference_profile(ctx, c.physics.dim, c.physics.p);
    const auto spec = make_local_spec(c.solver.q, c.solver.r, c.physics, q.c_gn);
    ctx.note("local minimization at q = " + std::to_string(c.solver.q));
    return minimize_local(spec, c.physics, grid, ctx.solver_options());
  }
  ctx.note("Nehari minimization at omega = " + std::to_string(c.solver.omega));
  return minimize_nehari(c.solver.omega, c.physics, grid, ctx.solver_options());
}

json ground_state_report(const GroundState& gs) {
  json j = gs;
  j["certification"] = certify(gs);
  if (gs.params.mass_supercritical()) j["instability_indicator"] = instability_indicator(gs);
  if (gs.omega > 0.0) j["rescaled"] = rescale_to_unit_frequency(gs);
  return j;
}

EvolveOptions evolve_options(const ExperimentConfig& c) {
  EvolveOptions o;
  o.horizon = c.evolve.horizon;
  o.dt = c.evolve.dt;
  o.sample_every = c.evolve.sample_every;
  o.monitor.growth_factor = c.evolve.growth_factor;
  o.monitor.tail_threshold = c.evolve.tail_threshold;
  o.dt_shrink = c.evolve.dt_shrink;
  return o;
}

// Runs the flow with CSV streaming and periodic snapshots.
Trajectory run_flow(Context& ctx, SimState& state) {
  const auto& c = ctx.config;
  std::ofstream csv(ctx.path("trajectory.csv"));
  csv << kDiagnosticsCsvHeader << '\n';
  EvolveOptions o = evolve_options(c);
  int sample = 0;
  o.on_sample = [&](const SimState& s, const DiagnosticsRow& row) {
    write_csv_row(csv, row);
    if (c.evolve.snapshot_every > 0 && sample % c.evolve.snapshot_every == 0) {
      std::ostringstream name;
      name << "snapshots/sample_" << std::setw(6) << std::setfill('0') << sample << ".rnls1";
      ctx.write_snapshot(name.str(), s.field, s.params, s.t);
    }
    ++sample;
  };
  ctx.note("evolving to t = " + std::to_string(o.horizon) + " with dt = " + std::to_string(o.dt));
  try {
    Trajectory tr = evolve(state, o);
    ctx.write_snapshot("final.rnls1", state.field, state.params, state.t);
    json meta = tr;
    meta["grid"] = state.field.grid();
    meta["params"] = state.params;
    meta["horizon"] = o.horizon;
    meta["sample_every"] = o.sample_every;
    ctx.write_json("trajectory.json", meta);
    ctx.note("termination: " + to_string(tr.termination) + " at t = " + std::to_string(state.t));
    return tr;
  } catch (const NonFiniteStateError& e) {
    const SimState& good = e.last_good();
    ctx.write_snapshot("last_good.rnls1", good.field, good.params, good.t);
    throw;
  }
}

int run_q_reference(Context& ctx) {
  const auto& c = ctx.config;
  const QProfile q = reference_profile(ctx, c.physics.dim, c.physics.p);
  json j{{"profile", q}};
  if (q.s_c() > 0.0 && q.s_c() < 1.0) j["thresholds"] = thresholds(q, q.mass);
  ctx.write_json("q_profile.json", j);
  ctx.results = {{"mass", q.mass}, {"c_gn", q.c_gn}, {"certified", q.certified}};
  return q.certified ? kOk : kSolverFailure;
}

int run_spectrum(Context& ctx) {
  const auto& c = ctx.config;
  EigenOptions eo;
  eo.tol = c.solver.tol;
  eo.max_iterations = c.solver.max_iterations;
  const EigenResult r = lowest_eigenpair(c.grid.make(), c.physics, eo);
  json j = r;
  j["spectral_lower_bound"] = spectral_lower_bound(c.physics);
  ctx.write_json("spectrum.json", j);
  std::ofstream hist(ctx.path("spectrum_history.csv"));
  hist << "iteration,rayleigh_quotient\n" << std::setprecision(17);
  for (std::size_t i = 0; i < r.history.size(); ++i) hist << i << ',' << r.history[i] << '\n';
  ctx.write_snapshot("eigenfield.rnls1", r.eigenfield, c.physics, 0.0);
  ctx.results = {{"lambda0", r.lambda0}, {"converged", r.converged}};
  return r.converged ? kOk : kSolverFailure;
}

int run_groundstate(Context& ctx) {
  const GroundState gs = compute_ground_state(ctx);
  json j = ground_state_report(gs);
  if (gs.source == GroundStateSource::local) {
    const auto& c = ctx.config;
    const QProfile q = reference_profile(ctx, c.physics.dim, c.physics.p);
    const auto spec = make_local_spec(c.solver.q, c.solver.r, c.physics, q.c_gn);
    j["local_spec"] = spec;
    j["wellposedness_gap"] = wellposedness_gap(spec, c.solver.q);
  }
  ctx.write_json("groundstate.json", j);
  ctx.write_snapshot("groundstate.rnls1", gs.field, gs.params, 0.0);
  ctx.results = {{"omega", gs.omega}, {"converged", gs.converged},
                 {"certified", j["certification"]["passed"]}};
  return gs.converged ? kOk : kSolverFailure;
}

int run_evolve(Context& ctx) {
  PhysicsParams params = ctx.config.physics;
  SimState state{initial_field(ctx.config, params), params, 0.0, 0};
  const Trajectory tr = run_flow(ctx, state);
  ctx.results = {{"termination", to_string(tr.termination)}, {"t_final", state.t}};
  switch (tr.termination) {
    case Termination::horizon_reached: return kOk;
    case Termination::blowup_detected: return kBlowup;
    case Termination::resolution_lost: return kSolverFailure;
  }
  return kSolverFailure;
}

int run_classify(Context& ctx) {
  const auto& c = ctx.config;
  PhysicsParams params = c.physics;
  const ComplexField u0 = initial_field(c, params);
  const QProfile q = reference_profile(ctx, params.dim, params.p);

  std::string mode = c.classify.l_mode;
  if (mode == "auto") mode = params.isotropic() ? "isotropic_exact" : "trajectory_min";
  const bool flow = c.classify.evolve || mode == "trajectory_min";

  std::optional<Trajectory> tr;
  if (flow) {
    SimState state{u0, params, 0.0, 0};
    tr = run_flow(ctx, state);
  }
  LEstimate l;
  if (mode == "isotropic_exact") l = estimate_l_isotropic(u0, params);
  else if (mode == "smalldata_bound") l = estimate_l_smalldata(u0, params, q);
  else l = estimate_l(*tr);
  if (!l.certified) {
    ctx.write_json("classification.json", json{{"l", l}, {"verdict", "unclassified"},
                                               {"reason", "small-data bound not certified"}});
    ctx.results = {{"verdict", "unclassified"}};
    return kOk;
  }

  const ClassificationReport r = classify(u0, params, q, l);
  json j = r;
  if (tr && r.verdict == Verdict::negative_energy_blowup)
    j["gradient_lower_bound"] = check_gradient_lowerbound(*tr, r, c.evolve.tail_threshold);
  ctx.write_json("classification.json", j);
  ctx.note("verdict: " + to_string(r.verdict));
  ctx.results = {{"verdict", to_string(r.verdict)}};
  if (tr) ctx.results["termination"] = to_string(tr->termination);
  return kOk;
}

int run_stability(Context& ctx) {
  const auto& c = ctx.config;
  const GroundState gs = compute_ground_state(ctx);
  StabilityOptions o;
  o.kind = c.stability.kind == "scaling" ? PerturbationKind::scaling : PerturbationKind::random;
  o.seed = ctx.perturbation_seed;
  o.scaling_sign = c.stability.scaling_sign;
  o.dt = c.evolve.dt;
  o.sample_every = c.evolve.sample_every;
  o.epsilon_factor = c.stability.epsilon_factor;
  o.linear_spread = c.stability.linear_spread;
  ctx.note("perturbing with " + c.stability.kind + " directions");
  const StabilityReport rep = stability_experiment(gs, c.stability.deltas, c.stability.horizon, o);
  ctx.write_json("stability.json", json{{"report", rep}, {"ground_state", gs}});
  std::ofstream csv(ctx.path("stability.csv"));
  csv << "delta,initial_distance,sup_distance,ratio,time_of_sup,termination\n" << std::setprecision(17);
  for (const auto& r : rep.runs)
    csv << r.delta << ',' << r.initial_distance << ',' << r.sup_distance << ',' << r.ratio << ','
        << r.time_of_sup << ',' << to_string(r.termination) << '\n';
  ctx.results = {{"stability_evidence", rep.stability_evidence},
                 {"instability_evidence", rep.instability_evidence}};
  return kOk;
}

int run_sweep(Context& ctx) {
  const auto& c = ctx.config;
  const QProfile q = reference_profile(ctx, c.physics.dim, c.physics.p);
  const GridPtr grid = c.grid.make();
  const auto& qs = c.solver.q_list;
  std::vector<json> rows(qs.size());
  parallel_for(qs.size(), c.threads, [&](std::size_t i) {
    const auto spec = make_local_spec(qs[i], c.solver.r, c.physics, q.c_gn);
    const GroundState gs = minimize_local(spec, c.physics, grid, ctx.solver_options());
    json j = ground_state_report(gs);
    std::ostringstream name;
    name << "sweep/q_" << std::setw(3) << std::setfill('0') << i;
    ctx.write_json(name.str() + ".json", j);
    ctx.write_snapshot(name.str() + ".rnls1", gs.field, gs.params, 0.0);
    rows[i] = j;
    ctx.note("q = " + std::to_string(qs[i]) + ": omega - lambda0 = " + std::to_string(gs.omega - gs.lambda0));
  });
  std::ofstream csv(ctx.path("sweep.csv"));
  csv << "q,omega,lambda0,omega_minus_lambda0,energy,relative_residual,converged,certified\n"
      << std::setprecision(17);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const json& j = rows[i];
    const double w = j["omega"], l0 = j["lambda0"];
    csv << qs[i] << ',' << w << ',' << l0 << ',' << w - l0 << ',' << j["energy"].get<double>() << ','
        << j["relative_residual"].get<double>() << ',' << j["converged"].get<bool>() << ','
        << j["certification"]["passed"].get<bool>() << '\n';
  }
  ctx.artifacts.push_back("sweep/");
  ctx.results = {{"points", qs.size()}};
  return kOk;
}

int run_ls1(Context& ctx) {
  const auto& c = ctx.config;
  const QProfile q = reference_profile(ctx, c.physics.dim, c.physics.p);
  const auto& ws = c.solver.omega_list;
  std::vector<Ls1Point> pts(ws.size());
  parallel_for(ws.size(), c.threads, [&](std::size_t i) {
    pts[i] = ls1_trend(c.physics, {ws[i]}, c.solver.rescaled_half_width, c.grid.points.front(),
                       ctx.solver_options())
                 .front();
    ctx.note("omega = " + std::to_string(ws[i]) + ": " + std::to_string(pts[i].quantity));
  });
  const double eta = 0.1 * q.lp1;
  bool decreasing = true, below = false;
  std::ofstream csv(ctx.path("ls1.csv"));
  csv << "omega,quantity,lp1,relative_residual,converged\n" << std::setprecision(17);
  json list = json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    decreasing = decreasing && (i == 0 || p.quantity < pts[i - 1].quantity);
    below = below || p.quantity < eta;
    csv << p.omega << ',' << p.quantity << ',' << p.lp1 << ',' << p.relative_residual << ','
        << p.converged << '\n';
    list.push_back({{"omega", p.omega}, {"quantity", p.quantity}, {"lp1", p.lp1},
                    {"relative_residual", p.relative_residual}, {"converged", p.converged}});
  }
  ctx.write_json("ls1.json", json{{"eta", eta}, {"strictly_decreasing", decreasing},
                                  {"falls_below_eta", below}, {"points", list}});
  ctx.results = {{"strictly_decreasing", decreasing}, {"falls_below_eta", below}};
  return kOk;
}

}  // namespace

int report_validation(const ExperimentConfig& config, std::ostream& log) {
  const auto v = validate(config);
  if (v.empty()) {
    log << "config valid for scenario " << to_string(config.scenario) << '\n';
    return kOk;
  }
  for (const auto& s : v) log << "config error: " << s << '\n';
  return kConfigError;
}

int run(const ExperimentConfig& config, std::ostream& log) {
  Context ctx(config, log);
  fs::create_directories(config.out_dir);
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();

  int code = kSolverFailure;
  std::string error;
  try {
    switch (config.scenario) {
      case Scenario::q_reference: code = run_q_reference(ctx); break;
      case Scenario::spectrum: code = run_spectrum(ctx); break;
      case Scenario::groundstate: code = run_groundstate(ctx); break;
      case Scenario::evolve: code = run_evolve(ctx); break;
      case Scenario::classify: code = run_classify(ctx); break;
      case Scenario::stability: code = run_stability(ctx); break;
      case Scenario::sweep: code = run_sweep(ctx); break;
      case Scenario::ls1_trend: code = run_ls1(ctx); break;
    }
  } catch (const std::exception& e) {
    error = e.what();
    ctx.note(std::string("solver failure: ") + e.what());
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest{
      {"scenario", to_string(config.scenario)},
      {"config", config_json(config)},
      {"config_text", config.source_text},
      {"seed", config.seed},
      {"derived_seeds", {{"solver", ctx.solver_seed}, {"perturbation", ctx.perturbation_seed}}},
      {"threads", config.threads},
      {"versions", {{"rnls", RNLS_VERSION}, {"compiler", __VERSION__}, {"cplusplus", __cplusplus}}},
      {"started_at", started},
      {"wall_time_s", wall},
      {"exit_code", code},
      {"results", ctx.results},
      {"artifacts", ctx.artifacts},
  };
  if (!error.empty()) manifest["error"] = error;
  std::ofstream(config.out_dir / "manifest.json") << manifest.dump(2) << '\n';
  return code;
}

}  // namespace rnls::cli
