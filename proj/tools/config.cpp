#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rnls/groundstate.hpp"
#include "rnls/reference_q.hpp"

namespace rnls::cli {

namespace pt = boost::property_tree;

namespace {

constexpr std::pair<Scenario, const char*> kScenarioNames[] = {
    {Scenario::q_reference, "q-reference"}, {Scenario::spectrum, "spectrum"},
    {Scenario::groundstate, "groundstate"}, {Scenario::evolve, "evolve"},
    {Scenario::classify, "classify"},       {Scenario::stability, "stability"},
    {Scenario::sweep, "sweep"},             {Scenario::ls1_trend, "ls1-trend"},
};

const std::set<std::string> kKnownKeys{
    "scenario", "seed", "threads",
    "output.dir",
    "grid.dim", "grid.half_width", "grid.points",
    "physics.p", "physics.gamma", "physics.omega", "physics.lomega_sign",
    "solver.tol", "solver.max_iterations", "solver.perturb", "solver.source", "solver.omega", "solver.q",
    "solver.r", "solver.q_list", "solver.omega_list", "solver.rescaled_half_width",
    "reference.tol", "reference.cache_dir",
    "initial.kind", "initial.amplitude", "initial.width", "initial.charge", "initial.center",
    "initial.path",
    "evolve.dt", "evolve.horizon", "evolve.sample_every", "evolve.growth_factor",
    "evolve.tail_threshold", "evolve.dt_shrink", "evolve.snapshot_every",
    "classify.l_mode", "classify.evolve",
    "stability.kind", "stability.deltas", "stability.horizon", "stability.scaling_sign",
    "stability.epsilon_factor", "stability.linear_spread",
};

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  template <class T>
  void get(const std::string& key, T& out) const {
    auto node = tree_.get_child_optional(pt::ptree::path_type(key, '.'));
    if (!node) return;
    const std::string raw = node->data();
    if constexpr (std::is_same_v<T, std::string>) {
      out = raw;
    } else if constexpr (std::is_same_v<T, std::filesystem::path>) {
      out = raw;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (raw == "true" || raw == "1" || raw == "yes") out = true;
      else if (raw == "false" || raw == "0" || raw == "no") out = false;
      else throw ConfigError(key, "expected a boolean, got '" + raw + "'");
    } else {
      std::istringstream is(raw);
      T v{};
      if (!(is >> v) || !(is >> std::ws).eof())
        throw ConfigError(key, "expected a number, got '" + raw + "'");
      out = v;
    }
  }

  template <class T>
  void get_list(const std::string& key, std::vector<T>& out) const {
    auto node = tree_.get_child_optional(pt::ptree::path_type(key, '.'));
    if (!node) return;
    std::string raw = node->data();
    std::replace(raw.begin(), raw.end(), ',', ' ');
    std::istringstream is(raw);
    std::vector<T> v;
    std::string tok;
    while (is >> tok) {
      std::istringstream ts(tok);
      T x{};
      if (!(ts >> x) || !ts.eof()) throw ConfigError(key, "bad list entry '" + tok + "'");
      v.push_back(x);
    }
    if (v.empty()) throw ConfigError(key, "empty list");
    out = std::move(v);
  }

 private:
  const pt::ptree& tree_;
};

void check_unknown(const pt::ptree& tree) {
  for (const auto& [section, node] : tree) {
    if (node.empty()) {
      if (!kKnownKeys.count(section)) throw ConfigError(section, "unknown key");
      continue;
    }
    for (const auto& [key, leaf] : node) {
      const std::string path = section + "." + key;
      if (!kKnownKeys.count(path)) throw ConfigError(path, "unknown key");
    }
  }
}

bool needs_trap_below_rotation(Scenario s) {
  return s == Scenario::spectrum || s == Scenario::groundstate || s == Scenario::stability ||
         s == Scenario::sweep || s == Scenario::ls1_trend;
}

}  // namespace

std::string to_string(Scenario s) {
  for (auto [v, name] : kScenarioNames)
    if (v == s) return name;
  return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (auto [v, n] : kScenarioNames)
    if (name == n) return v;
  return std::nullopt;
}

GridPtr GridSpec::make() const {
  std::vector<double> hw(dim);
  std::vector<std::size_t> pts(dim);
  for (int a = 0; a < dim; ++a) {
    hw[a] = half_width.size() == 1 ? half_width[0] : half_width.at(a);
    pts[a] = points.size() == 1 ? points[0] : points.at(a);
  }
  return make_grid(dim, hw, pts);
}

ExperimentConfig parse_config(std::istream& in, std::optional<Scenario> expected) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig c;
  c.source_text = buffer.str();

  pt::ptree tree;
  try {
    std::istringstream is(c.source_text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message());
  }
  check_unknown(tree);
  const Reader r(tree);

  std::string name;
  r.get("scenario", name);
  if (!name.empty()) {
    auto s = parse_scenario(name);
    if (!s) throw ConfigError("scenario", "unknown scenario '" + name + "'");
    if (expected && *expected != *s)
      throw ConfigError("scenario", "config is for '" + name + "', not '" + to_string(*expected) + "'");
    c.scenario = *s;
  } else if (expected) {
    c.scenario = *expected;
  } else {
    throw ConfigError("scenario", "missing");
  }

  r.get("seed", c.seed);
  r.get("threads", c.threads);
  r.get("output.dir", c.out_dir);

  r.get("grid.dim", c.grid.dim);
  r.get_list("grid.half_width", c.grid.half_width);
  r.get_list("grid.points", c.grid.points);

  c.physics.dim = c.grid.dim;
  r.get("physics.p", c.physics.p);
  std::vector<double> gammas;
  r.get_list("physics.gamma", gammas);
  if (!gammas.empty()) {
    if (gammas.size() != 1 && static_cast<int>(gammas.size()) != c.grid.dim)
      throw ConfigError("physics.gamma", "give one value or one per axis");
    for (std::size_t a = 0; a < 3; ++a)
      c.physics.gammas[a] = gammas.size() == 1 ? gammas[0] : a < gammas.size() ? gammas[a] : 1.0;
  }
  r.get("physics.omega", c.physics.omega_rot);
  r.get("physics.lomega_sign", c.physics.lomega_sign);

  r.get("solver.tol", c.solver.tol);
  r.get("solver.max_iterations", c.solver.max_iterations);
  r.get("solver.perturb", c.solver.perturb);
  r.get("solver.source", c.solver.source);
  r.get("solver.omega", c.solver.omega);
  r.get("solver.q", c.solver.q);
  r.get("solver.r", c.solver.r);
  r.get_list("solver.q_list", c.solver.q_list);
  r.get_list("solver.omega_list", c.solver.omega_list);
  r.get("solver.rescaled_half_width", c.solver.rescaled_half_width);

  r.get("reference.tol", c.reference.tol);
  r.get("reference.cache_dir", c.reference.cache_dir);

  r.get("initial.kind", c.initial.kind);
  r.get("initial.amplitude", c.initial.amplitude);
  r.get("initial.width", c.initial.width);
  r.get("initial.charge", c.initial.charge);
  r.get_list("initial.center", c.initial.center);
  c.initial.center.resize(3, 0.0);
  r.get("initial.path", c.initial.path);

  r.get("evolve.dt", c.evolve.dt);
  r.get("evolve.horizon", c.evolve.horizon);
  r.get("evolve.sample_every", c.evolve.sample_every);
  r.get("evolve.growth_factor", c.evolve.growth_factor);
  r.get("evolve.tail_threshold", c.evolve.tail_threshold);
  r.get("evolve.dt_shrink", c.evolve.dt_shrink);
  r.get("evolve.snapshot_every", c.evolve.snapshot_every);

  r.get("classify.l_mode", c.classify.l_mode);
  r.get("classify.evolve", c.classify.evolve);

  r.get("stability.kind", c.stability.kind);
  r.get_list("stability.deltas", c.stability.deltas);
  r.get("stability.horizon", c.stability.horizon);
  r.get("stability.scaling_sign", c.stability.scaling_sign);
  r.get("stability.epsilon_factor", c.stability.epsilon_factor);
  r.get("stability.linear_spread", c.stability.linear_spread);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<Scenario> expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  return parse_config(in, expected);
}

std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> v;
  auto add = [&](const std::string& key, const std::string& msg) { v.push_back(key + ": " + msg); };

  if (c.threads < 1) add("threads", "must be >= 1");
  if (!(c.solver.tol > 0.0)) add("solver.tol", "must be positive");
  if (c.solver.max_iterations < 1) add("solver.max_iterations", "must be >= 1");
  for (const auto& s : c.physics.violations()) v.push_back(s);
  try {
    c.grid.make();
  } catch (const std::exception& e) {
    add("grid", e.what());
  }

  const Scenario s = c.scenario;
  if (needs_trap_below_rotation(s) && !(c.physics.omega_rot < c.physics.gamma_min()))
    add("physics.omega", "variational scenarios need |Omega| < min gamma");

  if (s == Scenario::classify) {
    const double sc = c.physics.s_c();
    if (!(sc > 0.0 && sc < 1.0))
      add("physics.p", "classify needs 0 < s_c < 1 (p = 1 + 4/N gives s_c = 0)");
    static const std::set<std::string> modes{"auto", "isotropic_exact", "trajectory_min",
                                             "smalldata_bound"};
    if (!modes.count(c.classify.l_mode)) add("classify.l_mode", "unknown mode '" + c.classify.l_mode + "'");
    if (c.classify.l_mode == "isotropic_exact" && !c.physics.isotropic())
      add("classify.l_mode", "isotropic_exact needs equal trap frequencies");
  }

  if (s == Scenario::evolve || s == Scenario::classify) {
    static const std::set<std::string> kinds{"gaussian", "vortex", "snapshot"};
    if (!kinds.count(c.initial.kind)) add("initial.kind", "unknown kind '" + c.initial.kind + "'");
    if (c.initial.kind == "snapshot" && c.initial.path.empty()) add("initial.path", "required for snapshot data");
    if (!(c.initial.width > 0.0)) add("initial.width", "must be positive");
  }

  if (s == Scenario::evolve || s == Scenario::classify || s == Scenario::stability) {
    if (c.evolve.dt == 0.0 || !std::isfinite(c.evolve.dt)) add("evolve.dt", "must be finite and nonzero");
    if (!(c.evolve.horizon > 0.0)) add("evolve.horizon", "must be positive");
    if (c.evolve.sample_every < 1) add("evolve.sample_every", "must be >= 1");
    if (!(c.evolve.growth_factor > 1.0)) add("evolve.growth_factor", "must exceed 1");
    if (!(c.evolve.tail_threshold > 0.0)) add("evolve.tail_threshold", "must be positive");
  }

  if (s == Scenario::groundstate || s == Scenario::stability || s == Scenario::sweep) {
    if (c.solver.source != "nehari" && c.solver.source != "local")
      add("solver.source", "must be nehari or local");
    const bool local = c.solver.source == "local" || s == Scenario::sweep;
    std::vector<double> qs = s == Scenario::sweep ? c.solver.q_list : std::vector<double>{c.solver.q};
    if (s == Scenario::sweep && qs.empty()) add("solver.q_list", "required for sweep");
    if (local && c.physics.violations().empty() && c.physics.omega_rot < c.physics.gamma_min()) {
      if (!(c.solver.r > 0.0)) add("solver.r", "must be positive");
      const double sc = c.physics.s_c();
      if (!(sc > 0.0 && sc < 1.0)) {
        add("physics.p", "the local problem needs 1 + 4/N < p < 2*");
      } else if (c.solver.r > 0.0) {
        const QProfile q = solve_q(c.physics.dim, c.physics.p, c.reference.tol);
        const auto spec = make_local_spec(1.0, c.solver.r, c.physics, q.c_gn);
        for (double m : qs) {
          if (!(m > 0.0)) add(s == Scenario::sweep ? "solver.q_list" : "solver.q", "must be positive");
          else if (!(m < spec.q0_estimate))
            add(s == Scenario::sweep ? "solver.q_list" : "solver.q",
                "q = " + std::to_string(m) + " is not below the q0 estimate " +
                    std::to_string(spec.q0_estimate));
        }
      }
    }
  }

  if (s == Scenario::stability) {
    if (c.stability.kind != "random" && c.stability.kind != "scaling")
      add("stability.kind", "must be random or scaling");
    for (std::size_t i = 0; i < c.stability.deltas.size(); ++i) {
      if (c.stability.deltas[i] < 0.0) add("stability.deltas", "must be nonnegative");
      if (i > 0 && !(c.stability.deltas[i] < c.stability.deltas[i - 1]))
        add("stability.deltas", "must be strictly decreasing");
    }
    if (!(c.stability.horizon > 0.0)) add("stability.horizon", "must be positive");
    if (c.stability.kind == "scaling" && !c.physics.mass_supercritical())
      add("stability.kind", "scaling perturbations need 0 < s_c < 1 for the indicator");
  }

  if (s == Scenario::ls1_trend) {
    if (c.solver.omega_list.empty()) add("solver.omega_list", "required for ls1-trend");
    double prev = 0.0;
    for (double w : c.solver.omega_list) {
      if (!(w > prev)) {
        add("solver.omega_list", "must be positive and strictly increasing");
        break;
      }
      prev = w;
    }
    if (!(c.solver.rescaled_half_width > 0.0)) add("solver.rescaled_half_width", "must be positive");
  }

  if (s == Scenario::q_reference) {
    const double sc = c.physics.s_c();
    if (sc >= 1.0) add("physics.p", "Q exists only below the energy-critical exponent");
  }
  return v;
}

}  // namespace rnls::cli
