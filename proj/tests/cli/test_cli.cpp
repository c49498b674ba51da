#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "doctest.h"
#include "scenarios.hpp"

using namespace rnls::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ExperimentConfig parse(const std::string& text, std::optional<Scenario> s = std::nullopt) {
  std::istringstream in(text);
  return parse_config(in, s);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rnls_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int exit_status(const std::string& cmd) {
  const int raw = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

const std::string kSmallEvolve = R"(
scenario = evolve
[grid]
dim = 2
half_width = 6
points = 32
[physics]
p = 3
omega = 0.3
[initial]
kind = vortex
amplitude = 0.5
[evolve]
dt = 1e-2
horizon = 0.2
sample_every = 2
snapshot_every = 5
)";

}  // namespace

TEST_CASE("parsing sections, lists and defaults") {
  auto c = parse(R"(
scenario = groundstate
seed = 7
[grid]
dim = 2
half_width = 6, 8
points = 64 128
[physics]
p = 5
gamma = 1, 1.5
omega = 0.2
[solver]
omega = 2.5
)");
  CHECK(c.scenario == Scenario::groundstate);
  CHECK(c.seed == 7u);
  CHECK(c.grid.half_width == std::vector<double>{6.0, 8.0});
  CHECK(c.grid.points == std::vector<std::size_t>{64, 128});
  CHECK(c.physics.gammas[1] == 1.5);
  CHECK(c.physics.lomega_sign == -1);
  CHECK(c.solver.omega == 2.5);
  CHECK(c.evolve.growth_factor == 50.0);
  auto g = c.grid.make();
  CHECK(g->points[1] == 128u);
  CHECK(validate(c).empty());
}

TEST_CASE("errors carry the key path") {
  auto key_of = [](const std::string& text) {
    try {
      parse(text, Scenario::evolve);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of("[evolve]\ndt = fast\n") == "evolve.dt");
  CHECK(key_of("[evolve]\ndtt = 1\n") == "evolve.dtt");
  CHECK(key_of("[grid]\npoints = 64 x\n") == "grid.points");
  CHECK(key_of("[classify]\nevolve = maybe\n") == "classify.evolve");
  CHECK(key_of("scenario = spectrum\n") == "scenario");
  CHECK(key_of("scenario = bogus\n") == "scenario");
  CHECK_THROWS_AS(parse("[grid]\ndim = 2\n"), ConfigError);  // no scenario at all
}

TEST_CASE("static validation") {
  auto gs = parse("[physics]\np = 5\ngamma = 1\nomega = 1\n", Scenario::groundstate);
  auto v = validate(gs);
  REQUIRE(v.size() == 1u);
  CHECK(v[0].rfind("physics.omega", 0) == 0);

  auto critical = parse("[physics]\np = 3\n", Scenario::classify);
  v = validate(critical);
  REQUIRE(v.size() == 1u);
  CHECK(v[0].rfind("physics.p", 0) == 0);

  CHECK(validate(parse("[physics]\np = 5\nomega = 0.2\n", Scenario::classify)).empty());

  auto local = parse("[physics]\np = 5\nomega = 0.2\n[solver]\nsource = local\nq = 5\n",
                     Scenario::groundstate);
  v = validate(local);
  REQUIRE(v.size() == 1u);
  CHECK(v[0].find("q0 estimate") != std::string::npos);

  auto stab = parse("[physics]\np = 5\n[stability]\ndeltas = 1e-3 1e-2\n", Scenario::stability);
  CHECK(validate(stab).size() == 1u);

  auto ls1 = parse("[physics]\np = 5\n[solver]\nomega_list = 2 1\n", Scenario::ls1_trend);
  CHECK(validate(ls1).size() == 1u);

  auto bad_grid = parse("[grid]\npoints = 100\n", Scenario::evolve);
  CHECK(validate(bad_grid).size() == 1u);
}

TEST_CASE("classify scenario reports K_plus for the bundled config") {
  auto c = load_config(fs::path(RNLS_EXAMPLES_DIR) / "classify_kplus.ini", Scenario::classify);
  const fs::path out = scratch("classify");
  c.out_dir = out;
  c.reference.cache_dir = out / "cache";
  std::ostringstream log;
  CHECK(run(c, log) == kOk);
  const json j = json::parse(slurp(out / "classification.json"));
  CHECK(j["verdict"] == "K_plus");
  const json m = json::parse(slurp(out / "manifest.json"));
  CHECK(m["exit_code"] == 0);
  CHECK(m["config"]["physics"]["omega_rot"] == 0.2);
  CHECK(m["config_text"].get<std::string>().find("amplitude = 0.6") != std::string::npos);
  CHECK(m.contains("wall_time_s"));
}

TEST_CASE("reference profile is cached") {
  const fs::path out = scratch("qref");
  auto c = parse("[physics]\np = 5\n", Scenario::q_reference);
  c.out_dir = out;
  c.reference.cache_dir = out / "cache";
  std::ostringstream first, second;
  CHECK(run(c, first) == kOk);
  CHECK(first.str().find("cache miss") != std::string::npos);
  CHECK(run(c, second) == kOk);
  CHECK(second.str().find("cache hit") != std::string::npos);
  CHECK(json::parse(slurp(out / "q_profile.json"))["profile"]["certified"] == true);
}

TEST_CASE("identical configs reproduce artifacts byte for byte") {
  auto c = parse(kSmallEvolve);
  const fs::path a = scratch("repro_a"), b = scratch("repro_b");
  std::ostringstream log;
  c.out_dir = a;
  REQUIRE(run(c, log) == kOk);
  c.out_dir = b;
  REQUIRE(run(c, log) == kOk);
  for (const char* f : {"trajectory.csv", "trajectory.json", "final.rnls1", "snapshots/sample_000005.rnls1"}) {
    CAPTURE(f);
    const std::string first = slurp(a / f);
    CHECK(!first.empty());
    CHECK(first == slurp(b / f));
  }
  std::istringstream csv(slurp(a / "trajectory.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 14);
    ++rows;
  }
  CHECK(rows == 1 + 11);  // header, samples at steps 0, 2, ..., 20
}

TEST_CASE("sweep writes one state per mass and an aggregate table") {
  auto c = load_config(fs::path(RNLS_EXAMPLES_DIR) / "sweep.ini", Scenario::sweep);
  const fs::path out = scratch("sweep");
  c.out_dir = out;
  c.reference.cache_dir = out / "cache";
  c.solver.q_list = {0.02, 0.01};
  std::ostringstream log;
  CHECK(run(c, log) == kOk);
  std::istringstream csv(slurp(out / "sweep.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 2);
  CHECK(fs::exists(out / "sweep/q_001.json"));
  CHECK(fs::exists(out / "sweep/q_001.rnls1"));
}

TEST_CASE("executable exit codes") {
  const std::string exe = RNLS_EXE;
  const fs::path dir = scratch("exe");
  const fs::path good = dir / "good.ini";
  std::ofstream(good) << kSmallEvolve;
  CHECK(exit_status(exe + " evolve --config " + good.string() + " --out " + (dir / "o1").string()) == 0);
  CHECK(exit_status(exe + " validate --config " + good.string()) == 0);
  CHECK(exit_status(exe + " evolve --validate-only --config " + good.string()) == 0);

  const fs::path bad = dir / "bad.ini";
  std::ofstream(bad) << "scenario = evolve\n[evolve]\ndt = 0\n";
  CHECK(exit_status(exe + " evolve --config " + bad.string()) == 2);
  CHECK(exit_status(exe + " spectrum --config " + good.string()) == 2);

  const fs::path blow = dir / "blow.ini";
  std::ofstream(blow) << "scenario = evolve\n[grid]\nhalf_width = 6\npoints = 128\n"
                         "[physics]\np = 5\nomega = 0.2\n"
                         "[initial]\namplitude = 2.3\nwidth = 0.5\n"
                         "[evolve]\ndt = 1e-4\nhorizon = 0.2\nsample_every = 5\ngrowth_factor = 2\n";
  CHECK(exit_status(exe + " evolve --config " + blow.string() + " --out " + (dir / "o2").string()) == 4);
  const json m = json::parse(slurp(dir / "o2/manifest.json"));
  CHECK(m["results"]["termination"] == "blowup_detected");
}
