#include <cstring>
#include <filesystem>
#include <sstream>

#include "../common/fields.hpp"
#include "doctest.h"
#include "rnls/snapshot.hpp"

using namespace rnls;
using namespace rnls::testing;

TEST_CASE("snapshot round trip is bit exact") {
  const std::vector<double> hw{6.0, 4.0};
  const std::vector<std::size_t> n{32, 16};
  auto g = make_grid(2, hw, n);
  Snapshot s{random_smooth(g, 5), params2d(5.0, 0.2, 1.0, 1.5), 1.25};
  std::stringstream buf;
  write_snapshot(buf, s);
  const std::string bytes = buf.str();
  CHECK(bytes.size() == 6 + 2 + 1 + 2 * (4 + 8) + 2 * 8 + 3 * 8 + 32 * 16 * 16);
  CHECK(std::memcmp(bytes.data(), "RNLS1\0", 6) == 0);

  Snapshot r = read_snapshot(buf);
  CHECK(r.field.grid().same_shape(*g));
  CHECK(r.time == 1.25);
  CHECK(r.params.p == 5.0);
  CHECK(r.params.omega_rot == 0.2);
  CHECK(r.params.gammas[1] == 1.5);
  bool same = true;
  for (std::size_t i = 0; i < r.field.size(); ++i) same = same && r.field[i] == s.field[i];
  CHECK(same);
}

TEST_CASE("snapshot layout is little endian") {
  auto g = make_cubic_grid(2, 2.0, 8);
  ComplexField f(g);
  f[0] = cplx{1.0, 0.0};
  std::stringstream buf;
  write_snapshot(buf, Snapshot{f, params2d(3.0), 0.0});
  const std::string b = buf.str();
  CHECK(static_cast<unsigned char>(b[6]) == 1);  // version low byte
  CHECK(static_cast<unsigned char>(b[7]) == 0);
  CHECK(static_cast<unsigned char>(b[8]) == 2);  // dim
  CHECK(static_cast<unsigned char>(b[9]) == 8);  // n_0 low byte
}

TEST_CASE("snapshot reader rejects corrupt input") {
  auto g = make_cubic_grid(2, 2.0, 8);
  std::stringstream buf;
  write_snapshot(buf, Snapshot{gaussian(g), params2d(3.0), 0.0});
  std::string b = buf.str();

  std::string bad_magic = b;
  bad_magic[0] = 'X';
  std::stringstream s1(bad_magic);
  CHECK_THROWS_AS(read_snapshot(s1), std::runtime_error);

  std::string bad_version = b;
  bad_version[6] = 9;
  std::stringstream s2(bad_version);
  CHECK_THROWS_AS(read_snapshot(s2), std::runtime_error);

  std::stringstream s3(b.substr(0, b.size() - 5));
  CHECK_THROWS_AS(read_snapshot(s3), std::runtime_error);
}

TEST_CASE("snapshot file round trip") {
  auto g = make_cubic_grid(3, 3.0, 8);
  PhysicsParams pp;
  pp.dim = 3;
  pp.p = 3.0;
  Snapshot s{random_smooth(g, 2), pp, 0.5};
  const auto path = std::filesystem::temp_directory_path() / "rnls_snapshot_test.rnls";
  write_snapshot(path, s);
  Snapshot r = read_snapshot(path);
  std::filesystem::remove(path);
  CHECK(r.field.grid().dim == 3);
  CHECK(max_abs(r.field - s.field) == 0.0);
}
