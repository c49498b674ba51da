#include "rnls/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace rnls {

namespace {

constexpr std::array<char, 6> kMagic{'R', 'N', 'L', 'S', '1', '\0'};

template <typename T>
void put(std::ostream& os, T value) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!is.read(reinterpret_cast<char*>(bytes.data()), sizeof(T)))
    throw std::runtime_error("RNLS1: truncated stream");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(std::ostream& os, const Snapshot& snap) {
  const Grid& g = snap.field.grid();
  os.write(kMagic.data(), kMagic.size());
  put<std::uint16_t>(os, kSnapshotVersion);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(g.dim));
  for (int a = 0; a < g.dim; ++a) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.points[a]));
    put<double>(os, g.half_width[a]);
  }
  for (int a = 0; a < g.dim; ++a) put<double>(os, snap.params.gammas[a]);
  put<double>(os, snap.params.omega_rot);
  put<double>(os, snap.params.p);
  put<double>(os, snap.time);
  for (const auto& v : snap.field.values()) {
    put<double>(os, v.real());
    put<double>(os, v.imag());
  }
  if (!os) throw std::runtime_error("RNLS1: write failed");
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("RNLS1: cannot open " + path.string());
  write_snapshot(os, snap);
}

Snapshot read_snapshot(std::istream& is) {
  std::array<char, 6> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw std::runtime_error("RNLS1: bad magic");
  const auto version = get<std::uint16_t>(is);
  if (version != kSnapshotVersion)
    throw std::runtime_error("RNLS1: unsupported version " + std::to_string(version));
  const int dim = get<std::uint8_t>(is);
  if (dim != 2 && dim != 3) throw std::runtime_error("RNLS1: bad dimension");
  std::array<double, 3> L{};
  std::array<std::size_t, 3> n{};
  for (int a = 0; a < dim; ++a) {
    n[a] = get<std::uint32_t>(is);
    L[a] = get<double>(is);
  }
  Snapshot snap;
  snap.params.dim = dim;
  for (int a = 0; a < dim; ++a) snap.params.gammas[a] = get<double>(is);
  snap.params.omega_rot = get<double>(is);
  snap.params.p = get<double>(is);
  snap.time = get<double>(is);
  GridPtr grid = make_grid(dim, std::span(L.data(), dim), std::span(n.data(), dim));
  std::vector<cplx> values(grid->size());
  for (auto& v : values) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    v = {re, im};
  }
  snap.field = ComplexField(grid, std::move(values));
  return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("RNLS1: cannot open " + path.string());
  return read_snapshot(is);
}

}  // namespace rnls
