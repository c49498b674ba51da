#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "rnls/field.hpp"
#include "rnls/params.hpp"

namespace rnls {

/// Field snapshot in the RNLS1 binary layout (little-endian):
///
///   "RNLS1\0"                       6 bytes magic
///   version                         u16 (currently 1)
///   dim                             u8
///   for each axis j: n_j, L_j       u32, f64
///   gamma_j for each axis           f64
///   |Omega|, p, t                   f64
///   samples                         (re, im) f64 pairs, row-major
struct Snapshot {
  ComplexField field;
  PhysicsParams params;
  double time = 0.0;
};

inline constexpr std::uint16_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& os, const Snapshot& snap);
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
/// Throws std::runtime_error on bad magic, unsupported version or truncation.
Snapshot read_snapshot(std::istream& is);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace rnls
