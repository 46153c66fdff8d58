#pragma once

#include <string>

#include "inls/grid.hpp"

namespace inls {

// Binary field snapshot, little-endian:
//   magic "INLS" | u32 version | u8 grid kind (0 radial, 1 cartesian)
//   u32 n | u32 l | u32 N (radial) or n x u32 M (cartesian)
//   f64 r_max (radial) or f64 L (cartesian)
//   l*N complex samples as (f64 re, f64 im), component-major.
// Writes go to a temp file followed by an atomic rename.
void write_snapshot(const std::string& path, const Field& field);
Field read_snapshot(const std::string& path);

}  // namespace inls
