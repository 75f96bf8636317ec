#pragma once

#include <filesystem>
#include <string>

#include "qlens/grid.hpp"

namespace qlens::tdse {

// Binary layout, little-endian:
//   u64 n1, u64 n2, f64 x1_min, x1_max, x2_min, x2_max,
//   then n1*n2 (re, im) f64 pairs, row-major with q1 fastest.

void write_snapshot(const std::filesystem::path& path, const ComplexField2D& field);
ComplexField2D read_snapshot(const std::filesystem::path& path);

/// Writes `path` plus `path` + ".json" describing layout, time and engine.
void write_snapshot_with_sidecar(const std::filesystem::path& path, const ComplexField2D& field,
                                 double t, const std::string& engine, double v0);

}  // namespace qlens::tdse
