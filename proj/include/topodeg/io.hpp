#pragma once

#include "topodeg/fields.hpp"
#include "topodeg/regularity.hpp"

#include <string>

namespace topodeg {

/// Shortest decimal form that parses back to the same IEEE double.
std::string format_double(double v);

/// Grid map file: one JSON header line {name, n, m, domain, resolution,
/// order}, a CSV column header, then one row of m decimal floats per
/// lattice vertex (row-major, last axis fastest). Round-trips bit-exactly.
void save_grid_map(const MapField& map, const std::string& path);
MapField load_grid_map(const std::string& path);

/// ASCII PGM of a 2-d degree raster: pixel = degree + 128 (clamped to
/// 0..254), boundary-flagged cells = 255. Rows run from high to low y.
void write_pgm(const ESetRaster& raster, const std::string& path, const std::string& header);

}  // namespace topodeg
