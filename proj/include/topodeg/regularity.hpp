#pragma once

#include "topodeg/degree.hpp"
#include "topodeg/fields.hpp"

#include <cstdint>
#include <vector>

namespace topodeg {

/// Per-cell degree raster over a window in the target space. The set E is
/// the union of cells with degree >= 1 and cells flagged as touching the
/// boundary image.
struct ESetRaster {
    int dimension = 0;  // target-space dimension
    Vec lo, hi;         // window corners
    int resolution = 0; // cells per axis
    std::vector<int> degree;
    std::vector<std::uint8_t> boundary_flag;

    std::int64_t cell_total() const;
    Vec cell_center(std::int64_t flat) const;
    Vec cell_size() const;
    bool in_mask(std::int64_t flat) const {
        return boundary_flag[flat] != 0 || degree[flat] >= 1;
    }
    std::vector<std::uint8_t> mask() const;
    /// Max pairwise distance of mask cell centers (boundary cells suffice).
    double mask_diameter() const;
};

ESetRaster degree_region(const MapField& map, const Domain& domain, Vec y_lo, Vec y_hi,
                         int y_resolution, int boundary_resolution = 1024);
/// Window derived from the boundary-image bounding box plus a margin.
ESetRaster degree_region_auto(const MapField& map, const Domain& domain, int y_resolution,
                              int boundary_resolution = 1024);

/// E-rasters of f over shrinking balls around a, intersected on one y-grid.
struct FSetReport {
    Vec a;
    std::vector<double> radii;  // descending
    Vec window_lo, window_hi;
    int y_resolution = 0;
    std::vector<std::vector<std::uint8_t>> masks;  // per radius
    std::vector<double> sphere_osc;                // per radius
    std::vector<double> mask_diam;                 // per radius
    std::vector<std::uint8_t> intersection;
    double diam = 0.0;  // diameter of the intersection mask
    bool empty_intersection = false;

    Vec cell_center(std::int64_t flat) const;
};

FSetReport f_set(const MapField& map, const Domain& domain, const Vec& a,
                 const std::vector<double>& radii, int y_resolution, int sphere_resolution = 512);

/// Sampled essential oscillation of f over B_r(c) intersected with the
/// domain: the trim fraction of samples farthest from the running mean is
/// discarded before taking the diameter.
double essential_oscillation(const MapField& map, const Domain& domain, const Vec& center,
                             double radius, double trim);

struct EoscBoundCheck {
    double eosc = 0.0;
    double sphere_osc = 0.0;
    bool holds = false;
    bool det_nonneg_sampled = true;  // det >= 0 held at all sampled points
};

/// eosc over the ball vs twice the oscillation on its sphere.
EoscBoundCheck eosc_bound_check(const MapField& map, const Domain& domain, const Vec& x,
                                double r, double trim);

struct MorreySphereCheck {
    double osc_pow_n = 0.0;
    double weighted_energy = 0.0;  // r * integral of |df|^n over the sphere
    double ratio = 0.0;            // 0 when both sides vanish
};

MorreySphereCheck morrey_sphere_check(const MapField& map, const Domain& domain, const Vec& a,
                                      double r, int sphere_resolution = 512);

/// Fraction of ball samples mapped outside the smallest ball enclosing the
/// sphere trace. Zero (up to boundary cells) when det >= 0.
double retract_violation_measure(const MapField& map, const Domain& domain, const Vec& x,
                                 double r, int sphere_resolution = 512);

struct RadiusRecord {
    double radius = 0.0;
    double eosc = 0.0;
    double sphere_osc = 0.0;  // NaN when the sphere leaves the domain
    double local_energy = 0.0;  // integral of |grad f|^n over B_{2r}
};

struct PointProfile {
    Vec x;
    std::vector<RadiusRecord> records;
    double diam_f = 0.0;  // finest-radius sphere oscillation
    bool continuous = false;
};

struct OscillationProfile {
    std::vector<PointProfile> points;
    double tol_abs = 0.0;        // eosc acceptance at the finest radius
    double energy_ratio = 0.0;   // required finest/coarsest energy decay
    double grid_modulus = 0.0;   // robust (median) adjacent-sample jump
};

struct ScanOptions {
    std::vector<double> radii;   // geometric, descending, >= 4 levels
    double trim = 1e-3;
    double tol_abs = 0.0;        // 0 = 10 x median adjacent jump
    double energy_ratio = 0.5;
    int sphere_resolution = 256;
};

OscillationProfile continuity_scan(const MapField& map, const Domain& domain,
                                   const std::vector<Vec>& points, const ScanOptions& opts);

/// Median |f(a) - f(b)| over axis-adjacent interior cells; stable against
/// isolated discontinuities, unlike the max-based grid_modulus.
double median_adjacent_jump(const MapField& map, const Domain& domain);

}  // namespace topodeg
