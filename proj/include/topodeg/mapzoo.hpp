#pragma once

#include "topodeg/fields.hpp"

#include <map>
#include <string>
#include <vector>

namespace topodeg {

/// Declared facts about a preset, consumed by the test suites as oracles.
/// `notes` records where each expectation comes from.
struct ZooProperties {
    int det_sign = 0;         // +1 / -1 everywhere, 0 = vanishing or mixed
    bool det_nonneg = false;  // det >= 0 a.e.
    bool injective = false;
    bool sobolev_w1n = false;  // lies in W^{1,n}
    bool smooth = false;       // C^1 on the closed domain
    std::vector<std::pair<Vec, int>> expected_degrees;
    std::vector<std::pair<Vec, bool>> continuity;  // (point, continuous there)
    std::string notes;
};

struct ZooEntry {
    std::string name;
    MapField map;
    ZooProperties props;
};

/// A codimension-1 sheet: the map into R^{n+1} and its unit normal field.
struct SurfaceMap {
    MapField f;
    MapField normal;
};

enum class BarrierKind { None, LogBarrier };

struct EnergySpec {
    BarrierKind theta = BarrierKind::LogBarrier;
    int exponent = 2;  // the n of dist^n
};

struct EnergyResult {
    double value = 0.0;
    bool infinite = false;  // log barrier hit det <= 0
    double stretch_term = 0.0;
    double barrier_term = 0.0;
};

/// Catalogue lookup. Known names: identity, translate, linear, rotation,
/// zpow, winding_boundary, angle, cavitation, diffeo1, fold, spike.
/// Parameters (all optional, defaults in parentheses): translate tx,ty
/// (0.3,-0.2); linear a00,a01,a10,a11 (diag(1,-1)); rotation theta (pi/3);
/// zpow/winding_boundary k (2); spike amplitude (10), res (64).
ZooEntry preset(const std::string& name, const std::map<std::string, double>& params = {});

std::vector<std::string> zoo_names();

/// The canonical zoo instances used by property suites: one entry per
/// catalogue name with default parameters plus zpow:3 and
/// winding_boundary:3.
std::vector<ZooEntry> standard_zoo();

/// Identity grid map with one lattice vertex displaced by `amplitude`.
ZooEntry spike_fixture(const Domain& domain, double amplitude);

/// Surface presets: flat (unit normal (0,0,1)), hemisphere (unit sphere
/// patch, normal = position), graph (x, y, x^2+y^2).
SurfaceMap surface_preset(const std::string& name);

/// Normal field of a parametrized sheet f: R^2 -> R^3 (normalized cross
/// product of the tangent columns, right-handed in parameter order).
MapField normal_field(const MapField& f);

/// The thickened sheet F(x,t) = f(x) + t nu(x) on Omega x (-d, d), with the
/// block gradient (grad f + t grad nu | nu). Requires 0 < d < 1.
MapField tilde_F(const SurfaceMap& surface, double d);

/// Box domain for the thickened sheet: base x (-d, d).
Domain product_domain(const Domain& base, double d, int resolution);

/// Integral of dist^n(grad f, SO(n)) + Theta(det grad f).
EnergyResult elastic_energy(const MapField& map, const Domain& domain, const EnergySpec& spec);

/// Squared distance to SO(n) via singular values with determinant-sign
/// correction.
double dist_to_rotations_squared(const Mat& a);

/// Squared distance of a (n+1) x n differential to the linear isometries.
double dist_to_isometries_squared(const Mat& a);

/// Integral of dist^n(df, O(n,n+1)) + |grad nu|^n over the parameter domain.
EnergyResult immersion_energy(const SurfaceMap& surface, const Domain& domain);

}  // namespace topodeg
