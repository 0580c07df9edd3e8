#include "topodeg/regularity.hpp"

#include <algorithm>
#include <cmath>

namespace topodeg {

std::int64_t ESetRaster::cell_total() const {
    std::int64_t t = 1;
    for (int a = 0; a < dimension; ++a) t *= resolution;
    return t;
}

Vec ESetRaster::cell_size() const {
    return (hi - lo) / static_cast<double>(resolution);
}

Vec ESetRaster::cell_center(std::int64_t flat) const {
    const Vec h = cell_size();
    Vec x(dimension);
    for (int a = dimension - 1; a >= 0; --a) {
        x[a] = lo[a] + (flat % resolution + 0.5) * h[a];
        flat /= resolution;
    }
    return x;
}

std::vector<std::uint8_t> ESetRaster::mask() const {
    std::vector<std::uint8_t> m(cell_total(), 0);
    for (std::int64_t i = 0; i < cell_total(); ++i) m[i] = in_mask(i) ? 1 : 0;
    return m;
}

namespace {

// The diameter of a union of cells is attained on its boundary cells, so
// only cells with a non-mask neighbor (or on the window edge) are scanned.
double mask_diameter_impl(const std::vector<std::uint8_t>& mask, int dim, int res, const Vec& lo,
                          const Vec& h) {
    std::vector<Vec> rim;
    std::array<int, kMaxDim> ix{};
    const std::int64_t total = static_cast<std::int64_t>(mask.size());
    auto flat_of = [&](const std::array<int, kMaxDim>& jx) {
        std::int64_t f = 0;
        for (int a = 0; a < dim; ++a) f = f * res + jx[a];
        return f;
    };
    for (std::int64_t f = 0; f < total; ++f) {
        if (!mask[f]) continue;
        std::int64_t rest = f;
        for (int a = dim - 1; a >= 0; --a) {
            ix[a] = static_cast<int>(rest % res);
            rest /= res;
        }
        bool rim_cell = false;
        for (int a = 0; a < dim && !rim_cell; ++a) {
            for (int off : {-1, 1}) {
                std::array<int, kMaxDim> jx = ix;
                jx[a] += off;
                if (jx[a] < 0 || jx[a] >= res || !mask[flat_of(jx)]) {
                    rim_cell = true;
                    break;
                }
            }
        }
        if (!rim_cell) continue;
        Vec x(dim);
        for (int a = 0; a < dim; ++a) x[a] = lo[a] + (ix[a] + 0.5) * h[a];
        rim.push_back(x);
    }
    return set_diameter(rim);
}

}  // namespace

double ESetRaster::mask_diameter() const {
    return mask_diameter_impl(mask(), dimension, resolution, lo, cell_size());
}

namespace {

// Degree raster against a fixed trace; cells within one image spacing of
// the sampled trace are flagged instead of valued.
ESetRaster raster_from_trace(const BoundaryMesh& mesh, const std::vector<Vec>& values,
                             const Vec& lo, const Vec& hi, int y_res) {
    ESetRaster raster;
    raster.dimension = static_cast<int>(lo.size());
    raster.lo = lo;
    raster.hi = hi;
    raster.resolution = y_res;
    const std::int64_t total = raster.cell_total();
    raster.degree.assign(total, 0);
    raster.boundary_flag.assign(total, 0);
    const double spacing = image_spacing(mesh, values);
    std::vector<int> degrees(total, 0);
    std::vector<std::uint8_t> flags(total, 0);
    parallel_for(total, [&](std::int64_t f) {
        const Vec y = raster.cell_center(f);
        if (image_distance(values, y) <= spacing) {
            flags[f] = 1;
            return;
        }
        degrees[f] = boundary_trace_degree(mesh, values, y);
    });
    raster.degree = std::move(degrees);
    raster.boundary_flag = std::move(flags);
    return raster;
}

std::pair<Vec, Vec> image_bbox(const std::vector<Vec>& values) {
    Vec lo = values.front(), hi = values.front();
    for (const Vec& v : values) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return {lo, hi};
}

}  // namespace

ESetRaster degree_region(const MapField& map, const Domain& domain, Vec y_lo, Vec y_hi,
                         int y_resolution, int boundary_resolution) {
    const BoundaryMesh mesh = boundary_mesh(domain, boundary_resolution);
    const std::vector<Vec> values = boundary_values(map, mesh);
    auto [img_lo, img_hi] = image_bbox(values);
    const double margin = 2.0 * image_spacing(mesh, values) +
                          0.05 * (img_hi - img_lo).norm();
    // Auto-expand so the raster always covers the whole image.
    y_lo = y_lo.cwiseMin(Vec(img_lo.array() - margin));
    y_hi = y_hi.cwiseMax(Vec(img_hi.array() + margin));
    return raster_from_trace(mesh, values, y_lo, y_hi, y_resolution);
}

ESetRaster degree_region_auto(const MapField& map, const Domain& domain, int y_resolution,
                              int boundary_resolution) {
    const BoundaryMesh mesh = boundary_mesh(domain, boundary_resolution);
    const std::vector<Vec> values = boundary_values(map, mesh);
    auto [img_lo, img_hi] = image_bbox(values);
    const double margin = 2.0 * image_spacing(mesh, values) +
                          0.05 * (img_hi - img_lo).norm();
    return raster_from_trace(mesh, values, Vec(img_lo.array() - margin),
                             Vec(img_hi.array() + margin), y_resolution);
}

Vec FSetReport::cell_center(std::int64_t flat) const {
    const int dim = static_cast<int>(window_lo.size());
    const Vec h = (window_hi - window_lo) / static_cast<double>(y_resolution);
    Vec x(dim);
    for (int a = dim - 1; a >= 0; --a) {
        x[a] = window_lo[a] + (flat % y_resolution + 0.5) * h[a];
        flat /= y_resolution;
    }
    return x;
}

FSetReport f_set(const MapField& map, const Domain& domain, const Vec& a,
                 const std::vector<double>& radii, int y_resolution, int sphere_resolution) {
    if (radii.size() < 2) throw std::invalid_argument("f_set: need at least two radii");
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (radii[i] <= radii[i + 1])
            throw std::invalid_argument("f_set: radii must be strictly descending");
    if (domain.dist_to_boundary(a) <= radii.front())
        throw std::domain_error("f_set: largest radius exceeds dist(a, boundary)");

    FSetReport rep;
    rep.a = a;
    rep.radii = radii;
    rep.y_resolution = y_resolution;

    // Common window from the largest sphere's trace.
    std::vector<SphereTrace> traces;
    for (double r : radii)
        traces.push_back(sphere_trace(map, domain, a, r, sphere_resolution));
    auto [lo, hi] = image_bbox(traces.front().values);
    for (const auto& tr : traces) {
        auto [l, h] = image_bbox(tr.values);
        lo = lo.cwiseMin(l);
        hi = hi.cwiseMax(h);
    }
    double margin = 0.0;
    for (const auto& tr : traces)
        margin = std::max(margin, image_spacing(tr.mesh, tr.values));
    margin = 2.0 * margin + 0.05 * (hi - lo).norm() + 1e-9;
    rep.window_lo = lo.array() - margin;
    rep.window_hi = hi.array() + margin;

    for (const auto& tr : traces) {
        const ESetRaster raster =
            raster_from_trace(tr.mesh, tr.values, rep.window_lo, rep.window_hi, y_resolution);
        rep.masks.push_back(raster.mask());
        rep.mask_diam.push_back(raster.mask_diameter());
        rep.sphere_osc.push_back(set_diameter(tr.values));
    }

    rep.intersection = rep.masks.front();
    for (const auto& m : rep.masks)
        for (std::size_t i = 0; i < m.size(); ++i) rep.intersection[i] &= m[i];
    bool any = false;
    for (auto b : rep.intersection) any |= b != 0;
    rep.empty_intersection = !any;
    if (any) {
        const Vec h = (rep.window_hi - rep.window_lo) / static_cast<double>(y_resolution);
        rep.diam = mask_diameter_impl(rep.intersection, static_cast<int>(rep.window_lo.size()),
                                      y_resolution, rep.window_lo, h);
    }
    return rep;
}

namespace {

std::vector<Vec> ball_samples(const MapField& map, const Domain& domain, const Vec& center,
                              double radius) {
    std::vector<Vec> values;
    domain.for_each_cell_in_ball(center, radius,
                                 [&](const Vec& x) { values.push_back(map(x)); });
    return values;
}

// Deterministic thinning that keeps the value-space extremes (so isolated
// spikes survive to be trimmed explicitly, not lost by subsampling).
void cap_samples(std::vector<Vec>& values, std::size_t cap) {
    if (values.size() <= cap) return;
    const int m = static_cast<int>(values.front().size());
    std::vector<std::size_t> keep;
    for (int c = 0; c < m; ++c) {
        std::size_t lo = 0, hi = 0;
        for (std::size_t i = 1; i < values.size(); ++i) {
            if (values[i][c] < values[lo][c]) lo = i;
            if (values[i][c] > values[hi][c]) hi = i;
        }
        keep.push_back(lo);
        keep.push_back(hi);
    }
    const std::size_t stride = (values.size() + cap - 1) / cap;
    std::vector<Vec> out;
    for (std::size_t i = 0; i < values.size(); i += stride) out.push_back(values[i]);
    for (std::size_t i : keep) out.push_back(values[i]);
    values = std::move(out);
}

}  // namespace

double essential_oscillation(const MapField& map, const Domain& domain, const Vec& center,
                             double radius, double trim) {
    if (trim < 0.0 || trim >= 0.1)
        throw std::invalid_argument("essential_oscillation: trim must be in [0, 0.1)");
    std::vector<Vec> values = ball_samples(map, domain, center, radius);
    if (values.size() < 8)
        throw std::runtime_error("essential_oscillation: fewer than 8 samples in the ball");
    cap_samples(values, 4096);
    std::size_t to_trim = static_cast<std::size_t>(trim * values.size());
    while (to_trim-- > 0 && values.size() > 2) {
        Vec mean = Vec::Zero(values.front().size());
        for (const Vec& v : values) mean += v;
        mean /= static_cast<double>(values.size());
        std::size_t far = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double d = (values[i] - mean).norm();
            if (d > best) {
                best = d;
                far = i;
            }
        }
        values.erase(values.begin() + far);
    }
    return set_diameter(values);
}

EoscBoundCheck eosc_bound_check(const MapField& map, const Domain& domain, const Vec& x,
                                double r, double trim) {
    EoscBoundCheck chk;
    const double h = 0.5 * domain.min_cell_size();
    domain.for_each_cell_in_ball(x, r, [&](const Vec& z) {
        if (map.gradient_or_fd(z, h).determinant() < -1e-9) chk.det_nonneg_sampled = false;
    });
    chk.eosc = essential_oscillation(map, domain, x, r, trim);
    const SphereTrace tr = sphere_trace(map, domain, x, r, 512);
    chk.sphere_osc = set_diameter(tr.values);
    chk.holds = chk.eosc <= 2.0 * chk.sphere_osc * 1.05;
    return chk;
}

MorreySphereCheck morrey_sphere_check(const MapField& map, const Domain& domain, const Vec& a,
                                      double r, int sphere_resolution) {
    const int n = map.source_dim();
    const SphereTrace tr = sphere_trace(map, domain, a, r, sphere_resolution);
    MorreySphereCheck chk;
    chk.osc_pow_n = std::pow(set_diameter(tr.values), n);
    double energy = 0.0;
    for (std::size_t e = 0; e < tr.mesh.elements.size(); ++e)
        energy += std::pow(tr.tangential_norm[e], n) * tr.mesh.measures[e];
    chk.weighted_energy = r * energy;
    chk.ratio = chk.weighted_energy > 0.0 ? chk.osc_pow_n / chk.weighted_energy : 0.0;
    return chk;
}

double retract_violation_measure(const MapField& map, const Domain& domain, const Vec& x,
                                 double r, int sphere_resolution) {
    const SphereTrace tr = sphere_trace(map, domain, x, r, sphere_resolution);
    const EnclosingBall hull = smallest_enclosing_ball(tr.values);
    std::int64_t total = 0, outside = 0;
    domain.for_each_cell_in_ball(x, r, [&](const Vec& z) {
        ++total;
        if ((map(z) - hull.center).norm() > hull.radius * (1.0 + 1e-9) + 1e-12) ++outside;
    });
    if (total == 0) throw std::runtime_error("retract_violation_measure: empty ball");
    return static_cast<double>(outside) / static_cast<double>(total);
}

double median_adjacent_jump(const MapField& map, const Domain& domain) {
    const int n = domain.dimension();
    const int res = domain.resolution();
    std::vector<double> jumps;
    std::array<int, kMaxDim> ix{};
    auto visit = [&](const std::array<int, kMaxDim>& idx) {
        const Vec x = domain.cell_center(idx);
        if (!domain.contains(x)) return;
        const Vec fx = map(x);
        for (int a = 0; a < n; ++a) {
            if (idx[a] + 1 >= res) continue;
            std::array<int, kMaxDim> jx = idx;
            jx[a] += 1;
            const Vec y = domain.cell_center(jx);
            if (!domain.contains(y)) continue;
            jumps.push_back((map(y) - fx).norm());
        }
    };
    if (n == 2) {
        for (ix[0] = 0; ix[0] < res; ++ix[0])
            for (ix[1] = 0; ix[1] < res; ++ix[1]) visit(ix);
    } else {
        for (ix[0] = 0; ix[0] < res; ++ix[0])
            for (ix[1] = 0; ix[1] < res; ++ix[1])
                for (ix[2] = 0; ix[2] < res; ++ix[2]) visit(ix);
    }
    if (jumps.empty()) return 0.0;
    std::nth_element(jumps.begin(), jumps.begin() + jumps.size() / 2, jumps.end());
    return jumps[jumps.size() / 2];
}

OscillationProfile continuity_scan(const MapField& map, const Domain& domain,
                                   const std::vector<Vec>& points, const ScanOptions& opts) {
    if (opts.radii.size() < 4)
        throw std::invalid_argument("continuity_scan: need >= 4 radius levels");
    for (std::size_t i = 0; i + 1 < opts.radii.size(); ++i)
        if (opts.radii[i] <= opts.radii[i + 1])
            throw std::invalid_argument("continuity_scan: radii must be descending");

    OscillationProfile profile;
    profile.grid_modulus = median_adjacent_jump(map, domain);
    profile.tol_abs = opts.tol_abs > 0.0 ? opts.tol_abs : 10.0 * profile.grid_modulus;
    profile.energy_ratio = opts.energy_ratio;
    const int n = map.source_dim();

    for (const Vec& x : points) {
        PointProfile pp;
        pp.x = x;
        const double rx = domain.dist_to_boundary(x);
        double coarsest_energy = 0.0, finest_energy = 0.0;
        double finest_eosc = std::numeric_limits<double>::quiet_NaN();
        double finest_sphere = std::numeric_limits<double>::quiet_NaN();
        for (double r : opts.radii) {
            RadiusRecord rec;
            rec.radius = r;
            rec.eosc = essential_oscillation(map, domain, x, r, opts.trim);
            rec.sphere_osc = std::numeric_limits<double>::quiet_NaN();
            if (r < rx) {
                const SphereTrace tr =
                    sphere_trace(map, domain, x, r, opts.sphere_resolution);
                rec.sphere_osc = set_diameter(tr.values);
                finest_sphere = rec.sphere_osc;
            }
            rec.local_energy = local_sobolev_energy(map, domain, x, 2.0 * r, n);
            if (coarsest_energy == 0.0) coarsest_energy = rec.local_energy;
            finest_energy = rec.local_energy;
            finest_eosc = rec.eosc;
            pp.records.push_back(rec);
        }
        pp.diam_f = std::isnan(finest_sphere) ? finest_eosc : finest_sphere;
        const bool eosc_ok = finest_eosc < profile.tol_abs;
        const bool energy_ok =
            coarsest_energy <= 0.0 || finest_energy <= profile.energy_ratio * coarsest_energy;
        pp.continuous = eosc_ok && energy_ok;
        profile.points.push_back(std::move(pp));
    }
    return profile;
}

}  // namespace topodeg
