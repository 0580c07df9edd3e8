#include "topodeg/bmo.hpp"

#include "topodeg/degree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace topodeg {

namespace {

int auto_level(int n, int radial_level) {
    if (radial_level > 0) return radial_level;
    return n == 2 ? 24 : 10;
}

Vec ball_mean(const MapField& map, const Vec& x, double eps, int level) {
    Vec acc = Vec::Zero(map.target_dim());
    double wsum = 0.0;
    ball_quadrature(map.source_dim(), x, eps, level, [&](const Vec& z, double w) {
        acc += w * map(z);
        wsum += w;
    });
    return acc / wsum;
}

std::vector<Vec> modulus_lattice(const Domain& domain, double eps) {
    // Center-anchored lattice so scale-invariant maps see the same centers
    // (notably the exact domain center) at every eps.
    const double pitch = std::max(eps, domain.min_feature() / 12.0);
    const Vec c = domain.center();
    const Vec lo = domain.bounding_lo(), hi = domain.bounding_hi();
    const int n = domain.dimension();
    std::array<int, kMaxDim> lo_i{}, hi_i{};
    for (int a = 0; a < n; ++a) {
        lo_i[a] = static_cast<int>(std::floor((lo[a] - c[a]) / pitch));
        hi_i[a] = static_cast<int>(std::ceil((hi[a] - c[a]) / pitch));
    }
    std::vector<Vec> centers;
    std::array<int, kMaxDim> ix{};
    auto emit = [&](const std::array<int, kMaxDim>& idx) {
        Vec x(n);
        for (int a = 0; a < n; ++a) x[a] = c[a] + idx[a] * pitch;
        if (domain.contains(x) && domain.dist_to_boundary(x) > eps) centers.push_back(x);
    };
    if (n == 2) {
        for (ix[0] = lo_i[0]; ix[0] <= hi_i[0]; ++ix[0])
            for (ix[1] = lo_i[1]; ix[1] <= hi_i[1]; ++ix[1]) emit(ix);
    } else {
        for (ix[0] = lo_i[0]; ix[0] <= hi_i[0]; ++ix[0])
            for (ix[1] = lo_i[1]; ix[1] <= hi_i[1]; ++ix[1])
                for (ix[2] = lo_i[2]; ix[2] <= hi_i[2]; ++ix[2]) emit(ix);
    }
    return centers;
}

}  // namespace

double mean_oscillation(const MapField& map, const Domain& domain, const Vec& x, double eps,
                        int radial_level) {
    if (!domain.contains(x) || domain.dist_to_boundary(x) <= eps)
        throw std::domain_error("mean_oscillation: inadmissible ball (eps >= dist to boundary)");
    const int level = auto_level(map.source_dim(), radial_level);
    const Vec mean = ball_mean(map, x, eps, level);
    double acc = 0.0, wsum = 0.0;
    ball_quadrature(map.source_dim(), x, eps, level, [&](const Vec& z, double w) {
        acc += w * (map(z) - mean).norm();
        wsum += w;
    });
    return acc / wsum;
}

BmoPlan make_bmo_plan(const Domain& domain, std::uint64_t seed, int num_scales,
                      double base_scale, int max_centers_per_scale) {
    if (num_scales < 4) throw std::invalid_argument("make_bmo_plan: need >= 4 scales");
    BmoPlan plan;
    plan.seed = seed;
    const double base = base_scale > 0.0 ? base_scale : 0.2 * domain.min_feature();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-0.25, 0.25);
    const int n = domain.dimension();
    for (int k = 0; k < num_scales; ++k) {
        const double eps = base * std::pow(0.5, k);
        plan.scales.push_back(eps);
        const double pitch = std::max(eps, domain.min_feature() / 8.0);
        const Vec lo = domain.bounding_lo(), hi = domain.bounding_hi();
        std::array<int, kMaxDim> counts{};
        for (int a = 0; a < n; ++a)
            counts[a] = std::max(1, static_cast<int>(std::floor((hi[a] - lo[a]) / pitch)));
        int emitted = 0;
        std::array<int, kMaxDim> ix{};
        auto emit = [&](const std::array<int, kMaxDim>& idx) {
            if (emitted >= max_centers_per_scale) return;
            Vec x(n);
            for (int a = 0; a < n; ++a)
                x[a] = lo[a] + (idx[a] + 0.5 + unit(rng)) * pitch;
            if (domain.contains(x) && domain.dist_to_boundary(x) > eps) {
                plan.balls.push_back({x, eps});
                ++emitted;
            }
        };
        if (n == 2) {
            for (ix[0] = 0; ix[0] < counts[0]; ++ix[0])
                for (ix[1] = 0; ix[1] < counts[1]; ++ix[1]) emit(ix);
        } else {
            for (ix[0] = 0; ix[0] < counts[0]; ++ix[0])
                for (ix[1] = 0; ix[1] < counts[1]; ++ix[1])
                    for (ix[2] = 0; ix[2] < counts[2]; ++ix[2]) emit(ix);
        }
    }
    return plan;
}

BmoProfile bmo_seminorm(const MapField& map, const Domain& domain, const BmoPlan& plan) {
    if (plan.balls.empty()) throw std::invalid_argument("bmo_seminorm: empty plan");
    BmoProfile profile;
    profile.plan = plan;
    std::map<double, double> per_scale;
    std::vector<double> osc(plan.balls.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(plan.balls.size()), [&](std::int64_t i) {
        osc[i] = mean_oscillation(map, domain, plan.balls[i].center, plan.balls[i].eps);
    });
    for (std::size_t i = 0; i < plan.balls.size(); ++i) {
        profile.seminorm = std::max(profile.seminorm, osc[i]);
        auto& slot = per_scale[plan.balls[i].eps];
        slot = std::max(slot, osc[i]);
    }
    for (double eps : plan.scales) profile.modulus.emplace_back(eps, per_scale[eps]);
    return profile;
}

std::vector<std::pair<double, double>> vmo_modulus(const MapField& map, const Domain& domain,
                                                   const std::vector<double>& eps_list) {
    std::vector<std::pair<double, double>> table;
    for (double eps : eps_list) {
        const std::vector<Vec> centers = modulus_lattice(domain, eps);
        std::vector<double> osc(centers.size(), 0.0);
        parallel_for(static_cast<std::int64_t>(centers.size()), [&](std::int64_t i) {
            osc[i] = mean_oscillation(map, domain, centers[i], eps);
        });
        double best = 0.0;
        for (double o : osc) best = std::max(best, o);
        table.emplace_back(eps, best);
    }
    return table;
}

MapField reflect_extend(const MapField& map, const Domain& domain) {
    const Domain dom = domain;
    const MapField inner = map;
    return MapField::analytic(
        map.source_dim(), map.target_dim(), map.name() + "_reflected",
        [inner, dom](const Vec& x) -> Vec {
            const double sd = dom.signed_distance(x);
            if (sd <= 0.0) return inner(x);
            if (sd > dom.tube_width())
                throw std::domain_error("reflect_extend: evaluation outside the tube");
            return inner(tubular_project(dom, x).reflection);
        });
}

namespace {

// Normalized mollifier eta on the unit ball.
double eta_unit(double s2, int n) {
    if (s2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s2)) / bump_integral(n, 1.0);
}

}  // namespace

MapField mollify(const MapField& extended, const Domain& domain, double eps, int cache_res) {
    const int n = extended.source_dim();
    if (eps <= 0.0 || eps >= 0.8 * domain.tube_width())
        throw std::domain_error("mollify: eps must be below 0.8 x tube width");
    const Vec span = domain.bounding_hi() - domain.bounding_lo();
    int res = cache_res;
    if (res <= 0) {
        // Queried lattice vertices sit within h sqrt(n) of the domain; keep
        // their kernel supports inside the tube.
        const double h_max = (domain.tube_width() - eps) / (1.2 * std::sqrt(double(n)));
        res = std::max(domain.resolution() / 2,
                       static_cast<int>(std::ceil(span.maxCoeff() / h_max)));
        res = std::max(res, 16);
    }
    const Domain lattice = domain.kind() == DomainKind::Ball
                               ? Domain::ball(domain.center(), domain.radius(), res)
                               : Domain::box(domain.bounding_lo(), domain.bounding_hi(), res);
    const int level = n == 2 ? 10 : 5;
    const double reach = domain.tube_width() - eps;

    const int v = res + 1;
    std::int64_t count = 1;
    for (int a = 0; a < n; ++a) count *= v;
    std::vector<double> samples(count * extended.target_dim(), 0.0);
    const Vec h = lattice.cell_size();
    parallel_for(count, [&](std::int64_t flat) {
        std::int64_t rest = flat;
        std::array<int, kMaxDim> ix{};
        for (int a = n - 1; a >= 0; --a) {
            ix[a] = static_cast<int>(rest % v);
            rest /= v;
        }
        Vec p(n);
        for (int a = 0; a < n; ++a) p[a] = domain.bounding_lo()[a] + ix[a] * h[a];
        if (domain.signed_distance(p) > reach) return;  // never interpolated from
        Vec acc = Vec::Zero(extended.target_dim());
        double mass = 0.0;
        ball_quadrature(n, p, eps, level, [&](const Vec& z, double w) {
            const double k = eta_unit((z - p).squaredNorm() / (eps * eps), n) * w;
            if (k <= 0.0) return;
            acc += k * extended(z);
            mass += k;
        });
        const Vec val = acc / mass;
        for (int c = 0; c < extended.target_dim(); ++c)
            samples[flat * extended.target_dim() + c] = val[c];
    });
    return MapField::from_grid(lattice, extended.target_dim(), std::move(samples), 1,
                               extended.name() + "_mollified");
}

MapField average_field(const MapField& map, const Domain& domain, double eps, int cache_res) {
    const int n = map.source_dim();
    const Domain inner = inner_domain(domain, eps);
    const Vec span = inner.bounding_hi() - inner.bounding_lo();
    int res = cache_res;
    if (res <= 0) {
        // Interpolation stencils of points in Omega_eps must stay inside
        // Omega so every cached ball average is defined.
        const double h_max = 0.85 * eps / std::sqrt(double(n));
        res = std::max(std::min(domain.resolution(), 64),
                       static_cast<int>(std::ceil(span.maxCoeff() / h_max)));
    }
    const Domain lattice = inner.kind() == DomainKind::Ball
                               ? Domain::ball(inner.center(), inner.radius(), res)
                               : Domain::box(inner.bounding_lo(), inner.bounding_hi(), res);
    const int level = n == 2 ? 12 : 4;
    const int v = res + 1;
    std::int64_t count = 1;
    for (int a = 0; a < n; ++a) count *= v;
    std::vector<double> samples(count * map.target_dim(), 0.0);
    const Vec h = lattice.cell_size();
    parallel_for(count, [&](std::int64_t flat) {
        std::int64_t rest = flat;
        std::array<int, kMaxDim> ix{};
        for (int a = n - 1; a >= 0; --a) {
            ix[a] = static_cast<int>(rest % v);
            rest /= v;
        }
        Vec p(n);
        for (int a = 0; a < n; ++a) p[a] = lattice.bounding_lo()[a] + ix[a] * h[a];
        if (domain.signed_distance(p) >= 0.9 * eps) return;  // ball misses the domain
        const Vec val = lebesgue_average(map, domain, p, eps, level);
        for (int c = 0; c < map.target_dim(); ++c)
            samples[flat * map.target_dim() + c] = val[c];
    });
    return MapField::from_grid(lattice, map.target_dim(), std::move(samples), 1,
                               map.name() + "_avg");
}

EssentialRangeModel essential_range(const std::vector<Vec>& trace_values,
                                    const std::vector<double>& measures,
                                    double mass_cutoff_frac, int bins) {
    if (trace_values.empty() || trace_values.size() != measures.size())
        throw std::invalid_argument("essential_range: mismatched trace samples");
    const int m = static_cast<int>(trace_values.front().size());
    Vec lo = trace_values.front(), hi = trace_values.front();
    for (const Vec& val : trace_values) {
        lo = lo.cwiseMin(val);
        hi = hi.cwiseMax(val);
    }
    Vec width = (hi - lo) / bins;
    for (int a = 0; a < m; ++a) width[a] = std::max(width[a], 1e-12);

    std::map<std::int64_t, std::size_t> index;
    EssentialRangeModel model;
    for (std::size_t i = 0; i < trace_values.size(); ++i) {
        std::int64_t flat = 0;
        for (int a = 0; a < m; ++a) {
            int cell = static_cast<int>((trace_values[i][a] - lo[a]) / width[a]);
            cell = std::clamp(cell, 0, bins - 1);
            flat = flat * bins + cell;
        }
        auto [it, inserted] = index.try_emplace(flat, model.bin_mass.size());
        if (inserted) {
            Vec center(m);
            std::int64_t rest = flat;
            for (int a = m - 1; a >= 0; --a) {
                center[a] = lo[a] + (rest % bins + 0.5) * width[a];
                rest /= bins;
            }
            model.bin_centers.push_back(center);
            model.bin_mass.push_back(0.0);
            model.bin_values.emplace_back();
        }
        model.bin_mass[it->second] += measures[i];
        model.bin_values[it->second].push_back(trace_values[i]);
        model.total_mass += measures[i];
    }
    model.cutoff_mass = mass_cutoff_frac * model.total_mass;
    return model;
}

double EssentialRangeModel::distance(const Vec& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < bin_mass.size(); ++b) {
        if (bin_mass[b] <= cutoff_mass) continue;
        for (const Vec& val : bin_values[b]) best = std::min(best, (val - p).norm());
    }
    return best;
}

double essential_range_distance(const std::vector<Vec>& trace_values,
                                const std::vector<double>& measures, const Vec& p,
                                double mass_cutoff_frac) {
    return essential_range(trace_values, measures, mass_cutoff_frac).distance(p);
}

double boundary_ball_margin(const MapField& map, const Domain& domain, const Vec& p,
                            int offset_levels, int mesh_resolution) {
    const BoundaryMesh mesh = boundary_mesh(domain, mesh_resolution);
    const int n = domain.dimension();
    double margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < offset_levels; ++j) {
        const double delta = 0.5 * domain.tube_width() * std::pow(0.5, j);
        for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
            const Vec x =
                mesh.element_centroid(static_cast<int>(e)) -
                delta * mesh.outward_normal(static_cast<int>(e));
            if (!domain.contains(x)) continue;
            double acc = 0.0, wsum = 0.0;
            ball_quadrature(n, x, delta, n == 2 ? 8 : 4, [&](const Vec& z, double w) {
                if (domain.signed_distance(z) >= 0.0) return;
                acc += w * (map(z) - p).norm();
                wsum += w;
            });
            if (wsum > 0.0) margin = std::min(margin, acc / wsum);
        }
    }
    return std::isfinite(margin) ? margin : 0.0;
}

VmoDegreeReport vmo_degree(const MapField& map, const Domain& domain, const Vec& p,
                           const std::vector<double>& schedule, const VmoDegreeOptions& opts) {
    if (schedule.size() < 3)
        throw std::invalid_argument("vmo_degree: schedule needs >= 3 levels");
    VmoDegreeReport rep;
    rep.p = p;
    rep.schedule = schedule;
    rep.margin_d0 = boundary_ball_margin(map, domain, p);
    if (rep.margin_d0 <= opts.margin_floor)
        throw std::domain_error("vmo_degree: boundary margin below the floor (no degree)");

    for (double eps : schedule) {
        const MapField avg = average_field(map, domain, eps, opts.cache_res);
        const Domain inner = inner_domain(domain, eps);
        const BoundaryMesh mesh = boundary_mesh(inner, opts.boundary_resolution);
        const std::vector<Vec> values = boundary_values(avg, mesh);
        std::optional<int> deg;
        try {
            deg = boundary_trace_degree(mesh, values, p);
        } catch (const std::domain_error&) {
            deg = std::nullopt;  // trace through p at this level
        }
        rep.degrees.push_back(deg);
    }
    const std::size_t k = rep.degrees.size();
    if (k >= 3 && rep.degrees[k - 1] && rep.degrees[k - 2] && rep.degrees[k - 3] &&
        *rep.degrees[k - 1] == *rep.degrees[k - 2] &&
        *rep.degrees[k - 2] == *rep.degrees[k - 3]) {
        rep.stabilized = true;
        rep.value = *rep.degrees[k - 1];
    }
    return rep;
}

CovCheckReport vmo_change_of_variables_check(const MapField& map, const Domain& domain,
                                             const Vec& p, double bump_radius,
                                             const std::vector<double>& schedule,
                                             const VmoDegreeOptions& opts) {
    const BoundaryMesh mesh = boundary_mesh(domain, opts.boundary_resolution);
    const std::vector<Vec> values = boundary_values(map, mesh);
    const double eim_dist = essential_range_distance(values, mesh.measures, p);
    const double spacing = image_spacing(mesh, values);
    if (eim_dist <= bump_radius + spacing)
        throw std::domain_error(
            "vmo_change_of_variables_check: bump support reaches the essential boundary range");

    const double fd = 0.5 * domain.min_cell_size();
    std::vector<Vec> cells;
    domain.for_each_cell([&](const Vec& x) { cells.push_back(x); });
    std::vector<double> contrib(cells.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(cells.size()), [&](std::int64_t i) {
        const double g = bump_value(p, bump_radius, map(cells[i]));
        if (g == 0.0) return;
        contrib[i] = g * map.gradient_or_fd(cells[i], fd).determinant();
    });
    CovCheckReport rep;
    for (double c : contrib) rep.lhs += c;
    rep.lhs *= domain.cell_volume();

    const VmoDegreeReport vd = vmo_degree(map, domain, p, schedule, opts);
    const double mass = bump_integral(domain.dimension(), bump_radius);
    rep.degree = vd.value;
    rep.stabilized = vd.stabilized;
    rep.rhs = vd.value * mass;
    rep.residual = std::abs(rep.lhs - rep.rhs) / mass;
    return rep;
}

double null_kernel_term(const MapField& map, const Domain& domain, const Vec& x, double eps,
                        int radial_level) {
    if (!domain.contains(x) || domain.dist_to_boundary(x) <= eps)
        throw std::domain_error("null_kernel_term: inadmissible ball");
    const int n = map.source_dim();
    const int level = auto_level(n, radial_level);
    const double wn = unit_ball_volume(n);
    Vec acc = Vec::Zero(map.target_dim());
    double wsum = 0.0;
    ball_quadrature(n, x, eps, level, [&](const Vec& z, double w) {
        const double psi = 1.0 - wn * eta_unit((x - z).squaredNorm() / (eps * eps), n);
        acc += w * psi * map(z);
        wsum += w;
    });
    return (acc / wsum).norm();
}

double null_kernel_sup(const MapField& map, const Domain& domain, double eps) {
    const std::vector<Vec> centers = modulus_lattice(domain, eps);
    std::vector<double> vals(centers.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(centers.size()), [&](std::int64_t i) {
        vals[i] = null_kernel_term(map, domain, centers[i], eps);
    });
    double best = 0.0;
    for (double vv : vals) best = std::max(best, vv);
    return best;
}

}  // namespace topodeg
