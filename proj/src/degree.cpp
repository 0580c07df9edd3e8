#include "topodeg/degree.hpp"

#include <algorithm>
#include <cmath>

namespace topodeg {

const char* degree_method_name(DegreeMethod m) {
    switch (m) {
        case DegreeMethod::Counting: return "counting";
        case DegreeMethod::Integral: return "integral";
        case DegreeMethod::Winding: return "winding";
        case DegreeMethod::BoundaryPullback: return "pullback";
    }
    return "?";
}

std::vector<Vec> boundary_values(const MapField& map, const BoundaryMesh& mesh) {
    std::vector<Vec> values;
    values.reserve(mesh.vertices.size());
    for (const Vec& v : mesh.vertices) values.push_back(map(v));
    return values;
}

double image_distance(const std::vector<Vec>& values, const Vec& y) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& v : values) best = std::min(best, (v - y).norm());
    return best;
}

double image_spacing(const BoundaryMesh& mesh, const std::vector<Vec>& values) {
    double best = 0.0;
    for (const auto& el : mesh.elements) {
        best = std::max(best, (values[el[1]] - values[el[0]]).norm());
        if (mesh.dimension == 3)
            best = std::max(best, (values[el[2]] - values[el[0]]).norm());
    }
    return best;
}

double gradient_scale(const MapField& map, const Domain& domain) {
    const int n = domain.dimension();
    const int per_axis = 12;
    const Vec lo = domain.bounding_lo(), hi = domain.bounding_hi();
    const double h = 0.25 * domain.min_cell_size();
    double scale = 0.0;
    std::array<int, kMaxDim> ix{};
    const int count = n == 2 ? per_axis * per_axis : per_axis * per_axis * per_axis;
    for (int flat = 0; flat < count; ++flat) {
        int rest = flat;
        for (int a = n - 1; a >= 0; --a) {
            ix[a] = rest % per_axis;
            rest /= per_axis;
        }
        Vec x(n);
        for (int a = 0; a < n; ++a)
            x[a] = lo[a] + (hi[a] - lo[a]) * (ix[a] + 0.5) / per_axis;
        if (domain.dist_to_boundary(x) < 2.0 * h) continue;
        scale = std::max(scale, map.gradient_or_fd(x, h).norm());
    }
    return scale;
}

namespace {

struct BoundaryContext {
    BoundaryMesh mesh;
    std::vector<Vec> values;
    double spacing = 0.0;
};

BoundaryContext boundary_context(const MapField& map, const Domain& domain,
                                 const DegreeOptions& opts) {
    BoundaryContext ctx;
    ctx.mesh = boundary_mesh(domain, opts.boundary_resolution);
    ctx.values = boundary_values(map, ctx.mesh);
    ctx.spacing = image_spacing(ctx.mesh, ctx.values);
    return ctx;
}

double effective_clearance(const BoundaryContext& ctx, const DegreeOptions& opts) {
    return opts.clearance > 0.0 ? opts.clearance : 2.0 * ctx.spacing;
}

double auto_tau(const MapField& map, const Domain& domain, const DegreeOptions& opts) {
    if (opts.tau_regular > 0.0) return opts.tau_regular;
    const double scale = std::max(1.0, gradient_scale(map, domain));
    return 1e-8 * std::pow(scale, map.source_dim());
}

struct NewtonResult {
    Vec root;
    double final_norm = 0.0;
    bool converged = false;
};

NewtonResult newton_polish(const MapField& map, const Vec& y, Vec z, double fd_step,
                           double max_step) {
    NewtonResult out;
    const int n = static_cast<int>(z.size());
    double rnorm = (map(z) - y).norm();
    for (int it = 0; it < 50; ++it) {
        if (rnorm <= 1e-10 * (1.0 + y.norm())) break;
        const Mat j = map.gradient_or_fd(z, fd_step);
        const Vec r = y - map(z);
        Vec step(n);
        const double det = j.determinant();
        if (std::abs(det) > 1e-13 * std::pow(j.norm() + 1e-30, n)) {
            step = adjugate(j) * r / det;
        } else {
            // Damped least-squares step near singular Jacobians.
            Mat jtj = j.transpose() * j;
            jtj.diagonal().array() += 1e-8 * (jtj.trace() + 1e-30);
            step = jtj.inverse() * (j.transpose() * r);
        }
        const double len = step.norm();
        if (len > max_step) step *= max_step / len;
        double lambda = 1.0;
        Vec znew = z + step;
        double rnew = (map(znew) - y).norm();
        int backtracks = 0;
        while (rnew > rnorm && backtracks < 10) {
            lambda *= 0.5;
            znew = z + lambda * step;
            rnew = (map(znew) - y).norm();
            ++backtracks;
        }
        if (rnew >= rnorm && rnorm <= 1e-10 * (1.0 + y.norm())) break;
        z = znew;
        rnorm = rnew;
    }
    out.root = z;
    out.final_norm = rnorm;
    out.converged = rnorm <= 1e-8 * (1.0 + y.norm());
    return out;
}

struct CountingPass {
    std::vector<std::pair<Vec, int>> preimages;
    bool regularity_violation = false;
    bool newton_failure = false;
};

CountingPass counting_pass(const MapField& map, const Domain& domain, const Vec& y, double tol,
                           double tau, double fd_step) {
    const int n = domain.dimension();
    const int res = domain.resolution();
    const Vec cell = domain.cell_size();
    const double diag = cell.norm();

    // Residual field |f - y|^2 on the full bounding-box grid (infinite
    // outside the domain) so minima can be located with neighbor scans.
    std::vector<double> r2(static_cast<std::size_t>(std::pow(res, n)),
                           std::numeric_limits<double>::infinity());
    auto flat = [&](const std::array<int, kMaxDim>& ix) {
        std::int64_t idx = 0;
        for (int a = 0; a < n; ++a) idx = idx * res + ix[a];
        return idx;
    };
    std::array<int, kMaxDim> ix{};
    const std::int64_t total = static_cast<std::int64_t>(r2.size());
    for (std::int64_t f = 0; f < total; ++f) {
        std::int64_t rest = f;
        for (int a = n - 1; a >= 0; --a) {
            ix[a] = static_cast<int>(rest % res);
            rest /= res;
        }
        const Vec x = domain.cell_center(ix);
        if (domain.contains(x)) r2[f] = (map(x) - y).squaredNorm();
    }

    // Local minima of the residual field seed the Newton polish.
    std::vector<std::array<int, kMaxDim>> seeds;
    for (std::int64_t f = 0; f < total; ++f) {
        if (!std::isfinite(r2[f])) continue;
        std::int64_t rest = f;
        for (int a = n - 1; a >= 0; --a) {
            ix[a] = static_cast<int>(rest % res);
            rest /= res;
        }
        bool minimal = true;
        std::array<int, kMaxDim> jx = ix;
        const int neighborhood = n == 2 ? 9 : 27;
        for (int nb = 0; nb < neighborhood && minimal; ++nb) {
            int code = nb;
            bool self = true;
            for (int a = 0; a < n; ++a) {
                const int off = code % 3 - 1;
                code /= 3;
                jx[a] = ix[a] + off;
                if (off != 0) self = false;
            }
            if (self) continue;
            bool in_range = true;
            for (int a = 0; a < n; ++a) in_range &= jx[a] >= 0 && jx[a] < res;
            if (!in_range) continue;
            if (r2[flat(jx)] < r2[f]) minimal = false;
        }
        if (minimal) seeds.push_back(ix);
    }

    CountingPass pass;
    const double grad_hint = std::max(1.0, gradient_scale(map, domain));
    for (const auto& seed : seeds) {
        const Vec start = domain.cell_center(seed);
        const double start_norm = std::sqrt(r2[flat(seed)]);
        const NewtonResult nr = newton_polish(map, y, start, fd_step, 4.0 * diag);
        if (!nr.converged) {
            // Only meaningful when the seed was plausibly near a root.
            if (start_norm < 4.0 * diag * grad_hint) pass.newton_failure = true;
            continue;
        }
        if (!domain.contains(nr.root)) continue;
        if ((map(nr.root) - y).norm() > std::max(tol, 1e-9)) continue;
        bool duplicate = false;
        for (const auto& [p, s] : pass.preimages)
            if ((p - nr.root).norm() < std::max(tol, 16.0 * 1e-9)) duplicate = true;
        if (duplicate) continue;
        const double det = map.gradient_or_fd(nr.root, fd_step).determinant();
        if (std::abs(det) <= tau) {
            pass.regularity_violation = true;
            continue;
        }
        pass.preimages.emplace_back(nr.root, det > 0 ? 1 : -1);
    }
    return pass;
}

}  // namespace

DegreeReport degree_by_counting(const MapField& map, const Domain& domain, const Vec& y,
                                const DegreeOptions& opts) {
    const BoundaryContext ctx = boundary_context(map, domain, opts);
    const double clearance = effective_clearance(ctx, opts);
    if (image_distance(ctx.values, y) <= clearance)
        throw std::domain_error("degree_by_counting: probe too close to the boundary image");
    const double tau = auto_tau(map, domain, opts);
    const double fd = opts.fd_step > 0.0 ? opts.fd_step : 1e-3 * domain.min_cell_size();

    DegreeReport rep;
    rep.method = DegreeMethod::Counting;
    rep.y = y;
    rep.mesh_resolution = domain.resolution();

    // Sard guard: a probe whose preimage hits a critical point is nudged by
    // one cell diagonal and retried.
    Vec probe = y;
    for (int attempt = 0; attempt < 4; ++attempt) {
        const CountingPass pass =
            counting_pass(map, domain, probe, opts.tol, tau, fd);
        if (!pass.regularity_violation) {
            rep.preimages = pass.preimages;
            rep.inconclusive = pass.newton_failure;
            if (pass.newton_failure) rep.note = "newton non-convergence near a candidate";
            int sum = 0;
            for (const auto& [p, s] : rep.preimages) sum += s;
            rep.value = sum;
            rep.raw = sum;
            return rep;
        }
        probe = probe + domain.cell_size();
        if (image_distance(ctx.values, probe) <= clearance) break;
        rep.note = "probe perturbed by a cell diagonal (regularity guard)";
    }
    rep.inconclusive = true;
    rep.note = "no regular probe found near y";
    return rep;
}

namespace {

struct BumpSources {
    std::vector<Vec> points;
    std::vector<double> weights;  // g(z) * cell volume, strictly positive
    double mass = 0.0;
};

BumpSources bump_sources(const Vec& y, double radius, int n, int per_axis) {
    BumpSources src;
    const double h = 2.0 * radius / per_axis;
    const double vol = std::pow(h, n);
    std::array<int, kMaxDim> ix{};
    const int total = n == 2 ? per_axis * per_axis : per_axis * per_axis * per_axis;
    for (int f = 0; f < total; ++f) {
        int rest = f;
        for (int a = n - 1; a >= 0; --a) {
            ix[a] = rest % per_axis;
            rest /= per_axis;
        }
        Vec z(n);
        for (int a = 0; a < n; ++a) z[a] = y[a] - radius + (ix[a] + 0.5) * h;
        const double g = bump_value(y, radius, z);
        if (g > 0.0) {
            src.points.push_back(z);
            src.weights.push_back(g * vol);
            src.mass += g * vol;
        }
    }
    return src;
}

}  // namespace

DegreeReport degree_by_integral(const MapField& map, const Domain& domain, const Vec& y,
                                const DegreeOptions& opts) {
    const int n = domain.dimension();
    const BoundaryContext ctx = boundary_context(map, domain, opts);
    if (image_distance(ctx.values, y) <= opts.bump_radius + ctx.spacing)
        throw std::domain_error("degree_by_integral: bump support touches the boundary image");

    DegreeReport rep;
    rep.method = DegreeMethod::Integral;
    rep.y = y;
    rep.bump_radius = opts.bump_radius;
    rep.mesh_resolution = domain.resolution();

    const double fd = opts.fd_step > 0.0 ? opts.fd_step : 0.5 * domain.min_cell_size();
    std::vector<Vec> cells;
    cells.reserve(1 << 16);
    domain.for_each_cell([&](const Vec& x) { cells.push_back(x); });
    std::vector<double> contrib(cells.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(cells.size()), [&](std::int64_t i) {
        const Vec fx = map(cells[i]);
        const double g = bump_value(y, opts.bump_radius, fx);
        if (g == 0.0) return;
        contrib[i] = g * map.gradient_or_fd(cells[i], fd).determinant();
    });
    double acc = 0.0;
    for (double c : contrib) acc += c;
    acc *= domain.cell_volume();

    rep.raw = acc / bump_integral(n, opts.bump_radius);
    rep.value = static_cast<int>(std::lround(rep.raw));
    rep.residual = std::abs(rep.raw - rep.value);
    rep.inconclusive = rep.residual >= 0.5;
    return rep;
}

int winding_number(const std::vector<Vec>& loop, const Vec& y) {
    if (loop.size() < 3) throw std::invalid_argument("winding_number: need a closed polygon");
    double total = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Vec a = loop[i] - y;
        const Vec b = loop[(i + 1) % loop.size()] - y;
        if (a.norm() < 1e-12 || b.norm() < 1e-12)
            throw std::domain_error("winding_number: curve passes through y");
        total += std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
    }
    return static_cast<int>(std::lround(total / (2.0 * EIGEN_PI)));
}

int boundary_trace_degree(const BoundaryMesh& mesh, const std::vector<Vec>& values, const Vec& y) {
    if (mesh.dimension == 2) {
        double total = 0.0;
        for (const auto& el : mesh.elements) {
            const Vec a = values[el[0]] - y;
            const Vec b = values[el[1]] - y;
            if (a.norm() < 1e-12 || b.norm() < 1e-12)
                throw std::domain_error("boundary_trace_degree: trace passes through y");
            total += std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
        }
        return static_cast<int>(std::lround(total / (2.0 * EIGEN_PI)));
    }
    // Van Oosterom-Strackee signed solid angles.
    double total = 0.0;
    for (const auto& el : mesh.elements) {
        const Eigen::Vector3d a = values[el[0]] - y;
        const Eigen::Vector3d b = values[el[1]] - y;
        const Eigen::Vector3d c = values[el[2]] - y;
        const double la = a.norm(), lb = b.norm(), lc = c.norm();
        if (la < 1e-12 || lb < 1e-12 || lc < 1e-12)
            throw std::domain_error("boundary_trace_degree: trace passes through y");
        const double num = a.dot(b.cross(c));
        const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
        total += 2.0 * std::atan2(num, den);
    }
    return static_cast<int>(std::lround(total / (4.0 * EIGEN_PI)));
}

DegreeReport boundary_pullback_degree(const MapField& map, const Domain& domain, const Vec& y,
                                      const DegreeOptions& opts) {
    const int n = domain.dimension();
    if (n != 2 && n != 3)
        throw std::invalid_argument("boundary_pullback_degree: dimension must be 2 or 3");
    const BoundaryContext ctx = boundary_context(map, domain, opts);
    if (image_distance(ctx.values, y) <= opts.bump_radius + ctx.spacing)
        throw std::domain_error("boundary_pullback_degree: bump support touches the boundary image");

    const int per_axis =
        opts.bump_quadrature > 0 ? opts.bump_quadrature : (n == 2 ? 32 : 12);
    const BumpSources src = bump_sources(y, opts.bump_radius, n, per_axis);

    // Newtonian field with div v = g: v(w) = c_n sum w_i (w - z_i)/|w - z_i|^n.
    const double cn = 1.0 / (n * unit_ball_volume(n));
    auto field = [&](const Vec& w) -> Vec {
        Vec v = Vec::Zero(n);
        for (std::size_t i = 0; i < src.points.size(); ++i) {
            const Vec d = w - src.points[i];
            const double r = d.norm();
            v += (src.weights[i] / std::pow(r, n)) * d;
        }
        return cn * v;
    };

    std::vector<double> contrib(ctx.mesh.elements.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(ctx.mesh.elements.size()), [&](std::int64_t e) {
        const auto& el = ctx.mesh.elements[e];
        if (n == 2) {
            const Vec fa = ctx.values[el[0]], fb = ctx.values[el[1]];
            const Vec mid = 0.5 * (fa + fb);
            const Vec v = field(mid);
            contrib[e] = v[0] * (fb[1] - fa[1]) - v[1] * (fb[0] - fa[0]);
        } else {
            const Eigen::Vector3d fa = ctx.values[el[0]], fb = ctx.values[el[1]],
                                  fc = ctx.values[el[2]];
            const Vec centroid = Vec((fa + fb + fc) / 3.0);
            const Eigen::Vector3d area = 0.5 * (fb - fa).cross(fc - fa);
            const Vec v = field(centroid);
            contrib[e] = v[0] * area[0] + v[1] * area[1] + v[2] * area[2];
        }
    });
    double acc = 0.0;
    for (double c : contrib) acc += c;

    DegreeReport rep;
    rep.method = DegreeMethod::BoundaryPullback;
    rep.y = y;
    rep.bump_radius = opts.bump_radius;
    rep.mesh_resolution = static_cast<int>(ctx.mesh.vertices.size());
    rep.raw = acc / src.mass;
    rep.value = static_cast<int>(std::lround(rep.raw));
    rep.residual = std::abs(rep.raw - rep.value);
    rep.inconclusive = rep.residual >= 0.5;
    return rep;
}

namespace {

std::string format_point(const Vec& y) {
    std::string s = "(";
    for (int i = 0; i < y.size(); ++i) s += (i ? "," : "") + std::to_string(y[i]);
    return s + ")";
}

}  // namespace

AxiomReport degree_axiom_harness(const MapField& map, const Domain& domain,
                                 const std::vector<Vec>& probes, const DegreeOptions& opts,
                                 bool assume_injective) {
    AxiomReport report;
    const BoundaryContext ctx = boundary_context(map, domain, opts);
    const double clearance = effective_clearance(ctx, opts);
    auto add = [&](const std::string& name, bool ok, const std::string& witness) {
        report.checks.push_back({name, ok, ok ? "" : witness});
        report.all_passed &= ok;
    };

    std::vector<Vec> usable;
    for (const Vec& y : probes)
        if (image_distance(ctx.values, y) > clearance) usable.push_back(y);
    if (usable.empty()) {
        add("probe-clearance", false, "all probes within clearance of the boundary image");
        return report;
    }

    // 1. Nonzero degree attains the value.
    {
        bool ok = true;
        std::string witness;
        for (const Vec& y : usable) {
            const DegreeReport r = degree_by_counting(map, domain, y, opts);
            if (r.value != 0 && r.preimages.empty()) {
                ok = false;
                witness = "deg != 0 without preimages at " + format_point(y);
            }
        }
        add("attainability", ok, witness);
    }

    // 2. Constancy along straight probe paths that keep clearance.
    {
        bool ok = true;
        std::string witness;
        for (std::size_t i = 0; i + 1 < usable.size() && ok; ++i) {
            const Vec a = usable[i], b = usable[i + 1];
            bool clear = true;
            const int samples = 17;
            for (int s = 0; s < samples; ++s) {
                const Vec p = a + (b - a) * (static_cast<double>(s) / (samples - 1));
                if (image_distance(ctx.values, p) <= clearance) clear = false;
            }
            if (!clear) continue;
            const int da = boundary_trace_degree(ctx.mesh, ctx.values, a);
            for (int s = 1; s < samples; ++s) {
                const Vec p = a + (b - a) * (static_cast<double>(s) / (samples - 1));
                if (boundary_trace_degree(ctx.mesh, ctx.values, p) != da) {
                    ok = false;
                    witness = "degree changed along the segment " + format_point(a) + " -> " +
                              format_point(b);
                    break;
                }
            }
        }
        add("local-constancy", ok, witness);
    }

    // 3. Stability under a small uniform perturbation.
    {
        const double eps = 0.25 * clearance;
        const MapField g = MapField::analytic(
            map.source_dim(), map.target_dim(), map.name() + "_perturbed",
            [map, eps, &domain](const Vec& x) -> Vec {
                Vec out = map(x);
                const double b = bump_value(domain.center(), 0.6 * domain.min_feature(), x);
                out.array() += eps * b;
                return out;
            });
        bool ok = true;
        std::string witness;
        for (const Vec& y : usable) {
            const auto values_g = boundary_values(g, ctx.mesh);
            const int dg = boundary_trace_degree(ctx.mesh, values_g, y);
            const int df = boundary_trace_degree(ctx.mesh, ctx.values, y);
            if (dg != df) {
                ok = false;
                witness = "perturbation changed the degree at " + format_point(y);
            }
        }
        add("stability", ok, witness);
    }

    // 4. Trace-equal linear homotopy: adding an interior bump keeps the
    // boundary trace and the degree.
    {
        bool ok = true;
        std::string witness;
        for (double t : {0.5, 1.0}) {
            const MapField g = MapField::analytic(
                map.source_dim(), map.target_dim(), map.name() + "_homotopy",
                [map, t, &domain](const Vec& x) -> Vec {
                    Vec out = map(x);
                    const double b = bump_value(domain.center(), 0.5 * domain.min_feature(), x);
                    out[0] += t * 0.05 * domain.min_feature() * b;
                    return out;
                });
            for (const Vec& y : usable) {
                const DegreeReport rf = degree_by_counting(map, domain, y, opts);
                const DegreeReport rg = degree_by_counting(g, domain, y, opts);
                if (rf.value != rg.value) {
                    ok = false;
                    witness = "homotopy t=" + std::to_string(t) + " changed the degree at " +
                              format_point(y);
                }
            }
        }
        add("homotopy-invariance", ok, witness);
    }

    // 5. Excision against the shrunken domain.
    {
        const double eps = 0.05 * domain.min_feature();
        const Domain inner = inner_domain(domain, eps);
        const BoundaryMesh inner_mesh = boundary_mesh(inner, opts.boundary_resolution);
        const auto inner_values = boundary_values(map, inner_mesh);
        bool ok = true;
        std::string witness;
        for (const Vec& y : usable) {
            // Precondition: y is not attained on the excised shell.
            double closest = std::numeric_limits<double>::infinity();
            domain.for_each_cell([&](const Vec& x) {
                if (inner.contains(x)) return;
                closest = std::min(closest, (map(x) - y).norm());
            });
            if (closest <= clearance) continue;
            const int douter = boundary_trace_degree(ctx.mesh, ctx.values, y);
            const int dinner = boundary_trace_degree(inner_mesh, inner_values, y);
            if (douter != dinner) {
                ok = false;
                witness = "excision failed at " + format_point(y);
            }
        }
        add("excision", ok, witness);
    }

    if (assume_injective) {
        bool ok = true;
        std::string witness;
        int seen = 0;
        for (const Vec& y : usable) {
            const DegreeReport r = degree_by_counting(map, domain, y, opts);
            if (r.preimages.empty()) continue;  // y outside the image
            if (std::abs(r.value) != 1) {
                ok = false;
                witness = "injective map with degree " + std::to_string(r.value) + " at " +
                          format_point(y);
            }
            if (seen && r.value * seen < 0) {
                ok = false;
                witness = "injective map with mixed degree signs";
            }
            seen = r.value;
        }
        add("injective-unit-degree", ok, witness);
    }
    return report;
}

}  // namespace topodeg
