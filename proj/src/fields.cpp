#include "topodeg/fields.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

namespace topodeg {

std::int64_t GridData::vertex_count() const {
    std::int64_t c = 1;
    for (int a = 0; a < domain.dimension(); ++a) c *= verts_per_axis();
    return c;
}

std::int64_t GridData::vertex_index(const std::array<int, kMaxDim>& ix) const {
    const int v = verts_per_axis();
    std::int64_t idx = 0;
    for (int a = 0; a < domain.dimension(); ++a) idx = idx * v + ix[a];
    return idx;
}

Vec GridData::vertex_point(const std::array<int, kMaxDim>& ix) const {
    const Vec h = domain.cell_size();
    Vec p(domain.dimension());
    for (int a = 0; a < domain.dimension(); ++a) p[a] = domain.bounding_lo()[a] + ix[a] * h[a];
    return p;
}

Vec GridData::vertex_value(std::int64_t flat) const {
    Vec v(target_dim);
    for (int c = 0; c < target_dim; ++c) v[c] = samples[flat * target_dim + c];
    return v;
}

namespace {

// Catmull-Rom weights for local coordinate t in [0, 1].
std::array<double, 4> cubic_weights(double t) {
    const double t2 = t * t, t3 = t2 * t;
    return {0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
            0.5 * (-3.0 * t3 + 4.0 * t2 + t), 0.5 * (t3 - t2)};
}

}  // namespace

Vec GridData::eval(const Vec& x) const {
    const int n = domain.dimension();
    const int res = domain.resolution();
    const Vec h = domain.cell_size();

    std::array<int, kMaxDim> base{};
    std::array<std::array<double, 4>, kMaxDim> w{};
    std::array<int, kMaxDim> taps{};
    for (int a = 0; a < n; ++a) {
        double u = (x[a] - domain.bounding_lo()[a]) / h[a];
        u = std::clamp(u, 0.0, static_cast<double>(res));
        int i = std::min(static_cast<int>(std::floor(u)), res - 1);
        const double t = u - i;
        if (order == 3) {
            base[a] = i - 1;
            w[a] = cubic_weights(t);
            taps[a] = 4;
        } else {
            base[a] = i;
            w[a] = {1.0 - t, t, 0.0, 0.0};
            taps[a] = 2;
        }
    }

    Vec out = Vec::Zero(target_dim);
    std::array<int, kMaxDim> ix{};
    const int v = verts_per_axis();
    auto clamp_idx = [&](int i) { return std::clamp(i, 0, v - 1); };
    if (n == 2) {
        for (int i = 0; i < taps[0]; ++i) {
            ix[0] = clamp_idx(base[0] + i);
            for (int j = 0; j < taps[1]; ++j) {
                ix[1] = clamp_idx(base[1] + j);
                const double ww = w[0][i] * w[1][j];
                if (ww == 0.0) continue;
                out += ww * vertex_value(vertex_index(ix));
            }
        }
    } else {
        for (int i = 0; i < taps[0]; ++i) {
            ix[0] = clamp_idx(base[0] + i);
            for (int j = 0; j < taps[1]; ++j) {
                ix[1] = clamp_idx(base[1] + j);
                for (int k = 0; k < taps[2]; ++k) {
                    ix[2] = clamp_idx(base[2] + k);
                    const double ww = w[0][i] * w[1][j] * w[2][k];
                    if (ww == 0.0) continue;
                    out += ww * vertex_value(vertex_index(ix));
                }
            }
        }
    }
    return out;
}

MapField MapField::analytic(int n, int m, std::string name, ValueFn value, GradFn grad) {
    if (n < 1 || n > kMaxDim || m < 1 || m > kMaxDim)
        throw std::invalid_argument("MapField: dimensions must be within 1..3");
    MapField f;
    f.n_ = n;
    f.m_ = m;
    f.name_ = std::move(name);
    f.value_ = std::move(value);
    f.grad_ = std::move(grad);
    return f;
}

MapField MapField::from_grid(Domain domain, int target_dim, std::vector<double> samples,
                             int order, std::string name) {
    if (order != 1 && order != 3)
        throw std::invalid_argument("MapField: interpolation order must be 1 or 3");
    auto grid = std::make_shared<GridData>();
    grid->domain = std::move(domain);
    grid->target_dim = target_dim;
    grid->order = order;
    grid->samples = std::move(samples);
    if (static_cast<std::int64_t>(grid->samples.size()) != grid->vertex_count() * target_dim)
        throw std::invalid_argument("MapField: sample count does not match the lattice");
    MapField f;
    f.n_ = grid->domain.dimension();
    f.m_ = target_dim;
    f.name_ = std::move(name);
    f.grid_ = grid;
    auto g = f.grid_;
    f.value_ = [g](const Vec& x) { return g->eval(x); };
    return f;
}

MapField MapField::sample_to_grid(const Domain& domain, int target_dim, int order,
                                  std::string name, const ValueFn& fn) {
    const int n = domain.dimension();
    const int v = domain.resolution() + 1;
    std::int64_t count = 1;
    for (int a = 0; a < n; ++a) count *= v;
    std::vector<double> samples(count * target_dim);
    const Vec h = domain.cell_size();
    std::array<int, kMaxDim> ix{};
    Vec p(n);
    for (std::int64_t flat = 0; flat < count; ++flat) {
        std::int64_t rest = flat;
        for (int a = n - 1; a >= 0; --a) {
            ix[a] = static_cast<int>(rest % v);
            rest /= v;
        }
        for (int a = 0; a < n; ++a) p[a] = domain.bounding_lo()[a] + ix[a] * h[a];
        const Vec val = fn(p);
        for (int c = 0; c < target_dim; ++c) samples[flat * target_dim + c] = val[c];
    }
    return from_grid(domain, target_dim, std::move(samples), order, std::move(name));
}

const GridData& MapField::grid_data() const {
    if (!grid_) throw std::logic_error("MapField: not grid-backed");
    return *grid_;
}

Mat MapField::exact_gradient(const Vec& x) const {
    if (!grad_) throw std::logic_error("MapField: no exact gradient available");
    return grad_(x);
}

Mat MapField::gradient_or_fd(const Vec& x, double h) const {
    if (grad_) return grad_(x);
    Mat g(m_, n_);
    Vec xp = x, xm = x;
    for (int a = 0; a < n_; ++a) {
        xp[a] = x[a] + h;
        xm[a] = x[a] - h;
        g.col(a) = (value_(xp) - value_(xm)) / (2.0 * h);
        xp[a] = x[a];
        xm[a] = x[a];
    }
    return g;
}

double bump_value(const Vec& center, double radius, const Vec& x) {
    const double s2 = (x - center).squaredNorm() / (radius * radius);
    if (s2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s2));
}

double bump_integral(int n, double radius) {
    static std::array<double, kMaxDim + 1> unit{};
    static std::once_flag once;
    std::call_once(once, [] {
        constexpr int panels = 1 << 14;
        for (int dim = 1; dim <= kMaxDim; ++dim) {
            double acc = 0.0;
            const double ds = 1.0 / panels;
            for (int i = 0; i < panels; ++i) {
                const double s = (i + 0.5) * ds;
                acc += std::exp(-1.0 / (1.0 - s * s)) * std::pow(s, dim - 1) * ds;
            }
            unit[dim] = dim * unit_ball_volume(dim) * acc;
        }
    });
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("bump_integral: bad dimension");
    return unit[n] * std::pow(radius, n);
}

TestField radial_bump_field(const Vec& center, double radius, const Vec& coeffs) {
    TestField tf;
    tf.name = "bump";
    const Vec c = center;
    const Vec a = coeffs;
    const double r = radius;
    tf.value = [c, a, r](const Vec& x) -> Vec { return a * bump_value(c, r, x); };
    tf.grad = [c, a, r](const Vec& x) -> Mat {
        const int n = static_cast<int>(x.size());
        const double s2 = (x - c).squaredNorm() / (r * r);
        Mat g = Mat::Zero(static_cast<int>(a.size()), n);
        if (s2 >= 1.0) return g;
        const double b = std::exp(-1.0 / (1.0 - s2));
        const double q = 1.0 - s2;
        const Vec db = (-2.0 * b / (q * q * r * r)) * (x - c);
        for (int k = 0; k < a.size(); ++k)
            for (int j = 0; j < n; ++j) g(k, j) = a[k] * db[j];
        return g;
    };
    return tf;
}

std::vector<TestField> default_test_fields(const Domain& domain) {
    const int n = domain.dimension();
    const Vec c = domain.center();
    const double r0 = 0.35 * domain.min_feature();
    std::vector<TestField> fields;
    for (int k = 0; k < n; ++k) {
        Vec e = Vec::Zero(n);
        e[k] = 1.0;
        fields.push_back(radial_bump_field(c, r0, e));
        fields.back().name = "bump_e" + std::to_string(k);
    }
    fields.push_back(radial_bump_field(c, r0, Vec::Ones(n)));
    fields.back().name = "bump_ones";
    Vec off = c;
    off[0] += 0.25 * domain.min_feature();
    Vec mixed = Vec::Ones(n);
    mixed[0] = -1.0;
    fields.push_back(radial_bump_field(off, 0.2 * domain.min_feature(), mixed));
    fields.back().name = "bump_offset";
    return fields;
}

JacobianSample gradient(const MapField& map, const Domain& domain, const Vec& x, double h) {
    if (h <= 0.0) h = domain.min_cell_size();
    JacobianSample js;
    js.point = x;
    if (map.has_exact_gradient()) {
        js.grad = map.exact_gradient(x);
    } else {
        if (domain.dist_to_boundary(x) < h)
            throw std::domain_error("gradient: point closer to the boundary than the step");
        js.grad = map.gradient_or_fd(x, h);
    }
    js.square = map.source_dim() == map.target_dim();
    if (js.square) {
        js.adj = adjugate(js.grad);
        js.det = js.grad.determinant();
    }
    return js;
}

double integrate(const std::function<double(const Vec&)>& field, const Domain& region) {
    const double vol = region.cell_volume();
    double acc = 0.0;
    region.for_each_cell([&](const Vec& x) { acc += field(x); });
    return acc * vol;
}

double integrate(const std::function<double(const Vec&)>& field, const BoundaryMesh& region) {
    double acc = 0.0;
    for (std::size_t e = 0; e < region.elements.size(); ++e)
        acc += field(region.element_centroid(static_cast<int>(e))) * region.measures[e];
    return acc;
}

void ball_quadrature(int n, const Vec& c, double r, int radial_level,
                     const std::function<void(const Vec&, double)>& fn) {
    const int nr = std::max(2, radial_level);
    const double dr = r / nr;
    if (n == 2) {
        const int nth = 4 * nr;
        const double dth = 2.0 * EIGEN_PI / nth;
        for (int i = 0; i < nr; ++i) {
            const double ri = (i + 0.5) * dr;
            for (int j = 0; j < nth; ++j) {
                const double th = (j + 0.5) * dth;
                fn(vec2(c[0] + ri * std::cos(th), c[1] + ri * std::sin(th)), ri * dr * dth);
            }
        }
        return;
    }
    if (n == 3) {
        const int nth = 2 * nr, nph = 4 * nr;
        const double dth = EIGEN_PI / nth, dph = 2.0 * EIGEN_PI / nph;
        for (int i = 0; i < nr; ++i) {
            const double ri = (i + 0.5) * dr;
            for (int j = 0; j < nth; ++j) {
                const double th = (j + 0.5) * dth;
                const double st = std::sin(th);
                for (int k = 0; k < nph; ++k) {
                    const double ph = (k + 0.5) * dph;
                    fn(vec3(c[0] + ri * st * std::cos(ph), c[1] + ri * st * std::sin(ph),
                            c[2] + ri * std::cos(th)),
                       ri * ri * st * dr * dth * dph);
                }
            }
        }
        return;
    }
    throw std::invalid_argument("ball_quadrature: dimension must be 2 or 3");
}

SphereTrace sphere_trace(const MapField& map, const BoundaryMesh& sphere) {
    SphereTrace tr;
    tr.mesh = sphere;
    tr.values.reserve(sphere.vertices.size());
    for (const Vec& v : sphere.vertices) tr.values.push_back(map(v));
    tr.tangential_norm.resize(sphere.elements.size());
    for (std::size_t e = 0; e < sphere.elements.size(); ++e) {
        const auto& el = sphere.elements[e];
        if (sphere.dimension == 2) {
            const double len = (sphere.vertices[el[1]] - sphere.vertices[el[0]]).norm();
            tr.tangential_norm[e] =
                len > 0 ? (tr.values[el[1]] - tr.values[el[0]]).norm() / len : 0.0;
        } else {
            // Frobenius norm of the in-plane differential from the two
            // edge vectors: |df|^2 = tr(G^{-1} M^T M), G the edge Gram.
            Eigen::Matrix<double, 3, 2> edges;
            edges.col(0) = Eigen::Vector3d(sphere.vertices[el[1]] - sphere.vertices[el[0]]);
            edges.col(1) = Eigen::Vector3d(sphere.vertices[el[2]] - sphere.vertices[el[0]]);
            Eigen::Matrix2d gram = edges.transpose() * edges;
            Eigen::MatrixXd m(map.target_dim(), 2);
            m.col(0) = tr.values[el[1]] - tr.values[el[0]];
            m.col(1) = tr.values[el[2]] - tr.values[el[0]];
            const double tr2 = (gram.inverse() * (m.transpose() * m)).trace();
            tr.tangential_norm[e] = std::sqrt(std::max(0.0, tr2));
        }
    }
    return tr;
}

SphereTrace sphere_trace(const MapField& map, const Domain& domain, const Vec& a, double r,
                         int resolution) {
    SphereTrace tr = sphere_trace(map, sphere_mesh(domain, a, r, resolution));
    tr.center = a;
    tr.radius = r;
    return tr;
}

double sobolev_energy(const MapField& map, const Domain& region, double p, double h) {
    if (p < 1.0) throw std::invalid_argument("sobolev_energy: exponent must be >= 1");
    if (h <= 0.0) h = 0.5 * region.min_cell_size();
    const double vol = region.cell_volume();
    double acc = 0.0;
    region.for_each_cell([&](const Vec& x) {
        acc += std::pow(map.gradient_or_fd(x, h).norm(), p);
    });
    return acc * vol;
}

double local_sobolev_energy(const MapField& map, const Domain& domain, const Vec& center,
                            double radius, double p, double h) {
    if (p < 1.0) throw std::invalid_argument("sobolev_energy: exponent must be >= 1");
    if (h <= 0.0) h = 0.5 * domain.min_cell_size();
    const double vol = domain.cell_volume();
    double acc = 0.0;
    domain.for_each_cell_in_ball(center, radius, [&](const Vec& x) {
        acc += std::pow(map.gradient_or_fd(x, h).norm(), p);
    });
    return acc * vol;
}

CoareaResult coarea_check(const MapField& map, const Domain& domain, const Vec& a, double r,
                          int radial_samples) {
    if (!domain.contains(a) || domain.dist_to_boundary(a) <= r)
        throw std::domain_error("coarea_check: ball not contained in the domain");
    const int n = map.source_dim();
    const int sres = n == 2 ? 256 : 600;
    CoareaResult res;
    const double drho = r / radial_samples;
    for (int i = 0; i < radial_samples; ++i) {
        const double rho = (i + 0.5) * drho;
        const SphereTrace tr = sphere_trace(map, domain, a, rho, sres);
        double shell = 0.0;
        for (std::size_t e = 0; e < tr.mesh.elements.size(); ++e)
            shell += std::pow(tr.tangential_norm[e], n) * tr.mesh.measures[e];
        res.lhs += shell * drho;
    }
    const double h = 0.25 * domain.min_cell_size();
    ball_quadrature(n, a, r, 48, [&](const Vec& x, double w) {
        res.rhs += std::pow(map.gradient_or_fd(x, h).norm(), n) * w;
    });
    res.holds = res.lhs <= res.rhs * 1.05;
    return res;
}

Vec lebesgue_average(const MapField& map, const Domain& domain, const Vec& x, double rho,
                     int radial_level) {
    Vec acc = Vec::Zero(map.target_dim());
    double wsum = 0.0;
    ball_quadrature(map.source_dim(), x, rho, radial_level, [&](const Vec& z, double w) {
        if (domain.signed_distance(z) < 0.0) {
            acc += w * map(z);
            wsum += w;
        }
    });
    if (wsum <= 0.0) throw std::domain_error("lebesgue_average: ball does not meet the domain");
    return acc / wsum;
}

double adjugate_identity_check(const MapField& map, const Domain& domain, const TestField& eta) {
    const double h = 0.5 * domain.min_cell_size();
    const double vol = domain.cell_volume();
    double acc = 0.0;
    domain.for_each_cell([&](const Vec& x) {
        const Mat ge = eta.grad(x);
        if (ge.isZero(0.0)) return;
        const Mat adj = adjugate(map.gradient_or_fd(x, h));
        acc += (ge * adj).trace();
    });
    return std::abs(acc * vol);
}

double grid_modulus(const MapField& map, const Domain& domain) {
    const int n = domain.dimension();
    const int res = domain.resolution();
    double best = 0.0;
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
            best = std::max(best, (map(y) - fx).norm());
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
    return best;
}

}  // namespace topodeg
