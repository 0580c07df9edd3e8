#include "topodeg/mapzoo.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <complex>

namespace topodeg {

namespace {

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

constexpr double kPuncture = 1e-12;

MapField identity_map() {
    return MapField::analytic(
        2, 2, "identity", [](const Vec& x) { return x; },
        [](const Vec& x) { return Mat(Mat::Identity(x.size(), x.size())); });
}

MapField linear_map(const Mat& a, const std::string& name) {
    return MapField::analytic(
        2, 2, name, [a](const Vec& x) -> Vec { return a * x; },
        [a](const Vec&) { return a; });
}

MapField zpow_map(int k) {
    return MapField::analytic(
        2, 2, "zpow:" + std::to_string(k),
        [k](const Vec& x) {
            const std::complex<double> z(x[0], x[1]);
            const std::complex<double> w = std::pow(z, k);
            return vec2(w.real(), w.imag());
        },
        [k](const Vec& x) {
            const std::complex<double> z(x[0], x[1]);
            const std::complex<double> d = static_cast<double>(k) * std::pow(z, k - 1);
            Mat g(2, 2);
            g << d.real(), -d.imag(), d.imag(), d.real();
            return g;
        });
}

MapField winding_map(int k) {
    // f(r, theta) = r (cos k theta, sin k theta): Lipschitz, degree k.
    return MapField::analytic(
        2, 2, "winding_boundary:" + std::to_string(k),
        [k](const Vec& x) {
            const double r = x.norm();
            if (r < kPuncture) return vec2(0.0, 0.0);
            const double th = k * std::atan2(x[1], x[0]);
            return vec2(r * std::cos(th), r * std::sin(th));
        },
        [k](const Vec& x) {
            const double r = std::max(x.norm(), kPuncture);
            const double t = std::atan2(x[1], x[0]);
            const Vec rhat = vec2(std::cos(t), std::sin(t));
            const Vec that = vec2(-std::sin(t), std::cos(t));
            const Vec u = vec2(std::cos(k * t), std::sin(k * t));
            const Vec uperp = vec2(-std::sin(k * t), std::cos(k * t));
            Mat g = u * rhat.transpose() + (k * uperp) * that.transpose();
            (void)r;
            return g;
        });
}

MapField angle_map() {
    return MapField::analytic(
        2, 2, "angle",
        [](const Vec& x) {
            const double r = x.norm();
            if (r < kPuncture) return vec2(1.0, 0.0);  // limit along +x
            return Vec(x / r);
        },
        [](const Vec& x) {
            const double r = std::max(x.norm(), kPuncture);
            const Vec u = x / r;
            Mat g = (Mat::Identity(2, 2) - u * u.transpose()) / r;
            return g;
        });
}

MapField cavitation_map() {
    // f(x) = (1 + |x|) x/|x| = x/|x| + x: opens a unit cavity at 0.
    return MapField::analytic(
        2, 2, "cavitation",
        [](const Vec& x) {
            const double r = x.norm();
            if (r < kPuncture) return vec2(1.0, 0.0);
            return Vec((1.0 + r) / r * x);
        },
        [](const Vec& x) {
            const double r = std::max(x.norm(), kPuncture);
            const Vec u = x / r;
            Mat g = Mat::Identity(2, 2) + (Mat::Identity(2, 2) - u * u.transpose()) / r;
            return g;
        });
}

MapField diffeo1_map() {
    // Perturbed identity; the Jacobian stays within 0.16 of I, so the det
    // is positive and the symmetric part is definite (hence injective).
    return MapField::analytic(
        2, 2, "diffeo1",
        [](const Vec& x) {
            const double u1 = 1.3 * x[0] + 0.7 * x[1] + 0.4;
            const double u2 = 0.6 * x[0] - 1.1 * x[1];
            return vec2(x[0] + 0.08 * std::sin(u1), x[1] + 0.08 * std::cos(u2));
        },
        [](const Vec& x) {
            const double u1 = 1.3 * x[0] + 0.7 * x[1] + 0.4;
            const double u2 = 0.6 * x[0] - 1.1 * x[1];
            Mat g(2, 2);
            g << 1.0 + 0.104 * std::cos(u1), 0.056 * std::cos(u1),
                -0.048 * std::sin(u2), 1.0 + 0.088 * std::sin(u2);
            return g;
        });
}

MapField fold_map() {
    // Smoothed (x, |y|); det changes sign across y = 0.
    return MapField::analytic(
        2, 2, "fold",
        [](const Vec& x) { return vec2(x[0], std::sqrt(x[1] * x[1] + 0.01)); },
        [](const Vec& x) {
            Mat g(2, 2);
            g << 1.0, 0.0, 0.0, x[1] / std::sqrt(x[1] * x[1] + 0.01);
            return g;
        });
}

}  // namespace

ZooEntry spike_fixture(const Domain& domain, double amplitude) {
    MapField base = identity_map();
    MapField grid = MapField::sample_to_grid(domain, 2, 1, "spike",
                                             [&](const Vec& x) { return base(x); });
    GridData data = grid.grid_data();
    // Displace the vertex nearest (0.25, 0.25) of the normalized extent.
    std::array<int, kMaxDim> ix{};
    for (int a = 0; a < 2; ++a)
        ix[a] = std::max(1, (domain.resolution() * 5) / 8);
    const std::int64_t flat = data.vertex_index(ix);
    data.samples[flat * 2] += amplitude;
    ZooEntry e;
    e.name = "spike";
    e.map = MapField::from_grid(data.domain, 2, std::move(data.samples), 1, "spike");
    e.props.det_sign = 0;
    e.props.notes = "identity samples with one displaced vertex; constructed fixture";
    return e;
}

ZooEntry preset(const std::string& name, const std::map<std::string, double>& params) {
    ZooEntry e;
    e.name = name;
    if (name == "identity") {
        e.map = identity_map();
        e.props.det_sign = 1;
        e.props.det_nonneg = true;
        e.props.injective = true;
        e.props.sobolev_w1n = true;
        e.props.smooth = true;
        e.props.expected_degrees = {{vec2(0, 0), 1}, {vec2(0.3, 0.2), 1}, {vec2(2, 0), 0}};
        e.props.continuity = {{vec2(0, 0), true}, {vec2(0.4, -0.1), true}};
        e.props.notes = "degrees: unique preimage with det 1; outside image: no preimage";
        return e;
    }
    if (name == "translate") {
        const Vec v = vec2(param(params, "tx", 0.3), param(params, "ty", -0.2));
        e.map = MapField::analytic(
            2, 2, "translate", [v](const Vec& x) -> Vec { return x + v; },
            [](const Vec& x) { return Mat(Mat::Identity(x.size(), x.size())); });
        e.props.det_sign = 1;
        e.props.det_nonneg = true;
        e.props.injective = true;
        e.props.sobolev_w1n = true;
        e.props.smooth = true;
        e.props.expected_degrees = {{Vec(vec2(0, 0) + v), 1}};
        e.props.notes = "degree 1 at translated origin: unique preimage";
        return e;
    }
    if (name == "linear") {
        Mat a(2, 2);
        a << param(params, "a00", 1.0), param(params, "a01", 0.0), param(params, "a10", 0.0),
            param(params, "a11", -1.0);
        e.map = linear_map(a, "linear");
        const double det = a.determinant();
        e.props.det_sign = det > 0 ? 1 : (det < 0 ? -1 : 0);
        e.props.det_nonneg = det >= 0;
        e.props.injective = det != 0;
        e.props.sobolev_w1n = true;
        e.props.smooth = true;
        if (det != 0)
            e.props.expected_degrees = {{vec2(0.1, 0.1), det > 0 ? 1 : -1}};
        e.props.notes = "single preimage A^{-1} y, degree = sign det A";
        return e;
    }
    if (name == "rotation") {
        const double th = param(params, "theta", EIGEN_PI / 3.0);
        Mat a(2, 2);
        a << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        e.map = linear_map(a, "rotation");
        e.props.det_sign = 1;
        e.props.det_nonneg = true;
        e.props.injective = true;
        e.props.sobolev_w1n = true;
        e.props.smooth = true;
        e.props.expected_degrees = {{vec2(0, 0), 1}, {vec2(0.2, -0.1), 1}};
        e.props.notes = "isometry: degree 1 inside the image";
        return e;
    }
    if (name == "zpow") {
        const int k = static_cast<int>(param(params, "k", 2));
        if (k < 1) throw std::invalid_argument("zpow: k must be >= 1");
        e.map = zpow_map(k);
        e.props.det_sign = k == 1 ? 1 : 0;  // det = k^2 |z|^{2(k-1)} vanishes at 0 for k > 1
        e.props.det_nonneg = true;
        e.props.injective = k == 1;
        e.props.sobolev_w1n = true;
        e.props.smooth = true;
        e.props.expected_degrees = {{vec2(0.25, 0), k}};
        e.props.continuity = {{vec2(0, 0), true}};
        e.props.notes = "k preimages of y != 0, each with det = k^2 |z|^{2k-2} > 0";
        return e;
    }
    if (name == "winding_boundary") {
        const int k = static_cast<int>(param(params, "k", 2));
        if (k < 1) throw std::invalid_argument("winding_boundary: k must be >= 1");
        e.map = winding_map(k);
        e.props.det_sign = 0;  // det = k a.e. but the origin is a Lipschitz kink
        e.props.det_nonneg = true;
        e.props.injective = k == 1;
        e.props.sobolev_w1n = true;
        e.props.expected_degrees = {{vec2(0.25, 0), k}};
        e.props.continuity = {{vec2(0, 0), true}};
        e.props.notes = "boundary trace winds k times; det = k away from 0";
        return e;
    }
    if (name == "angle") {
        e.map = angle_map();
        e.props.det_sign = 0;
        e.props.det_nonneg = true;
        e.props.continuity = {{vec2(0, 0), false}, {vec2(0.5, 0.1), true}};
        e.props.notes = "x/|x|: rank-1 gradient, BMO but not VMO, not W^{1,2}";
        return e;
    }
    if (name == "cavitation") {
        e.map = cavitation_map();
        e.props.det_sign = 1;
        e.props.det_nonneg = true;
        e.props.injective = true;
        e.props.expected_degrees = {{vec2(1.5, 0), 1}};
        e.props.continuity = {{vec2(0, 0), false}, {vec2(0.5, 0.1), true}};
        e.props.notes = "radial cavity map: det > 0 off the puncture, not W^{1,2}";
        return e;
    }
    if (name == "diffeo1") {
        e.map = diffeo1_map();
        e.props.det_sign = 1;
        e.props.det_nonneg = true;
        e.props.injective = true;
        e.props.sobolev_w1n = true;
        e.props.smooth = true;
        e.props.expected_degrees = {{vec2(0.1, 0.1), 1}};
        e.props.continuity = {{vec2(0, 0), true}, {vec2(-0.3, 0.2), true}};
        e.props.notes = "monotone perturbation of the identity, det > 0.78";
        return e;
    }
    if (name == "fold") {
        e.map = fold_map();
        e.props.det_sign = 0;
        e.props.sobolev_w1n = true;
        e.props.smooth = true;
        e.props.notes = "smoothed (x, |y|): det changes sign across y = 0";
        return e;
    }
    if (name == "spike") {
        const double amp = param(params, "amplitude", 10.0);
        const int res = static_cast<int>(param(params, "res", 64));
        return spike_fixture(Domain::ball(vec2(0, 0), 1.0, res), amp);
    }
    throw std::invalid_argument("preset: unknown map '" + name + "'");
}

std::vector<std::string> zoo_names() {
    return {"identity", "translate", "linear",     "rotation", "zpow", "winding_boundary",
            "angle",    "cavitation", "diffeo1",   "fold",     "spike"};
}

std::vector<ZooEntry> standard_zoo() {
    std::vector<ZooEntry> entries;
    for (const std::string& name : zoo_names()) {
        entries.push_back(preset(name));
        if (name == "zpow" || name == "winding_boundary")
            entries.push_back(preset(name, {{"k", 3.0}}));
    }
    return entries;
}

SurfaceMap surface_preset(const std::string& name) {
    SurfaceMap s;
    if (name == "flat") {
        s.f = MapField::analytic(
            2, 3, "flat", [](const Vec& x) { return vec3(x[0], x[1], 0.0); },
            [](const Vec&) {
                Mat g = Mat::Zero(3, 2);
                g(0, 0) = 1.0;
                g(1, 1) = 1.0;
                return g;
            });
        s.normal = MapField::analytic(
            2, 3, "flat_normal", [](const Vec&) { return vec3(0, 0, 1); },
            [](const Vec&) { return Mat(Mat::Zero(3, 2)); });
        return s;
    }
    if (name == "hemisphere") {
        // Patch of the unit sphere; the outward normal equals the position.
        auto value = [](const Vec& x) {
            const double z = std::sqrt(std::max(1e-12, 1.0 - x.squaredNorm()));
            return vec3(x[0], x[1], z);
        };
        auto grad = [](const Vec& x) {
            const double z = std::sqrt(std::max(1e-12, 1.0 - x.squaredNorm()));
            Mat g = Mat::Zero(3, 2);
            g(0, 0) = 1.0;
            g(1, 1) = 1.0;
            g(2, 0) = -x[0] / z;
            g(2, 1) = -x[1] / z;
            return g;
        };
        s.f = MapField::analytic(2, 3, "hemisphere", value, grad);
        s.normal = MapField::analytic(2, 3, "hemisphere_normal", value, grad);
        return s;
    }
    if (name == "graph") {
        s.f = MapField::analytic(
            2, 3, "graph", [](const Vec& x) { return vec3(x[0], x[1], x.squaredNorm()); },
            [](const Vec& x) {
                Mat g = Mat::Zero(3, 2);
                g(0, 0) = 1.0;
                g(1, 1) = 1.0;
                g(2, 0) = 2.0 * x[0];
                g(2, 1) = 2.0 * x[1];
                return g;
            });
        s.normal = normal_field(s.f);
        return s;
    }
    throw std::invalid_argument("surface_preset: unknown surface '" + name + "'");
}

MapField normal_field(const MapField& f) {
    if (f.source_dim() != 2 || f.target_dim() != 3)
        throw std::invalid_argument("normal_field: requires a map R^2 -> R^3");
    return MapField::analytic(2, 3, f.name() + "_normal", [f](const Vec& x) {
        const Mat g = f.gradient_or_fd(x, 1e-5);
        const Eigen::Vector3d t1 = g.col(0), t2 = g.col(1);
        Eigen::Vector3d nrm = t1.cross(t2);
        const double len = nrm.norm();
        if (len < 1e-10)
            throw std::domain_error("normal_field: rank-deficient differential");
        return vec3(nrm[0] / len, nrm[1] / len, nrm[2] / len);
    });
}

MapField tilde_F(const SurfaceMap& surface, double d) {
    if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("tilde_F: need 0 < d < 1");
    const MapField f = surface.f;
    const MapField nu = surface.normal;
    auto split = [](const Vec& xt) { return vec2(xt[0], xt[1]); };
    return MapField::analytic(
        3, 3, f.name() + "_thickened",
        [f, nu, split](const Vec& xt) -> Vec { return f(split(xt)) + xt[2] * nu(split(xt)); },
        [f, nu, split](const Vec& xt) {
            const Vec x = split(xt);
            const Mat gf = f.gradient_or_fd(x, 1e-6);
            const Mat gn = nu.gradient_or_fd(x, 1e-6);
            Mat g(3, 3);
            g.block(0, 0, 3, 2) = gf + xt[2] * gn;
            g.col(2) = nu(x);
            return g;
        });
}

Domain product_domain(const Domain& base, double d, int resolution) {
    if (base.kind() != DomainKind::Box || base.dimension() != 2)
        throw std::invalid_argument("product_domain: base must be a 2-d box");
    return Domain::box(vec3(base.bounding_lo()[0], base.bounding_lo()[1], -d),
                       vec3(base.bounding_hi()[0], base.bounding_hi()[1], d), resolution);
}

double dist_to_rotations_squared(const Mat& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    Eigen::VectorXd s = svd.singularValues();  // descending
    double d2 = 0.0;
    const int n = static_cast<int>(s.size());
    const bool flipped = a.determinant() < 0.0;
    for (int i = 0; i < n; ++i) {
        const double target = (flipped && i == n - 1) ? -1.0 : 1.0;
        d2 += (s[i] - target) * (s[i] - target);
    }
    return d2;
}

double dist_to_isometries_squared(const Mat& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const Eigen::VectorXd s = svd.singularValues();
    double d2 = 0.0;
    for (int i = 0; i < s.size(); ++i) d2 += (s[i] - 1.0) * (s[i] - 1.0);
    return d2;
}

EnergyResult elastic_energy(const MapField& map, const Domain& domain, const EnergySpec& spec) {
    if (map.source_dim() != map.target_dim())
        throw std::invalid_argument("elastic_energy: map must be square");
    const double h = 0.5 * domain.min_cell_size();
    const double halfn = 0.5 * spec.exponent;
    EnergyResult res;
    const double vol = domain.cell_volume();
    domain.for_each_cell([&](const Vec& x) {
        if (res.infinite) return;
        const Mat g = map.gradient_or_fd(x, h);
        res.stretch_term += std::pow(dist_to_rotations_squared(g), halfn) * vol;
        if (spec.theta == BarrierKind::LogBarrier) {
            const double det = g.determinant();
            if (det <= 0.0) {
                res.infinite = true;
                return;
            }
            res.barrier_term += -std::log(det) * vol;
        }
    });
    res.value = res.infinite ? 0.0 : res.stretch_term + res.barrier_term;
    return res;
}

EnergyResult immersion_energy(const SurfaceMap& surface, const Domain& domain) {
    const int n = domain.dimension();
    const double h = 0.5 * domain.min_cell_size();
    const double halfn = 0.5 * n;
    EnergyResult res;
    const double vol = domain.cell_volume();
    domain.for_each_cell([&](const Vec& x) {
        const Mat df = surface.f.gradient_or_fd(x, h);
        const Mat dn = surface.normal.gradient_or_fd(x, h);
        res.stretch_term += std::pow(dist_to_isometries_squared(df), halfn) * vol;
        res.barrier_term += std::pow(dn.norm(), n) * vol;  // bending
    });
    res.value = res.stretch_term + res.barrier_term;
    return res;
}

}  // namespace topodeg
