#include "topodeg/domain.hpp"

#include <algorithm>
#include <cmath>

namespace topodeg {

namespace {

void check_dimension(int n) {
    if (n < 2 || n > kMaxDim)
        throw std::invalid_argument("domain: dimension must be 2 or 3");
}

constexpr int kMinResolution = 8;
constexpr int kMinBoundaryResolution = 16;

}  // namespace

Domain Domain::box(const Vec& lo, const Vec& hi, int resolution) {
    const int n = static_cast<int>(lo.size());
    check_dimension(n);
    if (hi.size() != n) throw std::invalid_argument("domain: lo/hi dimension mismatch");
    for (int i = 0; i < n; ++i)
        if (!(hi[i] > lo[i])) throw std::invalid_argument("domain: degenerate box extent");
    if (resolution < kMinResolution)
        throw std::invalid_argument("domain: resolution must be >= 8");
    Domain d;
    d.kind_ = DomainKind::Box;
    d.n_ = n;
    d.res_ = resolution;
    d.lo_ = lo;
    d.hi_ = hi;
    d.center_ = 0.5 * (lo + hi);
    d.radius_ = 0.0;
    d.tube_width_ = 0.1 * d.min_feature();
    return d;
}

Domain Domain::ball(const Vec& center, double radius, int resolution) {
    const int n = static_cast<int>(center.size());
    check_dimension(n);
    if (!(radius > 0.0)) throw std::invalid_argument("domain: ball radius must be positive");
    if (resolution < kMinResolution)
        throw std::invalid_argument("domain: resolution must be >= 8");
    Domain d;
    d.kind_ = DomainKind::Ball;
    d.n_ = n;
    d.res_ = resolution;
    d.center_ = center;
    d.radius_ = radius;
    d.lo_ = center.array() - radius;
    d.hi_ = center.array() + radius;
    d.tube_width_ = 0.1 * radius;
    return d;
}

Vec Domain::cell_size() const {
    return (hi_ - lo_) / static_cast<double>(res_);
}

double Domain::cell_volume() const {
    return cell_size().prod();
}

double Domain::min_cell_size() const {
    return cell_size().minCoeff();
}

double Domain::signed_distance(const Vec& x) const {
    if (kind_ == DomainKind::Ball) return (x - center_).norm() - radius_;
    // Box SDF.
    double inside = -std::numeric_limits<double>::infinity();
    double outside_sq = 0.0;
    bool outside = false;
    for (int i = 0; i < n_; ++i) {
        const double d = std::max(lo_[i] - x[i], x[i] - hi_[i]);
        if (d > 0.0) {
            outside = true;
            outside_sq += d * d;
        } else {
            inside = std::max(inside, d);
        }
    }
    return outside ? std::sqrt(outside_sq) : inside;
}

double Domain::min_feature() const {
    if (kind_ == DomainKind::Ball) return radius_;
    return (hi_ - lo_).minCoeff();
}

void Domain::set_tube_width(double w) {
    if (!(w > 0.0) || w >= min_feature())
        throw std::invalid_argument("domain: tube width must be in (0, min feature)");
    tube_width_ = w;
}

std::int64_t Domain::cell_count() const {
    std::int64_t c = 0;
    for_each_cell([&c](const Vec&) { ++c; });
    return c;
}

void Domain::for_each_cell(const std::function<void(const Vec&)>& fn) const {
    const Vec h = cell_size();
    Vec x(n_);
    if (n_ == 2) {
        for (int i = 0; i < res_; ++i) {
            x[0] = lo_[0] + (i + 0.5) * h[0];
            for (int j = 0; j < res_; ++j) {
                x[1] = lo_[1] + (j + 0.5) * h[1];
                if (contains(x)) fn(x);
            }
        }
    } else {
        for (int i = 0; i < res_; ++i) {
            x[0] = lo_[0] + (i + 0.5) * h[0];
            for (int j = 0; j < res_; ++j) {
                x[1] = lo_[1] + (j + 0.5) * h[1];
                for (int k = 0; k < res_; ++k) {
                    x[2] = lo_[2] + (k + 0.5) * h[2];
                    if (contains(x)) fn(x);
                }
            }
        }
    }
}

void Domain::for_each_cell_in_ball(const Vec& c, double r,
                                   const std::function<void(const Vec&)>& fn) const {
    const Vec h = cell_size();
    std::array<int, kMaxDim> first{}, last{};
    for (int a = 0; a < n_; ++a) {
        first[a] = std::max(0, static_cast<int>(std::ceil((c[a] - r - lo_[a]) / h[a] - 0.5)));
        last[a] = std::min(res_ - 1, static_cast<int>(std::floor((c[a] + r - lo_[a]) / h[a] - 0.5)));
    }
    const double r2 = r * r;
    Vec x(n_);
    if (n_ == 2) {
        for (int i = first[0]; i <= last[0]; ++i) {
            x[0] = lo_[0] + (i + 0.5) * h[0];
            for (int j = first[1]; j <= last[1]; ++j) {
                x[1] = lo_[1] + (j + 0.5) * h[1];
                if ((x - c).squaredNorm() <= r2 && contains(x)) fn(x);
            }
        }
    } else {
        for (int i = first[0]; i <= last[0]; ++i) {
            x[0] = lo_[0] + (i + 0.5) * h[0];
            for (int j = first[1]; j <= last[1]; ++j) {
                x[1] = lo_[1] + (j + 0.5) * h[1];
                for (int k = first[2]; k <= last[2]; ++k) {
                    x[2] = lo_[2] + (k + 0.5) * h[2];
                    if ((x - c).squaredNorm() <= r2 && contains(x)) fn(x);
                }
            }
        }
    }
}

Vec Domain::cell_center(const std::array<int, kMaxDim>& ix) const {
    const Vec h = cell_size();
    Vec x(n_);
    for (int a = 0; a < n_; ++a) x[a] = lo_[a] + (ix[a] + 0.5) * h[a];
    return x;
}

double BoundaryMesh::total_measure() const {
    double s = 0.0;
    for (double m : measures) s += m;
    return s;
}

Vec BoundaryMesh::element_centroid(int e) const {
    const auto& el = elements[e];
    if (dimension == 2) return 0.5 * (vertices[el[0]] + vertices[el[1]]);
    return (vertices[el[0]] + vertices[el[1]] + vertices[el[2]]) / 3.0;
}

Vec BoundaryMesh::outward_normal(int e) const {
    const auto& el = elements[e];
    if (dimension == 2) {
        // Positively oriented polygon: outward normal is the tangent
        // rotated clockwise.
        Vec t = vertices[el[1]] - vertices[el[0]];
        t.normalize();
        return vec2(t[1], -t[0]);
    }
    const Eigen::Vector3d a = vertices[el[0]], b = vertices[el[1]], c = vertices[el[2]];
    Eigen::Vector3d nrm = (b - a).cross(c - a);
    nrm.normalize();
    Vec out(3);
    out << nrm[0], nrm[1], nrm[2];
    return out;
}

Domain make_domain(DomainKind kind, const Vec& lo_or_center, const Vec& hi, double radius,
                   int resolution) {
    if (kind == DomainKind::Box) return Domain::box(lo_or_center, hi, resolution);
    return Domain::ball(lo_or_center, radius, resolution);
}

namespace {

BoundaryMesh circle_mesh(const Vec& c, double r, int count) {
    BoundaryMesh mesh;
    mesh.dimension = 2;
    mesh.vertices.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double th = 2.0 * EIGEN_PI * i / count;
        mesh.vertices.push_back(vec2(c[0] + r * std::cos(th), c[1] + r * std::sin(th)));
    }
    for (int i = 0; i < count; ++i) {
        const int j = (i + 1) % count;
        mesh.elements.push_back({i, j, -1});
        mesh.measures.push_back((mesh.vertices[j] - mesh.vertices[i]).norm());
    }
    return mesh;
}

BoundaryMesh rect_mesh(const Vec& lo, const Vec& hi, int count) {
    // Counterclockwise walk over the four sides; corners are exact
    // vertices so the total length equals the perimeter.
    const std::array<Vec, 4> corners = {vec2(lo[0], lo[1]), vec2(hi[0], lo[1]),
                                        vec2(hi[0], hi[1]), vec2(lo[0], hi[1])};
    const double perimeter = 2.0 * ((hi - lo)[0] + (hi - lo)[1]);
    BoundaryMesh mesh;
    mesh.dimension = 2;
    for (int e = 0; e < 4; ++e) {
        const Vec a = corners[e];
        const Vec b = corners[(e + 1) % 4];
        const double len = (b - a).norm();
        const int k = std::max(1, static_cast<int>(std::lround(count * len / perimeter)));
        for (int i = 0; i < k; ++i)
            mesh.vertices.push_back(a + (static_cast<double>(i) / k) * (b - a));
    }
    const int total = static_cast<int>(mesh.vertices.size());
    for (int i = 0; i < total; ++i) {
        const int j = (i + 1) % total;
        mesh.elements.push_back({i, j, -1});
        mesh.measures.push_back((mesh.vertices[j] - mesh.vertices[i]).norm());
    }
    return mesh;
}

void push_triangle(BoundaryMesh& mesh, int a, int b, int c, const Vec& outward_hint) {
    const Eigen::Vector3d pa = mesh.vertices[a], pb = mesh.vertices[b], pc = mesh.vertices[c];
    Eigen::Vector3d nrm = (pb - pa).cross(pc - pa);
    const double area = 0.5 * nrm.norm();
    if (area <= 0.0) return;
    Eigen::Vector3d hint(outward_hint[0], outward_hint[1], outward_hint[2]);
    if (nrm.dot(hint) < 0.0) std::swap(b, c);
    mesh.elements.push_back({a, b, c});
    mesh.measures.push_back(area);
}

BoundaryMesh uv_sphere_mesh(const Vec& c, double r, int target_vertices) {
    const int nlat = std::max(4, static_cast<int>(std::ceil(std::sqrt(target_vertices / 2.0))));
    const int nlon = 2 * nlat;
    BoundaryMesh mesh;
    mesh.dimension = 3;
    mesh.vertices.push_back(vec3(c[0], c[1], c[2] + r));  // north pole
    for (int i = 1; i < nlat; ++i) {
        const double th = EIGEN_PI * i / nlat;
        for (int j = 0; j < nlon; ++j) {
            const double ph = 2.0 * EIGEN_PI * j / nlon;
            mesh.vertices.push_back(vec3(c[0] + r * std::sin(th) * std::cos(ph),
                                         c[1] + r * std::sin(th) * std::sin(ph),
                                         c[2] + r * std::cos(th)));
        }
    }
    const int south = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(vec3(c[0], c[1], c[2] - r));
    auto ring = [&](int i, int j) { return 1 + (i - 1) * nlon + (j % nlon); };
    auto hint = [&](int a) { return Vec(mesh.vertices[a] - c); };
    for (int j = 0; j < nlon; ++j) push_triangle(mesh, 0, ring(1, j), ring(1, j + 1), hint(0));
    for (int i = 1; i < nlat - 1; ++i) {
        for (int j = 0; j < nlon; ++j) {
            push_triangle(mesh, ring(i, j), ring(i + 1, j), ring(i + 1, j + 1), hint(ring(i, j)));
            push_triangle(mesh, ring(i, j), ring(i + 1, j + 1), ring(i, j + 1), hint(ring(i, j)));
        }
    }
    for (int j = 0; j < nlon; ++j)
        push_triangle(mesh, south, ring(nlat - 1, j + 1), ring(nlat - 1, j), hint(south));
    return mesh;
}

BoundaryMesh box_surface_mesh(const Vec& lo, const Vec& hi, int target_vertices) {
    const int k = std::max(2, static_cast<int>(std::ceil(std::sqrt(target_vertices / 6.0))));
    BoundaryMesh mesh;
    mesh.dimension = 3;
    const Vec center = 0.5 * (lo + hi);
    for (int axis = 0; axis < 3; ++axis) {
        for (int side = 0; side < 2; ++side) {
            const double plane = side == 0 ? lo[axis] : hi[axis];
            const int u = (axis + 1) % 3, v = (axis + 2) % 3;
            const int base = static_cast<int>(mesh.vertices.size());
            for (int i = 0; i <= k; ++i) {
                for (int j = 0; j <= k; ++j) {
                    Vec p(3);
                    p[axis] = plane;
                    p[u] = lo[u] + (hi[u] - lo[u]) * i / k;
                    p[v] = lo[v] + (hi[v] - lo[v]) * j / k;
                    mesh.vertices.push_back(p);
                }
            }
            Vec out = Vec::Zero(3);
            out[axis] = side == 0 ? -1.0 : 1.0;
            (void)center;
            auto at = [&](int i, int j) { return base + i * (k + 1) + j; };
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) {
                    push_triangle(mesh, at(i, j), at(i + 1, j), at(i + 1, j + 1), out);
                    push_triangle(mesh, at(i, j), at(i + 1, j + 1), at(i, j + 1), out);
                }
            }
        }
    }
    return mesh;
}

}  // namespace

BoundaryMesh boundary_mesh(const Domain& domain, int boundary_resolution) {
    if (boundary_resolution < kMinBoundaryResolution)
        throw std::invalid_argument("boundary_mesh: resolution must be >= 16");
    if (domain.dimension() == 2) {
        if (domain.kind() == DomainKind::Ball)
            return circle_mesh(domain.center(), domain.radius(), boundary_resolution);
        return rect_mesh(domain.bounding_lo(), domain.bounding_hi(), boundary_resolution);
    }
    if (domain.kind() == DomainKind::Ball)
        return uv_sphere_mesh(domain.center(), domain.radius(), boundary_resolution);
    return box_surface_mesh(domain.bounding_lo(), domain.bounding_hi(), boundary_resolution);
}

BoundaryMesh sphere_mesh(const Domain& domain, const Vec& a, double r, int resolution) {
    if (!(r > 0.0)) throw std::domain_error("sphere_mesh: radius must be positive");
    if (!domain.contains(a) || domain.dist_to_boundary(a) <= r)
        throw std::domain_error("sphere_mesh: ball not contained in the domain (r >= r_a)");
    if (domain.dimension() == 2) return circle_mesh(a, r, std::max(resolution, kMinBoundaryResolution));
    return uv_sphere_mesh(a, r, std::max(resolution, kMinBoundaryResolution));
}

TubularPoint tubular_project(const Domain& domain, const Vec& x) {
    const int n = domain.dimension();
    TubularPoint tp;
    tp.signed_distance = domain.signed_distance(x);
    if (std::abs(tp.signed_distance) > domain.tube_width())
        throw std::domain_error("tubular_project: point outside the tube");
    if (domain.kind() == DomainKind::Ball) {
        const Vec d = x - domain.center();
        const double len = d.norm();
        if (len < 1e-300) throw std::domain_error("tubular_project: point at the ball center");
        tp.projection = domain.center() + (domain.radius() / len) * d;
    } else {
        const Vec& lo = domain.bounding_lo();
        const Vec& hi = domain.bounding_hi();
        if (tp.signed_distance > 0.0) {
            // Outside: componentwise clamp gives the nearest point, which
            // may be a corner.
            tp.projection = x.cwiseMax(lo).cwiseMin(hi);
        } else {
            // Inside: snap the coordinate closest to a face.
            tp.projection = x;
            int best_axis = 0;
            double best_val = lo[0];
            double best_dist = std::numeric_limits<double>::infinity();
            for (int a = 0; a < n; ++a) {
                if (x[a] - lo[a] < best_dist) {
                    best_dist = x[a] - lo[a];
                    best_axis = a;
                    best_val = lo[a];
                }
                if (hi[a] - x[a] < best_dist) {
                    best_dist = hi[a] - x[a];
                    best_axis = a;
                    best_val = hi[a];
                }
            }
            tp.projection[best_axis] = best_val;
        }
    }
    tp.reflection = 2.0 * tp.projection - x;
    return tp;
}

Domain inner_domain(const Domain& domain, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("inner_domain: eps must be positive");
    if (eps >= 0.5 * domain.min_feature())
        throw std::domain_error("inner_domain: eps leaves an empty domain");
    if (domain.kind() == DomainKind::Ball)
        return Domain::ball(domain.center(), domain.radius() - eps, domain.resolution());
    const Vec lo = domain.bounding_lo().array() + eps;
    const Vec hi = domain.bounding_hi().array() - eps;
    return Domain::box(lo, hi, domain.resolution());
}

}  // namespace topodeg
