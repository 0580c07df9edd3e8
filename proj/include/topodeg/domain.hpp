#pragma once

#include "topodeg/geometry.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace topodeg {

enum class DomainKind { Box, Ball };

/// Nearest-boundary data for a point in the tubular neighborhood of the
/// boundary. The reflection 2P(x)-x lands inside the domain whenever x
/// lies outside within the tube.
struct TubularPoint {
    Vec projection;          // P(x), nearest point on the boundary
    double signed_distance;  // negative inside the domain
    Vec reflection;          // 2P(x) - x
};

/// Computational domain: an axis-aligned box or a ball in R^2 / R^3 with a
/// uniform cell grid over its bounding box. Cells whose centers fall
/// strictly inside the domain are the quadrature cells. Immutable after
/// construction.
class Domain {
  public:
    Domain() = default;  // empty placeholder; use the factories below

    static Domain box(const Vec& lo, const Vec& hi, int resolution);
    static Domain ball(const Vec& center, double radius, int resolution);

    DomainKind kind() const { return kind_; }
    int dimension() const { return n_; }
    int resolution() const { return res_; }

    const Vec& bounding_lo() const { return lo_; }
    const Vec& bounding_hi() const { return hi_; }
    const Vec& center() const { return center_; }  // ball only
    double radius() const { return radius_; }      // ball only

    /// Per-axis cell edge length.
    Vec cell_size() const;
    double cell_volume() const;
    /// Smallest cell edge (used for default finite-difference steps).
    double min_cell_size() const;

    /// Negative inside, positive outside, zero on the boundary.
    double signed_distance(const Vec& x) const;
    bool contains(const Vec& x) const { return signed_distance(x) < 0.0; }
    /// Distance to the boundary for points inside (r_x of the ball
    /// admissibility rule). Negative for outside points.
    double dist_to_boundary(const Vec& x) const { return -signed_distance(x); }

    /// Radius (ball) or smallest side (box).
    double min_feature() const;

    double tube_width() const { return tube_width_; }
    void set_tube_width(double w);

    /// Number of grid cells with center strictly inside the domain.
    std::int64_t cell_count() const;
    /// Visits interior cell centers in row-major order (last axis fastest).
    void for_each_cell(const std::function<void(const Vec&)>& fn) const;
    /// Visits interior cell centers within the ball B_r(c), same order.
    void for_each_cell_in_ball(const Vec& c, double r,
                               const std::function<void(const Vec&)>& fn) const;

    /// Center of the grid cell with per-axis indices ix (0..res-1), whether
    /// inside the domain or not.
    Vec cell_center(const std::array<int, kMaxDim>& ix) const;

  private:
    DomainKind kind_ = DomainKind::Box;
    int n_ = 0;
    int res_ = 0;
    Vec lo_, hi_;       // bounding box (equals the extent for boxes)
    Vec center_;        // ball
    double radius_ = 0; // ball
    double tube_width_ = 0;
};

/// Discretized boundary: a positively oriented polygon (n=2) or a
/// watertight, outward-oriented triangle mesh (n=3).
struct BoundaryMesh {
    int dimension = 0;
    std::vector<Vec> vertices;
    // n=2: (a, b, -1) consecutive polygon segments; n=3: (a, b, c) triangles
    // oriented so that the normal points outward.
    std::vector<std::array<int, 3>> elements;
    std::vector<double> measures;  // segment lengths / triangle areas

    double total_measure() const;
    Vec element_centroid(int e) const;
    /// Unit outward normal of element e.
    Vec outward_normal(int e) const;
};

Domain make_domain(DomainKind kind, const Vec& lo_or_center, const Vec& hi,
                   double radius, int resolution);

BoundaryMesh boundary_mesh(const Domain& domain, int boundary_resolution);

/// Mesh of the sphere S_r(a); requires B_r(a) inside the domain.
BoundaryMesh sphere_mesh(const Domain& domain, const Vec& a, double r, int resolution);

/// Nearest boundary point, signed distance and reflection for x within the
/// tube around the boundary. Throws if x lies farther than the tube width.
TubularPoint tubular_project(const Domain& domain, const Vec& x);

/// The shrunken domain {x : dist(x, boundary) > eps} of the same kind.
Domain inner_domain(const Domain& domain, double eps);

}  // namespace topodeg
