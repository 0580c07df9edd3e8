#pragma once

#include "topodeg/domain.hpp"
#include "topodeg/geometry.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace topodeg {

/// Vertex samples of a map over the (resolution+1)^n lattice spanning the
/// domain's bounding box, row-major with the last axis fastest.
struct GridData {
    Domain domain;
    int target_dim = 0;
    int order = 1;  // 1 = multilinear, 3 = cubic (Catmull-Rom)
    std::vector<double> samples;

    int verts_per_axis() const { return domain.resolution() + 1; }
    std::int64_t vertex_count() const;
    std::int64_t vertex_index(const std::array<int, kMaxDim>& ix) const;
    Vec vertex_point(const std::array<int, kMaxDim>& ix) const;
    Vec vertex_value(std::int64_t flat) const;
    Vec eval(const Vec& x) const;  // coordinates clamped to the bounding box
};

/// A map from a subset of R^n to R^m, either analytic (value callback plus
/// optional exact gradient) or grid-sampled with interpolation.
class MapField {
  public:
    using ValueFn = std::function<Vec(const Vec&)>;
    using GradFn = std::function<Mat(const Vec&)>;

    MapField() = default;  // empty placeholder; use the factories below

    static MapField analytic(int n, int m, std::string name, ValueFn value, GradFn grad = nullptr);
    static MapField from_grid(Domain domain, int target_dim, std::vector<double> samples,
                              int order, std::string name);
    /// Samples fn on the lattice of `domain` and wraps the result.
    static MapField sample_to_grid(const Domain& domain, int target_dim, int order,
                                   std::string name, const ValueFn& fn);

    int source_dim() const { return n_; }
    int target_dim() const { return m_; }
    const std::string& name() const { return name_; }

    bool is_grid() const { return grid_ != nullptr; }
    const GridData& grid_data() const;
    bool has_exact_gradient() const { return static_cast<bool>(grad_); }

    Vec operator()(const Vec& x) const { return value_(x); }
    Mat exact_gradient(const Vec& x) const;
    /// Exact gradient when available, else central differences with step h.
    Mat gradient_or_fd(const Vec& x, double h) const;

  private:
    int n_ = 0, m_ = 0;
    std::string name_;
    ValueFn value_;
    GradFn grad_;
    std::shared_ptr<const GridData> grid_;
};

struct JacobianSample {
    Vec point;
    Mat grad;          // m x n
    bool square = false;
    double det = 0.0;  // filled when m == n
    Mat adj;           // filled when m == n
};

struct SphereTrace {
    Vec center;
    double radius = 0.0;
    BoundaryMesh mesh;
    std::vector<Vec> values;                 // per vertex
    std::vector<double> tangential_norm;     // |df_rho| per element
};

struct CoareaResult {
    double lhs = 0.0;  // integral over radii of the sphere Dirichlet n-energy
    double rhs = 0.0;  // ball Dirichlet n-energy
    bool holds = false;
};

/// Smooth compactly supported vector field used by the null-Lagrangian
/// check; grad(x) row k holds the partial derivatives of component k.
struct TestField {
    std::string name;
    std::function<Vec(const Vec&)> value;
    std::function<Mat(const Vec&)> grad;
};

/// The standard bump exp(-1/(1-|u|^2)) scaled to B_radius(center).
double bump_value(const Vec& center, double radius, const Vec& x);
/// Integral of the scaled bump over R^n (radial quadrature, cached per n).
double bump_integral(int n, double radius);

/// eta(x) = coeffs * bump((x-center)/radius); exact gradient.
TestField radial_bump_field(const Vec& center, double radius, const Vec& coeffs);
std::vector<TestField> default_test_fields(const Domain& domain);

/// Gradient with determinant and adjugate when the map is square. Central
/// differences (step h, default = domain min cell size) when no exact
/// gradient is available; the probed cross must stay inside the domain.
JacobianSample gradient(const MapField& map, const Domain& domain, const Vec& x, double h = 0.0);

/// Midpoint-rule quadrature over interior grid cells.
double integrate(const std::function<double(const Vec&)>& field, const Domain& region);
/// Element-centroid quadrature over a boundary mesh.
double integrate(const std::function<double(const Vec&)>& field, const BoundaryMesh& region);

/// Midpoint polar/spherical quadrature over the ball B_r(c). Weight sum
/// equals the ball volume up to the angular midpoint error; callers that
/// compute means normalize by the weight sum.
void ball_quadrature(int n, const Vec& c, double r, int radial_level,
                     const std::function<void(const Vec&, double)>& fn);

SphereTrace sphere_trace(const MapField& map, const BoundaryMesh& sphere);
SphereTrace sphere_trace(const MapField& map, const Domain& domain, const Vec& a, double r,
                         int resolution);

/// Integral of |grad f|_F^p over the region's interior cells.
double sobolev_energy(const MapField& map, const Domain& region, double p, double h = 0.0);
/// Same but restricted to cells of `domain` inside B_radius(center).
double local_sobolev_energy(const MapField& map, const Domain& domain, const Vec& center,
                            double radius, double p, double h = 0.0);

/// Both sides of the sphere/ball Dirichlet energy inequality with g == 1:
/// integral over rho in (0, r) of the S_rho n-energy vs the B_r n-energy.
CoareaResult coarea_check(const MapField& map, const Domain& domain, const Vec& a, double r,
                          int radial_samples);

/// Mean of f over B_rho(x) intersected with the domain.
Vec lebesgue_average(const MapField& map, const Domain& domain, const Vec& x, double rho,
                     int radial_level = 24);

/// |integral of trace(grad eta * adj grad f)|; vanishes for W^{1,n} maps.
double adjugate_identity_check(const MapField& map, const Domain& domain, const TestField& eta);

/// Max |f(a) - f(b)| over axis-adjacent interior cell centers.
double grid_modulus(const MapField& map, const Domain& domain);

}  // namespace topodeg
