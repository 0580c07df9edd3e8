#pragma once

#include "topodeg/fields.hpp"

#include <string>
#include <vector>

namespace topodeg {

enum class DegreeMethod { Counting, Integral, Winding, BoundaryPullback };

const char* degree_method_name(DegreeMethod m);

struct DegreeReport {
    Vec y;
    DegreeMethod method = DegreeMethod::Counting;
    int value = 0;
    double raw = 0.0;       // pre-rounding value (integral / pull-back)
    double residual = 0.0;  // |raw - value|
    bool inconclusive = false;
    std::vector<std::pair<Vec, int>> preimages;  // counting: (root, det sign)
    double bump_radius = 0.0;
    int mesh_resolution = 0;
    std::string note;
};

struct DegreeOptions {
    double tol = 1e-8;            // preimage match / dedupe tolerance
    double tau_regular = 0.0;     // regular-value floor; 0 = 1e-8 x det scale
    double bump_radius = 0.15;
    int boundary_resolution = 1024;
    int bump_quadrature = 0;      // cells per axis on the bump support; 0 = auto
    double clearance = 0.0;       // required dist(y, f(boundary)); 0 = auto
    double fd_step = 0.0;         // 0 = domain cell size based
};

/// Signed preimage count: grid scan for local minima of |f - y|, Newton
/// polish, dedupe, Sard guard on |det|.
DegreeReport degree_by_counting(const MapField& map, const Domain& domain, const Vec& y,
                                const DegreeOptions& opts = {});

/// integral of g(f) det grad f over the domain divided by the bump mass.
DegreeReport degree_by_integral(const MapField& map, const Domain& domain, const Vec& y,
                                const DegreeOptions& opts = {});

/// Accumulated turning angle of a closed planar curve around y, over 2 pi.
/// Exact for polygons that avoid y.
int winding_number(const std::vector<Vec>& loop, const Vec& y);

/// Boundary-only degree: the (n-1)-form built from the Newtonian field of
/// the bump is pulled back through the trace and integrated over the mesh.
DegreeReport boundary_pullback_degree(const MapField& map, const Domain& domain, const Vec& y,
                                      const DegreeOptions& opts = {});

/// Point-source limit of the pull-back formula: polygon winding number
/// (n=2) or summed solid angles (n=3). Exact integer for traces that avoid
/// y; used by the degree rasters.
int boundary_trace_degree(const BoundaryMesh& mesh, const std::vector<Vec>& values, const Vec& y);

std::vector<Vec> boundary_values(const MapField& map, const BoundaryMesh& mesh);
double image_distance(const std::vector<Vec>& values, const Vec& y);
/// Max image jump across one mesh element: the raster boundary-flag width.
double image_spacing(const BoundaryMesh& mesh, const std::vector<Vec>& values);
/// Max |grad f| over a coarse sample of the domain.
double gradient_scale(const MapField& map, const Domain& domain);

struct AxiomCheck {
    std::string name;
    bool passed = false;
    std::string witness;  // failure details, empty when passed
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool all_passed = true;
};

/// Exercises the degree axioms at the given probes: attainability,
/// local constancy, stability under small perturbation, linear-homotopy
/// invariance of trace-equal pairs, excision, and (optionally) the
/// injective => degree +-1 rule.
AxiomReport degree_axiom_harness(const MapField& map, const Domain& domain,
                                 const std::vector<Vec>& probes, const DegreeOptions& opts = {},
                                 bool assume_injective = false);

}  // namespace topodeg
