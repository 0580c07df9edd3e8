#pragma once

#include "topodeg/fields.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace topodeg {

struct BmoBall {
    Vec center;
    double eps = 0.0;
};

/// Deterministic stratified sampling plan: dyadic scale ladder times a
/// jittered center lattice, every ball admissible (eps < dist(center,
/// boundary)). The plan is recorded in the profile so estimates are
/// reproducible.
struct BmoPlan {
    std::uint64_t seed = 0;
    std::vector<double> scales;
    std::vector<BmoBall> balls;
};

BmoPlan make_bmo_plan(const Domain& domain, std::uint64_t seed, int num_scales = 5,
                      double base_scale = 0.0, int max_centers_per_scale = 64);

struct BmoProfile {
    BmoPlan plan;
    double seminorm = 0.0;
    std::vector<std::pair<double, double>> modulus;  // (eps, omega(eps))
};

/// Mean oscillation of f over the admissible ball B_eps(x).
double mean_oscillation(const MapField& map, const Domain& domain, const Vec& x, double eps,
                        int radial_level = 0);

BmoProfile bmo_seminorm(const MapField& map, const Domain& domain, const BmoPlan& plan);

/// omega(eps) = max mean oscillation over a center lattice anchored at the
/// domain center (descending eps list).
std::vector<std::pair<double, double>> vmo_modulus(const MapField& map, const Domain& domain,
                                                   const std::vector<double>& eps_list);

/// f extended across the boundary by reflection through the tube.
MapField reflect_extend(const MapField& map, const Domain& domain);

/// Convolution with the smooth radially symmetric unit-mass kernel at scale
/// eps, sampled onto a lattice and interpolated. `extended` must be defined
/// on the domain plus its tube (see reflect_extend); eps < 0.8 tube width.
MapField mollify(const MapField& extended, const Domain& domain, double eps, int cache_res = 0);

/// x -> mean of f over B_eps(x) as a grid-backed field on the shrunken
/// domain; continuous by construction.
MapField average_field(const MapField& map, const Domain& domain, double eps, int cache_res = 0);

/// Boundary trace values binned in the target space with their surface
/// measures; values whose bin mass stays below the cutoff are treated as
/// measure-zero noise.
struct EssentialRangeModel {
    std::vector<Vec> bin_centers;
    std::vector<double> bin_mass;
    std::vector<std::vector<Vec>> bin_values;
    double total_mass = 0.0;
    double cutoff_mass = 0.0;

    double distance(const Vec& p) const;
};

EssentialRangeModel essential_range(const std::vector<Vec>& trace_values,
                                    const std::vector<double>& measures,
                                    double mass_cutoff_frac = 1e-3, int bins = 64);

double essential_range_distance(const std::vector<Vec>& trace_values,
                                const std::vector<double>& measures, const Vec& p,
                                double mass_cutoff_frac = 1e-3);

/// d0 estimate: the smallest mean |f - p| over boundary-adjacent balls
/// B_eps(x) with eps = dist(x, boundary), sampled over a dyadic offset
/// ladder along the boundary mesh.
double boundary_ball_margin(const MapField& map, const Domain& domain, const Vec& p,
                            int offset_levels = 4, int mesh_resolution = 128);

struct VmoDegreeReport {
    Vec p;
    std::vector<double> schedule;
    std::vector<std::optional<int>> degrees;  // per eps; empty = trace hit p
    bool stabilized = false;
    int value = 0;
    double margin_d0 = 0.0;
};

struct VmoDegreeOptions {
    double margin_floor = 1e-6;
    int boundary_resolution = 512;
    int cache_res = 0;
};

/// deg(avg_eps f, Omega_eps, p) along the schedule; stabilized when the
/// last three levels agree.
VmoDegreeReport vmo_degree(const MapField& map, const Domain& domain, const Vec& p,
                           const std::vector<double>& schedule,
                           const VmoDegreeOptions& opts = {});

struct CovCheckReport {
    double lhs = 0.0;       // integral of g(f) det grad f
    double rhs = 0.0;       // degree x bump mass
    double residual = 0.0;  // |lhs - rhs| / bump mass
    int degree = 0;
    bool stabilized = false;
};

/// Change-of-variables identity with the bump g centered at p; the support
/// must clear the essential range of the boundary trace.
CovCheckReport vmo_change_of_variables_check(const MapField& map, const Domain& domain,
                                             const Vec& p, double bump_radius,
                                             const std::vector<double>& schedule,
                                             const VmoDegreeOptions& opts = {});

/// |mean over B_eps(x) of f(z) psi((x-z)/eps)| with psi = 1 - vol(B_1) eta,
/// the zero-mean counterpart of the mollifier kernel.
double null_kernel_term(const MapField& map, const Domain& domain, const Vec& x, double eps,
                        int radial_level = 0);
/// Max of the above over the vmo_modulus center lattice.
double null_kernel_sup(const MapField& map, const Domain& domain, double eps);

}  // namespace topodeg
