#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace topodeg {

// Source and target dimensions are 2 or 3 (plus the t-axis of product
// domains), so points and gradients live in stack-allocated Eigen types
// capped at 3.
inline constexpr int kMaxDim = 3;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

inline Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

inline Vec vec3(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

/// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return EIGEN_PI;
        case 3: return 4.0 * EIGEN_PI / 3.0;
        default: throw std::invalid_argument("unit_ball_volume: n must be 1, 2 or 3");
    }
}

/// Surface area of the sphere of radius r in R^n (n = ambient dimension).
inline double sphere_area(int n, double r) {
    return n * unit_ball_volume(n) * std::pow(r, n - 1);
}

/// Adjugate (transposed cofactor matrix): adj(A) * A = det(A) * I.
Mat adjugate(const Mat& a);

/// Max pairwise distance of a point set. Exact O(N^2) scan.
double set_diameter(const std::vector<Vec>& points);

/// Smallest enclosing ball (Welzl), dimensions 2 and 3.
struct EnclosingBall {
    Vec center;
    double radius = 0.0;
};
EnclosingBall smallest_enclosing_ball(const std::vector<Vec>& points);

/// Worker count for batch loops. Results are deterministic regardless of
/// the setting: every parallel loop writes into per-index slots and
/// reductions run in index order.
void set_jobs(int jobs);
int jobs();

/// Runs fn(i) for i in [0, count), possibly across threads.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

}  // namespace topodeg
