#include "topodeg/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace topodeg {

Mat adjugate(const Mat& a) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n) throw std::invalid_argument("adjugate: square matrix required");
    Mat adj(n, n);
    switch (n) {
        case 1:
            adj(0, 0) = 1.0;
            break;
        case 2:
            adj(0, 0) = a(1, 1);
            adj(0, 1) = -a(0, 1);
            adj(1, 0) = -a(1, 0);
            adj(1, 1) = a(0, 0);
            break;
        case 3:
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    // adj(i,j) = cofactor(j,i)
                    const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
                    const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
                    adj(i, j) = a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
                }
            }
            break;
        default:
            throw std::invalid_argument("adjugate: dimension must be <= 3");
    }
    return adj;
}

double set_diameter(const std::vector<Vec>& points) {
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            best = std::max(best, (points[i] - points[j]).norm());
    return best;
}

namespace {

EnclosingBall ball_from(const std::vector<Vec>& support) {
    EnclosingBall b;
    if (support.empty()) {
        b.center = Vec::Zero(1);
        b.radius = -1.0;
        return b;
    }
    const int dim = static_cast<int>(support[0].size());
    if (support.size() == 1) {
        b.center = support[0];
        b.radius = 0.0;
        return b;
    }
    if (support.size() == 2) {
        b.center = 0.5 * (support[0] + support[1]);
        b.radius = 0.5 * (support[0] - support[1]).norm();
        return b;
    }
    // Circumsphere of 3 or 4 affinely independent points: solve the linear
    // system from |c - p_i|^2 = |c - p_0|^2.
    const int k = static_cast<int>(support.size()) - 1;
    Eigen::MatrixXd m(k, dim);
    Eigen::VectorXd rhs(k);
    for (int i = 0; i < k; ++i) {
        const Vec d = support[i + 1] - support[0];
        for (int j = 0; j < dim; ++j) m(i, j) = 2.0 * d[j];
        rhs[i] = support[i + 1].squaredNorm() - support[0].squaredNorm();
    }
    Eigen::VectorXd c = m.colPivHouseholderQr().solve(rhs);
    b.center = Vec(dim);
    for (int j = 0; j < dim; ++j) b.center[j] = c[j];
    b.radius = (b.center - support[0]).norm();
    return b;
}

bool in_ball(const EnclosingBall& b, const Vec& p, double slack) {
    return (p - b.center).norm() <= b.radius * (1.0 + slack) + 1e-14;
}

EnclosingBall welzl(std::vector<Vec>& pts, std::size_t count, std::vector<Vec>& support, int dim) {
    if (count == 0 || static_cast<int>(support.size()) == dim + 1) return ball_from(support);
    EnclosingBall b = welzl(pts, count - 1, support, dim);
    const Vec& p = pts[count - 1];
    if (b.radius >= 0.0 && in_ball(b, p, 1e-12)) return b;
    support.push_back(p);
    b = welzl(pts, count - 1, support, dim);
    support.pop_back();
    return b;
}

}  // namespace

EnclosingBall smallest_enclosing_ball(const std::vector<Vec>& points) {
    if (points.empty()) throw std::invalid_argument("smallest_enclosing_ball: empty set");
    const int dim = static_cast<int>(points[0].size());
    std::vector<Vec> pts = points;
    // Deterministic shuffle keeps the expected-linear behavior of Welzl
    // without depending on input order.
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    for (std::size_t i = pts.size(); i > 1; --i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        std::swap(pts[i - 1], pts[(state >> 16) % i]);
    }
    std::vector<Vec> support;
    EnclosingBall b = welzl(pts, pts.size(), support, dim);
    // Guard against rank-deficient supports: grow to cover everything.
    for (const Vec& p : points) b.radius = std::max(b.radius, (p - b.center).norm());
    return b;
}

namespace {
std::atomic<int> g_jobs{0};  // 0 = auto
}

void set_jobs(int j) { g_jobs.store(j); }

int jobs() {
    int j = g_jobs.load();
    if (j > 0) return j;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp<unsigned>(hw, 1, 8));
}

void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn) {
    const int workers = std::min<std::int64_t>(jobs(), count);
    if (workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::int64_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t begin = w * chunk;
        const std::int64_t end = std::min(count, begin + chunk);
        pool.emplace_back([&fn, begin, end] {
            for (std::int64_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace topodeg
