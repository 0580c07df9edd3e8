#include "topodeg/mapzoo.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace topodeg;

namespace {

double quad1d(const std::function<double(double)>& f, double a, double b, int panels = 8192) {
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) acc += f(a + (i + 0.5) * h);
    return acc * h;
}

}  // namespace

TEST_CASE("preset values and gradients") {
    SUBCASE("zpow k=2 at (1,0)") {
        const ZooEntry e = preset("zpow", {{"k", 2}});
        CHECK((e.map(vec2(1, 0)) - vec2(1, 0)).norm() < 1e-14);
        CHECK(e.map.exact_gradient(vec2(1, 0)).determinant() == doctest::Approx(4.0));
    }
    SUBCASE("rotation has unit determinant everywhere") {
        const ZooEntry e = preset("rotation", {{"theta", EIGEN_PI / 3.0}});
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> unit(-1, 1);
        for (int probe = 0; probe < 100; ++probe) {
            const Vec x = vec2(unit(rng), unit(rng));
            CHECK(e.map.exact_gradient(x).determinant() == doctest::Approx(1.0));
        }
    }
    SUBCASE("cavitation pushes radius out by one") {
        const ZooEntry e = preset("cavitation");
        CHECK(e.map(vec2(0.5, 0)).norm() == doctest::Approx(1.5));
        CHECK(e.map(vec2(0, -0.25)).norm() == doctest::Approx(1.25));
    }
    SUBCASE("unknown preset") {
        CHECK_THROWS_AS(preset("warp"), std::invalid_argument);
    }
}

TEST_CASE("declared determinant signs hold at seeded samples") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(-0.95, 0.95);
    for (const ZooEntry& e : standard_zoo()) {
        if (e.map.is_grid()) continue;
        int samples = 0;
        while (samples < 1000) {
            Vec x = vec2(unit(rng), unit(rng));
            if (x.norm() >= 0.95 || x.norm() < 1e-3) continue;
            ++samples;
            const double det = e.map.exact_gradient(x).determinant();
            if (e.props.det_sign > 0) CHECK(det > 0.0);
            if (e.props.det_sign < 0) CHECK(det < 0.0);
            if (e.props.det_nonneg) CHECK(det >= -1e-9);
        }
    }
}

TEST_CASE("normal fields") {
    SUBCASE("flat sheet") {
        const SurfaceMap flat = surface_preset("flat");
        CHECK((flat.normal(vec2(0.3, -0.1)) - vec3(0, 0, 1)).norm() < 1e-12);
    }
    SUBCASE("graph normal at the origin via the cross product") {
        // tangents (1,0,2x), (0,1,2y) -> normal (-2x,-2y,1)/sqrt(1+4r^2).
        const SurfaceMap graph = surface_preset("graph");
        CHECK((graph.normal(vec2(0, 0)) - vec3(0, 0, 1)).norm() < 1e-9);
        const Vec n = graph.normal(vec2(0.5, 0));
        const Vec expect = vec3(-1.0, 0, 1.0) / std::sqrt(2.0);
        CHECK((n - expect).norm() < 1e-6);
    }
    SUBCASE("reversed parameter order flips the normal") {
        const MapField swapped = MapField::analytic(
            2, 3, "flat_swapped", [](const Vec& x) { return vec3(x[1], x[0], 0.0); });
        const MapField n = normal_field(swapped);
        CHECK((n(vec2(0.1, 0.2)) - vec3(0, 0, -1)).norm() < 1e-9);
    }
    SUBCASE("degenerate surface") {
        const MapField collapsed = MapField::analytic(
            2, 3, "line", [](const Vec& x) { return vec3(x[0] + x[1], x[0] + x[1], 0.0); });
        CHECK_THROWS_AS(normal_field(collapsed)(vec2(0, 0)), std::domain_error);
    }
}

TEST_CASE("thickened sheet") {
    SUBCASE("flat sheet thickens to the identity embedding") {
        const MapField f = tilde_F(surface_preset("flat"), 0.5);
        CHECK((f(vec3(0.2, 0.7, 0.3)) - vec3(0.2, 0.7, 0.3)).norm() < 1e-12);
        CHECK(f.exact_gradient(vec3(0.2, 0.7, 0.3)).determinant() == doctest::Approx(1.0));
    }
    SUBCASE("hemisphere thickens radially") {
        const MapField f = tilde_F(surface_preset("hemisphere"), 0.3);
        const Vec x = vec2(0.3, -0.2);
        const Vec base = surface_preset("hemisphere").f(x);
        for (double t : {-0.2, 0.0, 0.15}) {
            const Vec val = f(vec3(x[0], x[1], t));
            CHECK((val - (1.0 + t) * base).norm() < 1e-12);
        }
    }
    SUBCASE("half-thickness is restricted to (0,1)") {
        CHECK_THROWS_AS(tilde_F(surface_preset("flat"), 1.5), std::invalid_argument);
    }
    SUBCASE("block gradient matches finite differences") {
        const MapField f = tilde_F(surface_preset("hemisphere"), 0.3);
        const MapField value_only =
            MapField::analytic(3, 3, "fd", [f](const Vec& x) { return f(x); });
        for (const Vec& xt : {vec3(0.1, 0.2, 0.1), vec3(-0.3, 0.1, -0.2), vec3(0.0, 0.4, 0.25)}) {
            const Mat fd = value_only.gradient_or_fd(xt, 1e-5);
            CHECK((fd - f.exact_gradient(xt)).norm() < 1e-7);
        }
    }
    SUBCASE("product domain requires a box base") {
        const Domain square = Domain::box(vec2(0, 0), vec2(1, 1), 32);
        const Domain prod = product_domain(square, 0.5, 32);
        CHECK(prod.dimension() == 3);
        CHECK(prod.bounding_lo()[2] == doctest::Approx(-0.5));
        const Domain disk = Domain::ball(vec2(0, 0), 1.0, 32);
        CHECK_THROWS_AS(product_domain(disk, 0.5, 32), std::invalid_argument);
    }
}

TEST_CASE("elastic energy") {
    const Domain square = Domain::box(vec2(0, 0), vec2(1, 1), 64);

    SUBCASE("rotations cost nothing under the log barrier") {
        EnergySpec spec;
        spec.theta = BarrierKind::LogBarrier;
        const EnergyResult res = elastic_energy(preset("rotation").map, square, spec);
        CHECK_FALSE(res.infinite);
        CHECK(res.value == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("uniform dilation by 2: distance^2 to SO(2) is 2") {
        // Singular values {2, 2}: closest rotation leaves (2-1)^2 + (2-1)^2.
        const MapField twice = preset("linear", {{"a00", 2.0}, {"a01", 0.0}, {"a10", 0.0},
                                                 {"a11", 2.0}}).map;
        EnergySpec spec;
        spec.theta = BarrierKind::None;
        const EnergyResult res = elastic_energy(twice, square, spec);
        CHECK(res.value == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("orientation reversal hits the barrier") {
        EnergySpec spec;
        spec.theta = BarrierKind::LogBarrier;
        const EnergyResult res = elastic_energy(preset("linear").map, square, spec);
        CHECK(res.infinite);
    }
    SUBCASE("left rotation leaves the stretch term invariant") {
        const MapField f = preset("diffeo1").map;
        const MapField rf = MapField::analytic(
            2, 2, "rot_diffeo1",
            [f](const Vec& x) {
                const Vec v = f(x);
                const double c = std::cos(0.7), s = std::sin(0.7);
                return vec2(c * v[0] - s * v[1], s * v[0] + c * v[1]);
            },
            [f](const Vec& x) {
                Mat r(2, 2);
                r << std::cos(0.7), -std::sin(0.7), std::sin(0.7), std::cos(0.7);
                return Mat(r * f.exact_gradient(x));
            });
        EnergySpec spec;
        spec.theta = BarrierKind::None;
        const double a = elastic_energy(f, square, spec).stretch_term;
        const double b = elastic_energy(rf, square, spec).stretch_term;
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
}

TEST_CASE("immersion energy") {
    SUBCASE("flat sheet is free") {
        const Domain square = Domain::box(vec2(0, 0), vec2(1, 1), 64);
        const EnergyResult res = immersion_energy(surface_preset("flat"), square);
        CHECK(res.value == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("doubled flat sheet stretches by 2") {
        // df singular values {2, 2}: dist^2 to the isometries is 2.
        SurfaceMap doubled = surface_preset("flat");
        doubled.f = MapField::analytic(
            2, 3, "flat2", [](const Vec& x) { return vec3(2 * x[0], 2 * x[1], 0.0); },
            [](const Vec&) {
                Mat g = Mat::Zero(3, 2);
                g(0, 0) = 2.0;
                g(1, 1) = 2.0;
                return g;
            });
        const Domain square = Domain::box(vec2(0, 0), vec2(1, 1), 64);
        const EnergyResult res = immersion_energy(doubled, square);
        CHECK(res.stretch_term == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(res.barrier_term == doctest::Approx(0.0));
    }
    SUBCASE("hemisphere bending matches the polar oracle") {
        // nu = f on the unit sphere, |grad nu|_F^2 = 2 + r^2/(1 - r^2).
        const double oracle =
            2.0 * EIGEN_PI *
            quad1d([](double r) { return (2.0 + r * r / (1.0 - r * r)) * r; }, 0.0, 0.6);
        const Domain patch = Domain::ball(vec2(0, 0), 0.6, 256);
        const EnergyResult res = immersion_energy(surface_preset("hemisphere"), patch);
        CHECK(res.barrier_term == doctest::Approx(oracle).epsilon(5e-3));
        CHECK(res.stretch_term > 0.0);
    }
}

TEST_CASE("spike fixture displaces exactly one vertex") {
    const Domain disk = Domain::ball(vec2(0, 0), 1.0, 32);
    const ZooEntry spike = spike_fixture(disk, 10.0);
    const GridData& data = spike.map.grid_data();
    int displaced = 0;
    for (std::int64_t i = 0; i < data.vertex_count(); ++i) {
        std::array<int, kMaxDim> ix{};
        std::int64_t rest = i;
        for (int a = 1; a >= 0; --a) {
            ix[a] = static_cast<int>(rest % data.verts_per_axis());
            rest /= data.verts_per_axis();
        }
        const Vec expect = data.vertex_point(ix);
        if ((data.vertex_value(i) - expect).norm() > 1e-12) ++displaced;
    }
    CHECK(displaced == 1);
}
