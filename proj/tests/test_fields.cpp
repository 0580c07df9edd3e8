#include "topodeg/fields.hpp"

#include "topodeg/mapzoo.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace topodeg;

namespace {

// Midpoint rule on [a, b]; the independent 1-d quadrature used as oracle.
double quad1d(const std::function<double(double)>& f, double a, double b, int panels = 4096) {
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) acc += f(a + (i + 0.5) * h);
    return acc * h;
}

}  // namespace

TEST_CASE("gradients of catalogue maps") {
    const Domain disk = Domain::ball(vec2(0, 0), 1.0, 64);

    SUBCASE("identity and diagonal") {
        const JacobianSample id = gradient(preset("identity").map, disk, vec2(0.3, -0.2));
        CHECK(id.det == doctest::Approx(1.0));
        CHECK((id.grad - Mat::Identity(2, 2)).norm() < 1e-14);

        Mat a(2, 2);
        a << 2, 0, 0, 3;
        const MapField lin = preset("linear", {{"a00", 2.0}, {"a11", 3.0}, {"a01", 0.0},
                                               {"a10", 0.0}}).map;
        const JacobianSample js = gradient(lin, disk, vec2(0.1, 0.1));
        CHECK((js.grad - a).norm() < 1e-14);
        CHECK(js.det == doctest::Approx(6.0));
    }

    SUBCASE("z^2 at (1,0)") {
        // f = (x^2 - y^2, 2xy), grad = [[2x, -2y], [2y, 2x]]; at (1,0) that is
        // 2I with det 4.
        const Domain big = Domain::ball(vec2(0, 0), 2.0, 64);
        const JacobianSample js = gradient(preset("zpow", {{"k", 2}}).map, big, vec2(1, 0));
        Mat expect(2, 2);
        expect << 2, 0, 0, 2;
        CHECK((js.grad - expect).norm() < 1e-12);
        CHECK(js.det == doctest::Approx(4.0));
    }

    SUBCASE("margin error for finite differences") {
        const MapField no_grad =
            MapField::analytic(2, 2, "plain", [](const Vec& x) { return x; });
        CHECK_THROWS_AS(gradient(no_grad, disk, vec2(0.999, 0), 0.01), std::domain_error);
    }
}

TEST_CASE("central differences converge at second order") {
    const std::vector<ZooEntry> zoo = standard_zoo();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    for (const ZooEntry& e : zoo) {
        if (!e.map.has_exact_gradient() || !e.props.smooth) continue;
        const MapField value_only =
            MapField::analytic(2, 2, e.name, [m = e.map](const Vec& x) { return m(x); });
        for (int probe = 0; probe < 4; ++probe) {
            const Vec x = vec2(unit(rng), unit(rng));
            const Mat exact = e.map.exact_gradient(x);
            const double e1 = (value_only.gradient_or_fd(x, 0.02) - exact).norm();
            const double e2 = (value_only.gradient_or_fd(x, 0.01) - exact).norm();
            if (e1 < 1e-12) continue;  // affine map, differences are exact
            CHECK(e2 < e1 / 3.0);
        }
    }
}

TEST_CASE("adjugate identity adj(A) A = det(A) I") {
    const Domain disk = Domain::ball(vec2(0, 0), 1.0, 64);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(-0.6, 0.6);
    for (const ZooEntry& e : standard_zoo()) {
        if (!e.map.has_exact_gradient()) continue;
        for (int probe = 0; probe < 50; ++probe) {
            Vec x = vec2(unit(rng), unit(rng));
            if (x.norm() < 1e-2) x[0] += 0.1;  // stay clear of punctures
            const JacobianSample js = gradient(e.map, disk, x);
            const Mat residual = js.adj * js.grad - js.det * Mat::Identity(2, 2);
            CHECK(residual.norm() <= 1e-9 * (1.0 + std::abs(js.det)));
        }
    }
}

TEST_CASE("midpoint integration") {
    const Domain disk = Domain::ball(vec2(0, 0), 1.0, 256);

    SUBCASE("area of the unit disk") {
        const double area = integrate([](const Vec&) { return 1.0; }, disk);
        CHECK(area == doctest::Approx(EIGEN_PI).epsilon(1e-3));
    }
    SUBCASE("circumference of the unit circle") {
        const BoundaryMesh mesh = boundary_mesh(disk, 1024);
        const double len = integrate([](const Vec&) { return 1.0; }, mesh);
        CHECK(len == doctest::Approx(2.0 * EIGEN_PI).epsilon(1e-4));
    }
    SUBCASE("x^2 over the unit disk") {
        // Polar oracle: integral r^3 cos^2 = (1/4)(pi).
        const double oracle =
            quad1d([](double r) { return r * r * r; }, 0.0, 1.0) *
            quad1d([](double t) { return std::cos(t) * std::cos(t); }, 0.0, 2.0 * EIGEN_PI);
        CHECK(oracle == doctest::Approx(EIGEN_PI / 4.0).epsilon(1e-6));
        const double val = integrate([](const Vec& x) { return x[0] * x[0]; }, disk);
        CHECK(val == doctest::Approx(oracle).epsilon(1e-3));
    }
}

TEST_CASE("sphere traces") {
    const Domain disk = Domain::ball(vec2(0, 0), 1.0, 64);

    SUBCASE("identity trace is the circle with unit differential") {
        const SphereTrace tr = sphere_trace(preset("identity").map, disk, vec2(0, 0), 0.5, 512);
        for (std::size_t i = 0; i < tr.values.size(); ++i)
            CHECK(tr.values[i].norm() == doctest::Approx(0.5).epsilon(1e-12));
        for (double t : tr.tangential_norm) CHECK(t == doctest::Approx(1.0).epsilon(1e-4));
    }
    SUBCASE("constant trace has zero differential") {
        const MapField c = MapField::analytic(2, 2, "const", [](const Vec&) { return vec2(1, 2); });
        const SphereTrace tr = sphere_trace(c, disk, vec2(0, 0), 0.5, 256);
        for (double t : tr.tangential_norm) CHECK(t == doctest::Approx(0.0));
    }
    SUBCASE("z^2 doubles the angle: |df| = 2|z|") {
        const SphereTrace tr =
            sphere_trace(preset("zpow", {{"k", 2}}).map, disk, vec2(0, 0), 0.5, 512);
        for (double t : tr.tangential_norm) CHECK(t == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("sobolev energy") {
    SUBCASE("identity on the unit square") {
        const Domain square = Domain::box(vec2(0, 0), vec2(1, 1), 64);
        CHECK(sobolev_energy(preset("identity").map, square, 2.0) ==
              doctest::Approx(2.0).epsilon(1e-6));
        const MapField c = MapField::analytic(
            2, 2, "const", [](const Vec&) { return vec2(1, 2); },
            [](const Vec&) { return Mat(Mat::Zero(2, 2)); });
        CHECK(sobolev_energy(c, square, 2.0) == doctest::Approx(0.0));
    }
    SUBCASE("angle map on the annulus 0.1 < r < 1") {
        // |grad(x/|x|)|_F^2 = 1/r^2; polar oracle 2 pi log 10.
        const double oracle = 2.0 * EIGEN_PI * quad1d([](double r) { return 1.0 / r; }, 0.1, 1.0);
        CHECK(oracle == doctest::Approx(2.0 * EIGEN_PI * std::log(10.0)).epsilon(1e-5));
        const Domain disk = Domain::ball(vec2(0, 0), 1.0, 512);
        const MapField angle = preset("angle").map;
        const double whole = sobolev_energy(angle, disk, 2.0);
        const double inner = local_sobolev_energy(angle, disk, vec2(0, 0), 0.1, 2.0);
        CHECK(whole - inner == doctest::Approx(oracle).epsilon(0.02));
    }
    SUBCASE("monotone under region inclusion") {
        const Domain disk = Domain::ball(vec2(0, 0), 1.0, 128);
        const MapField f = preset("diffeo1").map;
        const double small = local_sobolev_energy(f, disk, vec2(0.1, 0), 0.3, 2.0);
        const double large = local_sobolev_energy(f, disk, vec2(0.1, 0), 0.6, 2.0);
        CHECK(small <= large);
    }
}

TEST_CASE("coarea inequality") {
    const Domain disk = Domain::ball(vec2(0, 0), 1.0, 128);

    SUBCASE("identity: both sides in closed form") {
        const CoareaResult res = coarea_check(preset("identity").map, disk, vec2(0, 0), 0.5, 64);
        CHECK(res.holds);
        CHECK(res.lhs == doctest::Approx(EIGEN_PI * 0.25).epsilon(0.02));
        CHECK(res.rhs == doctest::Approx(2.0 * EIGEN_PI * 0.25).epsilon(0.02));
    }
    SUBCASE("constant map") {
        const MapField c = MapField::analytic(
            2, 2, "const", [](const Vec&) { return vec2(0, 0); },
            [](const Vec&) { return Mat(Mat::Zero(2, 2)); });
        const CoareaResult res = coarea_check(c, disk, vec2(0, 0), 0.5, 32);
        CHECK(res.lhs == doctest::Approx(0.0));
        CHECK(res.rhs == doctest::Approx(0.0));
        CHECK(res.holds);
    }
    SUBCASE("z^2: strict inequality, ratio one half") {
        const CoareaResult res =
            coarea_check(preset("zpow", {{"k", 2}}).map, disk, vec2(0, 0), 0.5, 64);
        CHECK(res.holds);
        CHECK(res.lhs / res.rhs == doctest::Approx(0.5).epsilon(0.05));
    }
    SUBCASE("random centers over the zoo") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> unit(-0.4, 0.4);
        std::uniform_real_distribution<double> rad(0.05, 0.25);
        for (const ZooEntry& e : standard_zoo()) {
            if (e.map.is_grid()) continue;
            for (int trial = 0; trial < 10; ++trial) {
                Vec a = vec2(unit(rng), unit(rng));
                const double r = rad(rng);
                // Punctured maps: keep the singular origin outside the ball.
                if (a.norm() < r + 0.05) a *= (r + 0.1) / std::max(a.norm(), 1e-6);
                const CoareaResult res = coarea_check(e.map, disk, a, r, 24);
                CHECK(res.holds);
            }
        }
    }
}

TEST_CASE("lebesgue averages") {
    const Domain disk = Domain::ball(vec2(0, 0), 1.0, 64);

    SUBCASE("constant and linear maps are reproduced") {
        const MapField c = MapField::analytic(2, 2, "const", [](const Vec&) { return vec2(3, -1); });
        CHECK((lebesgue_average(c, disk, vec2(0.2, 0.1), 0.3) - vec2(3, -1)).norm() < 1e-12);

        const MapField lin = preset("linear", {{"a00", 2.0}, {"a01", 1.0}, {"a10", 0.0},
                                               {"a11", -1.0}}).map;
        const Vec x = vec2(0.1, -0.2);
        CHECK((lebesgue_average(lin, disk, x, 0.25) - lin(x)).norm() < 1e-12);
    }
    SUBCASE("angle map averages to zero at the origin") {
        const Vec avg = lebesgue_average(preset("angle").map, disk, vec2(0, 0), 0.4);
        CHECK(avg.norm() < 1e-3);
    }
    SUBCASE("ball clipped by the domain still averages") {
        const MapField id = preset("identity").map;
        const Vec avg = lebesgue_average(id, disk, vec2(0.95, 0), 0.2);
        CHECK(avg.norm() < 1.0);  // stays inside the hull of sampled values
        CHECK_THROWS_AS(lebesgue_average(id, disk, vec2(2.5, 0), 0.2), std::domain_error);
    }
}

TEST_CASE("null-Lagrangian adjugate identity") {
    SUBCASE("constant adjugates vanish to roundoff with centered bumps") {
        const Domain disk = Domain::ball(vec2(0, 0), 1.0, 128);
        const auto fields = default_test_fields(disk);
        for (const auto& eta : fields) {
            const double r_id = adjugate_identity_check(preset("identity").map, disk, eta);
            CHECK(r_id < 1e-3);
        }
        // Symmetric lattice: the odd integrand cancels exactly.
        const MapField refl = preset("linear").map;  // diag(1, -1)
        CHECK(adjugate_identity_check(refl, disk, fields[0]) < 1e-6);
        CHECK(adjugate_identity_check(refl, disk, fields[2]) < 1e-6);
    }
    SUBCASE("z^2 residual small and shrinking under refinement") {
        const Domain coarse = Domain::ball(vec2(0, 0), 1.0, 128);
        const Domain fine = Domain::ball(vec2(0, 0), 1.0, 256);
        const MapField z2 = preset("zpow", {{"k", 2}}).map;
        const auto eta = default_test_fields(fine).back();  // offset bump
        const double rc = adjugate_identity_check(z2, coarse, eta);
        const double rf = adjugate_identity_check(z2, fine, eta);
        CHECK(rf < 1e-2);
        CHECK(rf <= rc + 1e-9);
    }
}

TEST_CASE("grid-backed maps") {
    const Domain square = Domain::box(vec2(-1, -1), vec2(1, 1), 64);
    const MapField smooth = preset("diffeo1").map;

    SUBCASE("multilinear interpolation matches smooth maps") {
        const MapField grid = MapField::sample_to_grid(square, 2, 1, "diffeo1_grid",
                                               [&](const Vec& x) { return smooth(x); });
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> unit(-0.9, 0.9);
        for (int probe = 0; probe < 100; ++probe) {
            const Vec x = vec2(unit(rng), unit(rng));
            CHECK((grid(x) - smooth(x)).norm() < 1e-4);
        }
    }
    SUBCASE("cubic interpolation is tighter than linear") {
        const MapField lin = MapField::sample_to_grid(square, 2, 1, "g1",
                                              [&](const Vec& x) { return smooth(x); });
        const MapField cub = MapField::sample_to_grid(square, 2, 3, "g3",
                                              [&](const Vec& x) { return smooth(x); });
        double err1 = 0.0, err3 = 0.0;
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> unit(-0.8, 0.8);
        for (int probe = 0; probe < 200; ++probe) {
            const Vec x = vec2(unit(rng), unit(rng));
            err1 += (lin(x) - smooth(x)).norm();
            err3 += (cub(x) - smooth(x)).norm();
        }
        CHECK(err3 < err1);
    }
    SUBCASE("evaluation clamps to the bounding box") {
        const MapField grid = MapField::sample_to_grid(square, 2, 1, "clamped",
                                               [&](const Vec& x) { return smooth(x); });
        CHECK((grid(vec2(1.5, 0)) - grid(vec2(1.0, 0))).norm() < 1e-12);
    }
}

TEST_CASE("grid modulus of the identity is one cell") {
    const Domain disk = Domain::ball(vec2(0, 0), 1.0, 64);
    CHECK(grid_modulus(preset("identity").map, disk) ==
          doctest::Approx(2.0 / 64).epsilon(1e-9));
}
