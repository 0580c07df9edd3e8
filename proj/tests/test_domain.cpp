#include "topodeg/domain.hpp"

#include <doctest.h>

#include <cmath>

using namespace topodeg;

TEST_CASE("domain construction and cell volume") {
    const Domain disk = Domain::ball(vec2(0, 0), 1.0, 128);
    CHECK(disk.cell_volume() == doctest::Approx(std::pow(2.0 / 128, 2)).epsilon(1e-12));
    CHECK(disk.min_feature() == 1.0);

    const Domain square = Domain::box(vec2(0, 0), vec2(1, 1), 64);
    CHECK(square.cell_count() == 64 * 64);
    CHECK(square.cell_volume() == doctest::Approx(1.0 / (64 * 64)));

    CHECK_THROWS_AS(Domain::ball(vec2(0, 0), 0.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(Domain::box(vec2(0, 0), vec2(0, 1), 64), std::invalid_argument);
    CHECK_THROWS_AS(Domain::ball(vec2(0, 0), 1.0, 4), std::invalid_argument);
}

TEST_CASE("interior grid points lie strictly inside") {
    const Domain disk = Domain::ball(vec2(0.5, -0.25), 0.8, 32);
    disk.for_each_cell([&](const Vec& x) { CHECK(disk.signed_distance(x) < 0.0); });
}

TEST_CASE("boundary mesh measures") {
    SUBCASE("unit circle length") {
        const Domain disk = Domain::ball(vec2(0, 0), 1.0, 64);
        const BoundaryMesh mesh = boundary_mesh(disk, 1024);
        CHECK(mesh.total_measure() == doctest::Approx(2.0 * EIGEN_PI).epsilon(1e-4));
    }
    SUBCASE("unit square perimeter is exact") {
        const Domain square = Domain::box(vec2(0, 0), vec2(1, 1), 64);
        const BoundaryMesh mesh = boundary_mesh(square, 400);
        CHECK(mesh.total_measure() == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("triangulated sphere area converges to 4 pi") {
        const Domain ball = Domain::ball(vec3(0, 0, 0), 1.0, 16);
        // Refinement oracle: area error shrinks with the vertex budget.
        double prev_err = std::numeric_limits<double>::infinity();
        for (int budget : {2048, 8192, 32768}) {
            const BoundaryMesh mesh = boundary_mesh(ball, budget);
            const double err = std::abs(mesh.total_measure() - 4.0 * EIGEN_PI);
            CHECK(err < prev_err);
            prev_err = err;
        }
        CHECK(prev_err < 4.0 * EIGEN_PI * 1e-3);
    }
}

TEST_CASE("discrete divergence theorem on affine fields") {
    // For v(x) = x the flux over the boundary equals n |Omega|.
    for (int dim : {2, 3}) {
        const Domain ball = dim == 2 ? Domain::ball(vec2(0.1, 0.2), 0.9, 32)
                                     : Domain::ball(vec3(0.1, 0.2, 0.0), 0.9, 16);
        const Domain box = dim == 2 ? Domain::box(vec2(-1, 0), vec2(2, 1), 32)
                                    : Domain::box(vec3(-1, 0, 0), vec3(2, 1, 1), 16);
        for (const Domain& d : {ball, box}) {
            const BoundaryMesh mesh = boundary_mesh(d, dim == 2 ? 2048 : 32768);
            double flux = 0.0;
            for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
                const int ei = static_cast<int>(e);
                flux += mesh.element_centroid(ei).dot(mesh.outward_normal(ei)) * mesh.measures[e];
            }
            double volume = 0.0;
            if (d.kind() == DomainKind::Ball) {
                volume = unit_ball_volume(dim) * std::pow(d.radius(), dim);
            } else {
                volume = (d.bounding_hi() - d.bounding_lo()).prod();
            }
            CHECK(flux == doctest::Approx(dim * volume).epsilon(1e-3));
        }
    }
}

TEST_CASE("sphere meshes") {
    const Domain disk = Domain::ball(vec2(0, 0), 1.0, 64);
    const BoundaryMesh circle = sphere_mesh(disk, vec2(0, 0), 0.5, 1024);
    CHECK(circle.total_measure() == doctest::Approx(EIGEN_PI).epsilon(1e-4));

    CHECK_THROWS_AS(sphere_mesh(disk, vec2(0.8, 0), 0.5, 256), std::domain_error);

    const Domain ball3 = Domain::ball(vec3(0, 0, 0), 1.0, 16);
    const BoundaryMesh s3 = sphere_mesh(ball3, vec3(0, 0, 0), 0.3, 32768);
    CHECK(s3.total_measure() ==
          doctest::Approx(4.0 * EIGEN_PI * 0.3 * 0.3).epsilon(1e-3));
}

TEST_CASE("tubular projection") {
    Domain square = Domain::box(vec2(0, 0), vec2(1, 1), 64);
    square.set_tube_width(0.1);

    const TubularPoint above = tubular_project(square, vec2(0.5, 1.02));
    CHECK(above.projection[0] == doctest::Approx(0.5));
    CHECK(above.projection[1] == doctest::Approx(1.0));
    CHECK(above.reflection[1] == doctest::Approx(0.98));
    CHECK(above.signed_distance == doctest::Approx(0.02));

    // Outside a corner the nearest point is the corner itself.
    const TubularPoint corner = tubular_project(square, vec2(1.02, 1.02));
    CHECK(corner.projection[0] == doctest::Approx(1.0));
    CHECK(corner.projection[1] == doctest::Approx(1.0));
    CHECK(corner.reflection[0] == doctest::Approx(0.98));
    CHECK(corner.reflection[1] == doctest::Approx(0.98));
    CHECK(square.contains(corner.reflection));

    const Domain disk = Domain::ball(vec2(0, 0), 1.0, 64);
    const TubularPoint outside = tubular_project(disk, vec2(1.05, 0));
    CHECK(outside.projection[0] == doctest::Approx(1.0));
    CHECK(outside.reflection[0] == doctest::Approx(0.95));

    CHECK_THROWS_AS(tubular_project(disk, vec2(1.5, 0)), std::domain_error);
    CHECK_THROWS_AS(tubular_project(disk, vec2(0, 0)), std::domain_error);
}

TEST_CASE("reflection through the boundary is an involution") {
    const Domain disk = Domain::ball(vec2(0.2, -0.1), 1.0, 64);
    for (const Vec& x : {vec2(1.25, -0.1), vec2(0.2, 0.95), vec2(-0.75, -0.1)}) {
        const TubularPoint tp = tubular_project(disk, x);
        const TubularPoint back = tubular_project(disk, tp.reflection);
        CHECK((back.reflection - x).norm() < 1e-12);
    }
    const Domain square = Domain::box(vec2(0, 0), vec2(2, 1), 64);
    for (const Vec& x : {vec2(1.0, 1.05), vec2(1.0, 0.97), vec2(0.02, 0.5)}) {
        const TubularPoint tp = tubular_project(square, x);
        const TubularPoint back = tubular_project(square, tp.reflection);
        CHECK((back.reflection - x).norm() < 1e-12);
    }
}

TEST_CASE("inner domains") {
    const Domain disk = Domain::ball(vec2(0, 0), 1.0, 64);
    const Domain shrunk = inner_domain(disk, 0.1);
    CHECK(shrunk.radius() == doctest::Approx(0.9));

    const Domain square = Domain::box(vec2(0, 0), vec2(1, 1), 64);
    const Domain inner = inner_domain(square, 0.25);
    CHECK(inner.bounding_lo()[0] == doctest::Approx(0.25));
    CHECK(inner.bounding_hi()[1] == doctest::Approx(0.75));

    CHECK_THROWS_AS(inner_domain(disk, 1.0), std::domain_error);

    // Nesting: the smaller shrinkage contains the larger one.
    const Domain a = inner_domain(disk, 0.05);
    const Domain b = inner_domain(disk, 0.2);
    b.for_each_cell([&](const Vec& x) { CHECK(a.contains(x)); });
}
