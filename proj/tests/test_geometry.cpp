#include <doctest.h>

#include "vhj/geometry.hpp"

using namespace vhj;

TEST_CASE("interval shape basics") {
    Shape s = Shape::interval(-1.0, 1.0);
    CHECK(s.contains({0.0, 0.0}));
    CHECK(s.contains({1.0, 0.0}));
    CHECK(!s.contains({1.5, 0.0}));
    CHECK(s.boundary_distance({0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(s.boundary_distance({0.7, 0.0}) == doctest::Approx(0.3));
    CHECK(s.inradius() == doctest::Approx(1.0));
    CHECK(s.diameter() == doctest::Approx(2.0));
}

TEST_CASE("degenerate extents are rejected") {
    CHECK_THROWS_AS(Shape::interval(1.0, 1.0), GeometryError);
    CHECK_THROWS_AS(Shape::box({0.0, 0.0}, {0.0, 1.0}), GeometryError);
    CHECK_THROWS_AS(Shape::ball({0.0, 0.0}, 0.0), GeometryError);
}

TEST_CASE("ball distance is radial") {
    Shape b = Shape::ball({0.0, 0.0}, 3.0);
    CHECK(b.boundary_distance({2.5, 0.0}) == doctest::Approx(0.5));
    CHECK(b.boundary_distance({0.0, -2.0}) == doctest::Approx(1.0));
}

TEST_CASE("box distance is the min over sides") {
    Shape b = Shape::box({0.0, 0.0}, {2.0, 1.0});
    CHECK(b.boundary_distance({1.0, 0.5}) == doctest::Approx(0.5));
    CHECK(b.boundary_distance({0.25, 0.5}) == doctest::Approx(0.25));
}

TEST_CASE("annulus requires a strictly interior target ball") {
    Shape outer = Shape::ball({0.0, 0.0}, 3.0);
    CHECK_NOTHROW(Domain::annulus(outer, {0.0, 0.0}, 1.0));
    CHECK_THROWS_AS(Domain::annulus(outer, {0.0, 0.0}, 3.0), GeometryError);
    CHECK_THROWS_AS(Domain::annulus(outer, {2.5, 0.0}, 1.0), GeometryError);
}

TEST_CASE("annulus distance ignores the target ball") {
    // d_U is distance to the outer boundary only.
    Domain ann = Domain::annulus(Shape::ball({0.0, 0.0}, 3.0), {0.0, 0.0}, 1.0);
    CHECK(ann.boundary_distance({2.9, 0.0}) == doctest::Approx(0.1));
    CHECK(ann.boundary_distance({1.05, 0.0}) == doctest::Approx(1.95));
}

TEST_CASE("target membership includes the sphere itself") {
    Domain ann = Domain::annulus(Shape::interval(-3.0, 3.0), {0.0, 0.0}, 1.0);
    CHECK(ann.in_target({1.0, 0.0}));
    CHECK(ann.in_target({-0.5, 0.0}));
    CHECK(!ann.in_target({1.01, 0.0}));
}
