#include "oracles.hpp"

#include <landsite/core_types.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace landsite;

TEST(LiftToPlane, HorizontalPlaneAtHeight)
{
    const Point3 p = lift_to_plane({0.0, 0.0}, Plane{0.0, 0.0, 1.0, -5.0});
    EXPECT_EQ(p, (Point3{0.0, 0.0, 5.0}));
}

TEST(LiftToPlane, GroundPlane)
{
    const Point3 p = lift_to_plane({1.0, 2.0}, Plane{0.0, 0.0, 1.0, 0.0});
    EXPECT_EQ(p, (Point3{1.0, 2.0, 0.0}));
}

TEST(LiftToPlane, SlopedPlaneMatchesLeastSquaresFit)
{
    const std::vector<Point3> pts{{0, 0, 0}, {1, 0, 0.1}, {0, 1, 0}};
    const Vec3 n = cross(pts[1] - pts[0], pts[2] - pts[0]);
    const Plane plane = Plane::through(pts[0], n);
    EXPECT_NEAR(norm(plane.normal()), 1.0, 1e-12);

    const Point3 lifted = lift_to_plane({1.0, 0.0}, plane);
    EXPECT_NEAR(lifted.z, oracle::lsq_plane_z(pts, 1.0, 0.0), 1e-12);
    EXPECT_NEAR(lifted.z, 0.1, 1e-12);
    EXPECT_NEAR(plane.evaluate(lifted), 0.0, 1e-9);
}

TEST(LiftToPlane, VerticalPlaneRejected)
{
    EXPECT_THROW(lift_to_plane({0, 0}, Plane{1.0, 0.0, 0.0, 0.0}), VerticalPlane);
    EXPECT_THROW(lift_to_plane({0, 0}, Plane::from_coefficients(1.0, 0.0, 1e-7, 0.0)), VerticalPlane);
}

TEST(LiftToPlane, RandomPlanesSatisfyEquation)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const Plane pl = Plane::from_coefficients(u(rng), u(rng), 0.2 + std::abs(u(rng)), 10.0 * u(rng));
        const Point2 q{50.0 * u(rng), 50.0 * u(rng)};
        const Point3 p = lift_to_plane(q, pl);
        EXPECT_NEAR(pl.evaluate(p), 0.0, 1e-9);
        // Dropping z and lifting again reproduces the point.
        const Point3 again = lift_to_plane({p.x, p.y}, pl);
        EXPECT_NEAR(again.z, p.z, 1e-9);
    }
}

TEST(Plane, NormalizesCoefficients)
{
    const Plane p = Plane::from_coefficients(0.0, 3.0, 4.0, 10.0);
    EXPECT_NEAR(p.b, 0.6, 1e-15);
    EXPECT_NEAR(p.c, 0.8, 1e-15);
    EXPECT_NEAR(p.d, 2.0, 1e-15);
    EXPECT_THROW(Plane::from_coefficients(0, 0, 0, 1), std::invalid_argument);
}

TEST(ClassifiedPointCloud, RejectsMismatchedLengths)
{
    EXPECT_THROW(ClassifiedPointCloud({{0, 0, 0}}, {}), std::invalid_argument);
}

TEST(ClassifiedPointCloud, RejectsNonFinite)
{
    EXPECT_THROW(ClassifiedPointCloud({{0, std::nan(""), 0}}, {classes::rooftop}), std::invalid_argument);
    EXPECT_THROW(ClassifiedPointCloud({{INFINITY, 0, 0}}, {classes::rooftop}), std::invalid_argument);
}

TEST(ClassifiedPointCloud, EmptyIsValid)
{
    ClassifiedPointCloud c({}, {});
    EXPECT_TRUE(c.empty());
}

TEST(PolygonWithHoles, OrientationNormalizedRegardlessOfInput)
{
    const Ring ccw{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
    const Ring cw(ccw.rbegin(), ccw.rend());
    const Ring hole_ccw{{3, 3}, {7, 3}, {7, 7}, {3, 7}};
    const Ring hole_cw(hole_ccw.rbegin(), hole_ccw.rend());

    for (const auto& outer : {ccw, cw}) {
        for (const auto& hole : {hole_ccw, hole_cw}) {
            PolygonWithHoles poly(outer, {hole});
            EXPECT_GT(signed_area(poly.outer()), 0.0);
            EXPECT_LT(signed_area(poly.holes()[0]), 0.0);
            EXPECT_DOUBLE_EQ(poly.area(), 100.0 - 16.0);
        }
    }
}
