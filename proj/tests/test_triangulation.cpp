#include "oracles.hpp"

#include <landsite/triangulation.hpp>

#include <gtest/gtest.h>

#include <cstring>
#include <numbers>
#include <random>
#include <set>

using namespace landsite;

namespace {

double area2(const Triangulation& t, const Triangle& tr)
{
    const auto& a = t.points2d[tr.v0];
    const auto& b = t.points2d[tr.v1];
    const auto& c = t.points2d[tr.v2];
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Structural checks shared by every input: twin involution with matching
// endpoints, strictly counter-clockwise triangles, every distinct point used.
void expect_well_formed(const Triangulation& t)
{
    ASSERT_EQ(t.halfedges.size(), 3 * t.triangles.size());
    for (std::size_t e = 0; e < t.halfedges.size(); ++e) {
        const std::size_t twin = t.halfedges[e];
        if (twin == kNoEdge) continue;
        ASSERT_LT(twin, t.halfedges.size());
        EXPECT_EQ(t.halfedges[twin], e);
        EXPECT_EQ(t.edge_start(e), t.edge_end(twin));
        EXPECT_EQ(t.edge_end(e), t.edge_start(twin));
    }
    std::set<std::size_t> used;
    for (const auto& tr : t.triangles) {
        EXPECT_GT(area2(t, tr), 0.0);
        EXPECT_NE(tr.v0, tr.v1);
        EXPECT_NE(tr.v1, tr.v2);
        EXPECT_NE(tr.v0, tr.v2);
        used.insert(tr.v0);
        used.insert(tr.v1);
        used.insert(tr.v2);
    }
    EXPECT_EQ(used.size(), t.unique_points);
}

// Brute force: no input point strictly inside any triangle's circumcircle.
std::size_t delaunay_violations(const Triangulation& t, double tol)
{
    std::size_t bad = 0;
    for (const auto& tr : t.triangles) {
        const auto& a = t.points2d[tr.v0];
        const auto& b = t.points2d[tr.v1];
        const auto& c = t.points2d[tr.v2];
        for (std::size_t i = 0; i < t.points2d.size(); ++i) {
            if (i == tr.v0 || i == tr.v1 || i == tr.v2) continue;
            if (oracle::strictly_in_circumcircle(a, b, c, t.points2d[i], tol)) {
                ++bad;
                break;
            }
        }
    }
    return bad;
}

std::vector<Point2> random_points(std::mt19937_64& rng, std::size_t n, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Point2> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    return pts;
}

} // namespace

TEST(DropZ, SinglePoint)
{
    const std::vector<Point3> pts{{1, 2, 3}};
    EXPECT_EQ(drop_z(pts), (std::vector<Point2>{{1, 2}}));
}

TEST(DropZ, Empty) { EXPECT_TRUE(drop_z(std::vector<Point3>{}).empty()); }

TEST(DropZ, BitwiseIdenticalXY)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::vector<Point3> pts(1000);
    for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
    const auto flat = drop_z(pts);
    ASSERT_EQ(flat.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_EQ(std::memcmp(&flat[i].x, &pts[i].x, sizeof(double)), 0);
        EXPECT_EQ(std::memcmp(&flat[i].y, &pts[i].y, sizeof(double)), 0);
    }
}

TEST(Delaunay, UnitSquareHasTwoTrianglesAndOneSharedEdge)
{
    const std::vector<Point2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const Triangulation t = delaunay(pts);
    expect_well_formed(t);
    EXPECT_EQ(t.triangles.size(), 2u);
    std::size_t paired = 0;
    for (auto h : t.halfedges) paired += h != kNoEdge;
    EXPECT_EQ(paired, 2u); // one interior edge, seen from both sides
    EXPECT_EQ(t.hull.size(), 4u);
}

TEST(Delaunay, CollinearInputRejected)
{
    EXPECT_THROW(delaunay(std::vector<Point2>{{0, 0}, {1, 1}, {2, 2}}), DegenerateInput);
    EXPECT_THROW(delaunay(std::vector<Point2>{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {-7, 0}}), DegenerateInput);
}

TEST(Delaunay, TooFewPointsRejected)
{
    EXPECT_THROW(delaunay(std::vector<Point2>{}), DegenerateInput);
    EXPECT_THROW(delaunay(std::vector<Point2>{{0, 0}, {1, 0}}), DegenerateInput);
    // Three entries but only two distinct positions.
    EXPECT_THROW(delaunay(std::vector<Point2>{{0, 0}, {1, 0}, {0, 0}}), DegenerateInput);
}

TEST(Delaunay, RandomPointsSatisfyEmptyCircumcircle)
{
    std::mt19937_64 rng(200);
    const auto pts = random_points(rng, 200, 0.0, 10.0);
    const Triangulation t = delaunay(pts);
    expect_well_formed(t);
    EXPECT_EQ(delaunay_violations(t, 1e-9), 0u);
}

TEST(Delaunay, TriangleCountMatchesHullFormula)
{
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 3 + rng() % 498;
        const auto pts = random_points(rng, n, -50.0, 50.0);
        const Triangulation t = delaunay(pts);
        expect_well_formed(t);
        const std::size_t h = oracle::hull_boundary_count(pts);
        EXPECT_EQ(t.triangles.size(), 2 * t.unique_points - 2 - h) << "n=" << n;
        EXPECT_EQ(delaunay_violations(t, 1e-9), 0u) << "n=" << n;
    }
}

TEST(Delaunay, RegularGridWithCocircularQuads)
{
    for (int n : {2, 3, 5, 10, 31}) {
        std::vector<Point2> pts;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) pts.push_back({0.5 * i, 0.5 * j});
        }
        const Triangulation t = delaunay(pts);
        expect_well_formed(t);
        EXPECT_EQ(t.triangles.size(), static_cast<std::size_t>(2 * (n - 1) * (n - 1))) << n;
        EXPECT_EQ(t.hull.size(), static_cast<std::size_t>(4 * (n - 1))) << n;
        EXPECT_EQ(delaunay_violations(t, 1e-9), 0u);
    }
}

TEST(Delaunay, JitteredGridLikeNoisyLidar)
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> jitter(0.0, 1e-9);
    std::vector<Point2> pts;
    for (int j = 0; j < 40; ++j) {
        for (int i = 0; i < 40; ++i) pts.push_back({0.5 * i + jitter(rng), 0.5 * j + jitter(rng)});
    }
    const Triangulation t = delaunay(pts);
    expect_well_formed(t);
    EXPECT_EQ(t.triangles.size(), 2 * t.unique_points - 2 - oracle::hull_boundary_count(pts));
}

TEST(Delaunay, PointsOnACircle)
{
    std::vector<Point2> pts;
    for (int i = 0; i < 64; ++i) {
        const double a = 2.0 * std::numbers::pi * i / 64.0;
        pts.push_back({std::cos(a), std::sin(a)});
    }
    pts.push_back({0.0, 0.0});
    const Triangulation t = delaunay(pts);
    expect_well_formed(t);
    EXPECT_EQ(delaunay_violations(t, 1e-9), 0u);
}

TEST(Delaunay, CollinearRunPlusOneApex)
{
    std::vector<Point2> pts;
    for (int i = 0; i < 20; ++i) pts.push_back({static_cast<double>(i), 0.0});
    pts.push_back({9.5, 3.0});
    const Triangulation t = delaunay(pts);
    expect_well_formed(t);
    EXPECT_EQ(t.triangles.size(), 19u);
}

TEST(Delaunay, DuplicatesMapToFirstOccurrence)
{
    const std::vector<Point2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {1, 0}, {0, 0}, {0.5, 0.25}};
    const Triangulation t = delaunay(pts);
    expect_well_formed(t);
    EXPECT_EQ(t.unique_points, 5u);
    EXPECT_EQ(t.points2d.size(), pts.size());
    for (const auto& tr : t.triangles) {
        for (int j = 0; j < 3; ++j) {
            EXPECT_NE(tr[j], 4u);
            EXPECT_NE(tr[j], 5u);
        }
    }
}

TEST(Delaunay, NonFiniteRejected)
{
    EXPECT_THROW(delaunay(std::vector<Point2>{{0, 0}, {1, 0}, {0, NAN}}), DegenerateInput);
}
