#pragma once

#include <landsite/core_types.hpp>
#include <landsite/predicates.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace landsite {

inline constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

/// Delaunay triangulation of the z-dropped cloud.
///
/// Triangle i owns half-edges 3i, 3i+1, 3i+2; half-edge 3i+j runs from
/// vertex j to vertex (j+1)%3 of that triangle. `halfedges[e]` is the twin
/// half-edge in the neighbouring triangle or kNoEdge on the convex hull.
/// Triangle vertices index the original cloud; for duplicated 2D positions
/// the first occurrence is used.
struct Triangulation {
    std::vector<Triangle> triangles;
    std::vector<std::size_t> halfedges;
    std::vector<Point2> points2d;
    /// Convex hull vertices, counter-clockwise.
    std::vector<std::size_t> hull;
    /// Number of distinct 2D positions that took part in the triangulation.
    std::size_t unique_points = 0;

    std::size_t size() const noexcept { return triangles.size(); }

    std::size_t edge_start(std::size_t e) const noexcept { return triangles[e / 3][static_cast<int>(e % 3)]; }
    std::size_t edge_end(std::size_t e) const noexcept { return triangles[e / 3][static_cast<int>((e + 1) % 3)]; }

    static std::size_t next_edge(std::size_t e) noexcept { return e % 3 == 2 ? e - 2 : e + 1; }
    static std::size_t prev_edge(std::size_t e) noexcept { return e % 3 == 0 ? e + 2 : e - 1; }
};

inline std::vector<Point2> drop_z(std::span<const Point3> points)
{
    std::vector<Point2> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back({p.x, p.y});
    }
    return out;
}

inline std::vector<Point2> drop_z(const ClassifiedPointCloud& cloud) { return drop_z(cloud.points()); }

namespace detail {

class SweepHull {
public:
    explicit SweepHull(std::span<const Point2> pts) : pts_(pts) {}

    void run();

    std::vector<std::size_t> triangles;
    std::vector<std::size_t> halfedges;
    std::vector<std::size_t> hull;

private:
    static constexpr std::size_t kNone = kNoEdge;

    double orient(std::size_t a, std::size_t b, std::size_t c) const
    {
        return predicates::orient2d(pts_[a].x, pts_[a].y, pts_[b].x, pts_[b].y, pts_[c].x, pts_[c].y);
    }

    std::size_t hash_key(double x, double y) const
    {
        double dx = x - cx_;
        double dy = y - cy_;
        if (dx == 0.0 && dy == 0.0) return 0;
        double p = dx / (std::abs(dx) + std::abs(dy));
        double angle = (dy > 0.0 ? 3.0 - p : 1.0 + p) / 4.0; // monotone in the true angle, [0, 1]
        auto k = static_cast<std::size_t>(std::floor(angle * static_cast<double>(hash_size_)));
        return k % hash_size_;
    }

    void link(std::size_t a, std::size_t b)
    {
        halfedges[a] = b;
        if (b != kNone) halfedges[b] = a;
    }

    std::size_t add_triangle(std::size_t i0, std::size_t i1, std::size_t i2, std::size_t a, std::size_t b,
                             std::size_t c)
    {
        std::size_t t = triangles.size();
        triangles.push_back(i0);
        triangles.push_back(i1);
        triangles.push_back(i2);
        halfedges.resize(t + 3, kNone);
        link(t, a);
        link(t + 1, b);
        link(t + 2, c);
        return t;
    }

    std::size_t legalize(std::size_t a);

    std::span<const Point2> pts_;
    double cx_ = 0.0;
    double cy_ = 0.0;
    std::size_t hash_size_ = 1;
    std::size_t hull_start_ = 0;
    std::vector<std::size_t> hull_next_;
    std::vector<std::size_t> hull_prev_;
    std::vector<std::size_t> hull_tri_;
    std::vector<std::size_t> hull_hash_;
    std::vector<std::size_t> stack_;
};

inline double circumradius_sq(const Point2& a, const Point2& b, const Point2& c)
{
    double dx = b.x - a.x, dy = b.y - a.y;
    double ex = c.x - a.x, ey = c.y - a.y;
    double bl = dx * dx + dy * dy;
    double cl = ex * ex + ey * ey;
    double d = 0.5 / (dx * ey - dy * ex);
    double x = (ey * bl - dy * cl) * d;
    double y = (dx * cl - ex * bl) * d;
    double r = x * x + y * y;
    return std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
}

inline Point2 circumcenter(const Point2& a, const Point2& b, const Point2& c)
{
    double dx = b.x - a.x, dy = b.y - a.y;
    double ex = c.x - a.x, ey = c.y - a.y;
    double bl = dx * dx + dy * dy;
    double cl = ex * ex + ey * ey;
    double d = 0.5 / (dx * ey - dy * ex);
    return {a.x + (ey * bl - dy * cl) * d, a.y + (dx * cl - ex * bl) * d};
}

inline double dist_sq(const Point2& a, const Point2& b)
{
    double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline void SweepHull::run()
{
    const std::size_t n = pts_.size();
    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    double max_x = -min_x, max_y = -min_x;
    for (const auto& p : pts_) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    const Point2 mid{(min_x + max_x) / 2.0, (min_y + max_y) / 2.0};

    // Seed triangle: point nearest the bbox centre, its nearest neighbour,
    // and the third point giving the smallest circumcircle.
    std::size_t i0 = 0, i1 = kNone, i2 = kNone;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double d = dist_sq(mid, pts_[i]);
        if (d < best) {
            i0 = i;
            best = d;
        }
    }
    best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (i == i0) continue;
        double d = dist_sq(pts_[i0], pts_[i]);
        if (d < best && d > 0.0) {
            i1 = i;
            best = d;
        }
    }
    if (i1 == kNone) {
        throw DegenerateInput("delaunay: all points coincide");
    }
    double min_radius = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || orient(i0, i1, i) == 0.0) continue;
        double r = circumradius_sq(pts_[i0], pts_[i1], pts_[i]);
        if (r < min_radius || i2 == kNone) {
            i2 = i;
            min_radius = r;
        }
    }
    if (i2 == kNone) {
        throw DegenerateInput("delaunay: all points are collinear");
    }
    if (orient(i0, i1, i2) < 0.0) {
        std::swap(i1, i2);
    }

    const Point2 center = circumcenter(pts_[i0], pts_[i1], pts_[i2]);
    cx_ = center.x;
    cy_ = center.y;

    std::vector<double> dists(n);
    for (std::size_t i = 0; i < n; ++i) dists[i] = dist_sq(pts_[i], center);
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
        return dists[a] < dists[b] || (dists[a] == dists[b] && a < b);
    });

    hash_size_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))));
    hull_next_.assign(n, kNone);
    hull_prev_.assign(n, kNone);
    hull_tri_.assign(n, kNone);
    hull_hash_.assign(hash_size_, kNone);

    const std::size_t max_triangles = n < 3 ? 1 : 2 * n - 5;
    triangles.reserve(max_triangles * 3);
    halfedges.reserve(max_triangles * 3);

    hull_start_ = i0;
    hull_next_[i0] = hull_prev_[i2] = i1;
    hull_next_[i1] = hull_prev_[i0] = i2;
    hull_next_[i2] = hull_prev_[i1] = i0;
    hull_tri_[i0] = 0;
    hull_tri_[i1] = 1;
    hull_tri_[i2] = 2;
    hull_hash_[hash_key(pts_[i0].x, pts_[i0].y)] = i0;
    hull_hash_[hash_key(pts_[i1].x, pts_[i1].y)] = i1;
    hull_hash_[hash_key(pts_[i2].x, pts_[i2].y)] = i2;

    add_triangle(i0, i1, i2, kNone, kNone, kNone);

    for (std::size_t i : ids) {
        if (i == i0 || i == i1 || i == i2) continue;
        const double x = pts_[i].x;
        const double y = pts_[i].y;

        // Find a hull vertex near the point's angle, then walk to the first visible edge.
        std::size_t start = 0;
        const std::size_t key = hash_key(x, y);
        for (std::size_t j = 0; j < hash_size_; ++j) {
            start = hull_hash_[(key + j) % hash_size_];
            if (start != kNone && start != hull_next_[start]) break;
        }
        start = hull_prev_[start];
        std::size_t e = start;
        std::size_t q = hull_next_[e];
        while (orient(e, q, i) >= 0.0) {
            e = q;
            if (e == start) {
                e = kNone;
                break;
            }
            q = hull_next_[e];
        }
        if (e == kNone) continue; // not outside the hull; only reachable for coincident points

        std::size_t t = add_triangle(e, i, hull_next_[e], kNone, kNone, hull_tri_[e]);
        hull_tri_[i] = legalize(t + 2);
        hull_tri_[e] = t;

        // Walk forward, fanning over every visible edge.
        std::size_t nx = hull_next_[e];
        q = hull_next_[nx];
        while (orient(nx, q, i) < 0.0) {
            t = add_triangle(nx, i, q, hull_tri_[i], kNone, hull_tri_[nx]);
            hull_tri_[i] = legalize(t + 2);
            hull_next_[nx] = nx; // removed from hull
            nx = q;
            q = hull_next_[nx];
        }

        // Walk backward from the first visible edge.
        if (e == start) {
            q = hull_prev_[e];
            while (orient(q, e, i) < 0.0) {
                t = add_triangle(q, i, e, kNone, hull_tri_[e], hull_tri_[q]);
                legalize(t + 2);
                hull_tri_[q] = t;
                hull_next_[e] = e;
                e = q;
                q = hull_prev_[e];
            }
        }

        hull_start_ = hull_prev_[i] = e;
        hull_next_[e] = hull_prev_[nx] = i;
        hull_next_[i] = nx;
        hull_hash_[hash_key(x, y)] = i;
        hull_hash_[hash_key(pts_[e].x, pts_[e].y)] = e;
    }

    std::size_t e = hull_start_;
    do {
        hull.push_back(e);
        e = hull_next_[e];
    } while (e != hull_start_);
}

// Flips edge `a` and its descendants until every affected pair is locally
// Delaunay. Returns the hull-side half-edge that ends the fan at the new point.
inline std::size_t SweepHull::legalize(std::size_t a)
{
    std::size_t ar = 0;
    stack_.clear();
    while (true) {
        const std::size_t b = halfedges[a];
        const std::size_t a0 = a - a % 3;
        ar = a0 + (a + 2) % 3;

        if (b == kNone) {
            if (stack_.empty()) break;
            a = stack_.back();
            stack_.pop_back();
            continue;
        }

        const std::size_t b0 = b - b % 3;
        const std::size_t al = a0 + (a + 1) % 3;
        const std::size_t bl = b0 + (b + 2) % 3;

        const std::size_t p0 = triangles[ar];
        const std::size_t pr = triangles[a];
        const std::size_t pl = triangles[al];
        const std::size_t p1 = triangles[bl];

        const bool illegal = predicates::incircle(pts_[p0].x, pts_[p0].y, pts_[pr].x, pts_[pr].y, pts_[pl].x,
                                                  pts_[pl].y, pts_[p1].x, pts_[p1].y) > 0.0;
        if (illegal) {
            triangles[a] = p1;
            triangles[b] = p0;

            const std::size_t hbl = halfedges[bl];
            if (hbl == kNone) {
                // The flipped edge sat on the hull; repoint the hull entry.
                std::size_t e = hull_start_;
                do {
                    if (hull_tri_[e] == bl) {
                        hull_tri_[e] = a;
                        break;
                    }
                    e = hull_prev_[e];
                } while (e != hull_start_);
            }
            link(a, hbl);
            link(b, halfedges[ar]);
            link(ar, bl);

            stack_.push_back(b0 + (b + 1) % 3);
        } else {
            if (stack_.empty()) break;
            a = stack_.back();
            stack_.pop_back();
        }
    }
    return ar;
}

} // namespace detail

/// Delaunay triangulation of 2D points. Requires at least three distinct,
/// non-collinear positions. Triangles come out counter-clockwise.
inline Triangulation delaunay(std::span<const Point2> points)
{
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw DegenerateInput("delaunay: non-finite coordinate");
        }
    }

    // Deduplicate exact 2D repeats; the first occurrence represents the group.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& pa = points[a];
        const auto& pb = points[b];
        if (pa.x != pb.x) return pa.x < pb.x;
        if (pa.y != pb.y) return pa.y < pb.y;
        return a < b;
    });
    std::vector<std::size_t> unique_to_original;
    unique_to_original.reserve(points.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && points[order[k]] == points[order[k - 1]]) continue;
        unique_to_original.push_back(order[k]);
    }
    std::sort(unique_to_original.begin(), unique_to_original.end());

    if (unique_to_original.size() < 3) {
        throw DegenerateInput("delaunay: need at least 3 distinct points");
    }

    std::vector<Point2> unique_pts;
    unique_pts.reserve(unique_to_original.size());
    for (std::size_t i : unique_to_original) unique_pts.push_back(points[i]);

    detail::SweepHull sweep(unique_pts);
    sweep.run();

    Triangulation out;
    out.points2d.assign(points.begin(), points.end());
    out.unique_points = unique_pts.size();
    out.triangles.reserve(sweep.triangles.size() / 3);
    for (std::size_t t = 0; t < sweep.triangles.size(); t += 3) {
        out.triangles.push_back({unique_to_original[sweep.triangles[t]], unique_to_original[sweep.triangles[t + 1]],
                                 unique_to_original[sweep.triangles[t + 2]]});
    }
    out.halfedges = std::move(sweep.halfedges);
    out.hull.reserve(sweep.hull.size());
    for (std::size_t h : sweep.hull) out.hull.push_back(unique_to_original[h]);
    return out;
}

} // namespace landsite
