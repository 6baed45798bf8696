#pragma once

#include <landsite/core_types.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace landsite {

namespace detail {

inline double segment_dist_sq(const Point2& p, const Point2& a, const Point2& b)
{
    double x = a.x, y = a.y;
    double dx = b.x - x, dy = b.y - y;
    if (dx != 0.0 || dy != 0.0) {
        double t = ((p.x - x) * dx + (p.y - y) * dy) / (dx * dx + dy * dy);
        if (t > 1.0) {
            x = b.x;
            y = b.y;
        } else if (t > 0.0) {
            x += dx * t;
            y += dy * t;
        }
    }
    dx = p.x - x;
    dy = p.y - y;
    return dx * dx + dy * dy;
}

// Accumulates even-odd containment and squared distance for one ring.
inline void scan_ring(const Point2& p, const Ring& ring, bool& inside, double& min_dist_sq)
{
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n ? n - 1 : 0; i < n; j = i++) {
        const Point2& a = ring[i];
        const Point2& b = ring[j];
        if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
            inside = !inside;
        }
        min_dist_sq = std::min(min_dist_sq, segment_dist_sq(p, a, b));
    }
}

} // namespace detail

/// Distance from p to the nearest ring segment, positive inside the free
/// region (inside the outer ring, outside every hole) and negative elsewhere.
inline double signed_distance(const Point2& p, const PolygonWithHoles& poly)
{
    bool inside = false;
    double min_dist_sq = std::numeric_limits<double>::infinity();
    detail::scan_ring(p, poly.outer(), inside, min_dist_sq);
    for (const auto& hole : poly.holes()) detail::scan_ring(p, hole, inside, min_dist_sq);
    const double d = std::sqrt(min_dist_sq);
    return inside ? d : -d;
}

/// Search cell of the quadtree branch-and-bound.
struct Cell {
    Point2 center;
    double half_size = 0.0;
    double dist = 0.0;
    /// Upper bound on the signed distance anywhere in the cell.
    double potential = 0.0;

    Cell(Point2 c, double h, const PolygonWithHoles& poly)
        : center(c), half_size(h), dist(signed_distance(c, poly)), potential(dist + h * std::sqrt(2.0))
    {
    }
};

struct Pole {
    Point2 center;
    double radius = 0.0;
    /// Cells evaluated during the search, including seeds.
    std::size_t cells_probed = 0;
};

namespace detail {

inline Cell centroid_cell(const PolygonWithHoles& poly)
{
    const Ring& ring = poly.outer();
    double area = 0.0, x = 0.0, y = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = ring[i];
        const Point2& b = ring[j];
        double f = a.x * b.y - b.x * a.y;
        x += (a.x + b.x) * f;
        y += (a.y + b.y) * f;
        area += f * 3.0;
    }
    if (area == 0.0) return Cell(ring[0], 0.0, poly);
    return Cell({x / area, y / area}, 0.0, poly);
}

} // namespace detail

/// Pole of inaccessibility: the interior point farthest from the polygon
/// boundary, found to within `precision` meters of the optimum.
inline Pole find_pole(const PolygonWithHoles& poly, double precision = 0.5)
{
    if (!(precision > 0.0)) {
        throw std::invalid_argument("find_pole: precision must be positive");
    }
    const Ring& outer = poly.outer();
    if (outer.size() < 3 || signed_area(outer) == 0.0) {
        throw EmptyPolygon("find_pole: outer ring has zero area");
    }

    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    double max_x = -min_x, max_y = -min_x;
    for (const auto& p : outer) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    const double width = max_x - min_x;
    const double height = max_y - min_y;
    const double cell_size = std::min(width, height);

    struct Entry {
        Cell cell;
        std::uint64_t seq;
    };
    // Highest potential first; equal potentials pop in insertion order.
    auto lower = [](const Entry& a, const Entry& b) {
        if (a.cell.potential != b.cell.potential) return a.cell.potential < b.cell.potential;
        return a.seq > b.seq;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> queue(lower);
    std::uint64_t seq = 0;
    std::size_t probed = 0;

    auto push = [&](Point2 c, double h) {
        queue.push({Cell(c, h, poly), seq++});
        ++probed;
    };

    const double h = cell_size / 2.0;
    for (double x = min_x; x < max_x; x += cell_size) {
        for (double y = min_y; y < max_y; y += cell_size) {
            push({x + h, y + h}, h);
        }
    }

    Cell best = detail::centroid_cell(poly);
    Cell bbox_cell({min_x + width / 2.0, min_y + height / 2.0}, 0.0, poly);
    probed += 2;
    if (bbox_cell.dist > best.dist) best = bbox_cell;

    while (!queue.empty()) {
        const Cell cell = queue.top().cell;
        queue.pop();

        if (cell.dist > best.dist) best = cell;
        // Keep refining until some probe lands in the free region, so the
        // returned center never lies outside the polygon.
        if (cell.potential - best.dist <= precision && (best.dist >= 0.0 || cell.potential < 0.0)) continue;

        const double hh = cell.half_size / 2.0;
        push({cell.center.x - hh, cell.center.y - hh}, hh);
        push({cell.center.x + hh, cell.center.y - hh}, hh);
        push({cell.center.x - hh, cell.center.y + hh}, hh);
        push({cell.center.x + hh, cell.center.y + hh}, hh);
    }

    return {best.center, best.dist, probed};
}

} // namespace landsite
