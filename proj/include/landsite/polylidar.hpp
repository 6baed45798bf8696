#pragma once

#include <landsite/core_types.hpp>
#include <landsite/triangulation.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>
#include <vector>

namespace landsite {

/// Triangle acceptance thresholds.
struct FilterParams {
    /// Longest allowed 3D triangle edge, meters.
    double l_max = 4.0;
    /// Minimum |normal . k| for the planarity branch.
    double dot_min = 0.96;
    /// Triangles whose vertical extent is below this are accepted regardless of
    /// their normal. Despite the name it is an upper bound on the extent.
    double z_min = 0.10;
    std::set<ClassId> allowed_classes{classes::rooftop};

    void validate() const
    {
        if (!(l_max > 0.0)) throw std::invalid_argument("l_max must be positive");
        if (!(dot_min >= 0.0 && dot_min <= 1.0)) throw std::invalid_argument("dot_min must lie in [0, 1]");
        if (!(z_min >= 0.0)) throw std::invalid_argument("z_min must be non-negative");
    }
};

/// One edge-connected flat patch.
struct PlanarMesh {
    std::vector<std::size_t> triangle_indices; // ascending
    Plane plane;
    std::size_t mesh_id = 0;
};

namespace detail {

inline constexpr double kMinTriangleArea = 1e-12;

inline Vec3 raw_normal(const Triangle& t, const ClassifiedPointCloud& cloud)
{
    const Point3& p0 = cloud.point(t.v0);
    return cross(cloud.point(t.v1) - p0, cloud.point(t.v2) - p0);
}

} // namespace detail

/// Unit normal of a triangle, oriented so that its z component is >= 0.
inline Vec3 triangle_normal(const Triangle& t, const ClassifiedPointCloud& cloud)
{
    Vec3 n = detail::raw_normal(t, cloud);
    double len = norm(n);
    if (!(0.5 * len >= detail::kMinTriangleArea)) {
        throw DegenerateTriangle("triangle area below 1e-12 m^2");
    }
    double s = n.z < 0.0 ? -1.0 / len : 1.0 / len;
    return {n.x * s, n.y * s, n.z * s};
}

/// Decides one triangle. A degenerate triangle has no usable normal and can
/// only pass through the vertical-extent branch.
inline bool accept_triangle(const Triangle& t, const ClassifiedPointCloud& cloud, const FilterParams& params)
{
    for (int j = 0; j < 3; ++j) {
        if (!params.allowed_classes.contains(cloud.cls(t[j]))) return false;
    }

    const Point3& a = cloud.point(t.v0);
    const Point3& b = cloud.point(t.v1);
    const Point3& c = cloud.point(t.v2);
    const double longest = std::max({norm(b - a), norm(c - b), norm(a - c)});
    if (!(longest < params.l_max)) return false;

    const Vec3 n = detail::raw_normal(t, cloud);
    const double len = norm(n);
    if (0.5 * len >= detail::kMinTriangleArea && std::abs(n.z) / len > params.dot_min) {
        return true;
    }
    const double extent = std::max({a.z, b.z, c.z}) - std::min({a.z, b.z, c.z});
    return extent < params.z_min;
}

/// Indices of triangles passing the edge-length, class and flatness tests, ascending.
inline std::vector<std::size_t> filter_triangles(const Triangulation& tri, const ClassifiedPointCloud& cloud,
                                                 const FilterParams& params)
{
    params.validate();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tri.triangles.size(); ++i) {
        if (accept_triangle(tri.triangles[i], cloud, params)) out.push_back(i);
    }
    return out;
}

/// Plane through the centroid of the mesh vertices with the mean triangle normal.
inline Plane fit_mesh_plane(std::span<const std::size_t> triangle_indices, const Triangulation& tri,
                            const ClassifiedPointCloud& cloud)
{
    Vec3 sum{};
    Point3 centroid{};
    std::size_t count = 0;
    std::vector<char> seen(cloud.size(), 0);
    for (std::size_t ti : triangle_indices) {
        const Triangle& t = tri.triangles[ti];
        Vec3 n = detail::raw_normal(t, cloud);
        double len = norm(n);
        if (len > 0.0) {
            double s = (n.z < 0.0 ? -1.0 : 1.0) / len;
            sum.x += n.x * s;
            sum.y += n.y * s;
            sum.z += n.z * s;
        }
        for (int j = 0; j < 3; ++j) {
            if (seen[t[j]]) continue;
            seen[t[j]] = 1;
            const Point3& p = cloud.point(t[j]);
            centroid.x += p.x;
            centroid.y += p.y;
            centroid.z += p.z;
            ++count;
        }
    }
    if (count > 0) {
        const double k = 1.0 / static_cast<double>(count);
        centroid = {centroid.x * k, centroid.y * k, centroid.z * k};
    }
    if (norm(sum) == 0.0) sum = {0.0, 0.0, 1.0};
    return Plane::through(centroid, sum);
}

/// Breadth-first region growing over shared edges. Seeds are taken in
/// ascending triangle index, so output is deterministic.
inline std::vector<PlanarMesh> extract_planar_meshes(std::span<const std::size_t> filtered, const Triangulation& tri,
                                                     const ClassifiedPointCloud& cloud)
{
    std::vector<char> available(tri.triangles.size(), 0);
    for (std::size_t t : filtered) {
        if (t >= tri.triangles.size()) throw std::out_of_range("filtered triangle index out of range");
        available[t] = 1;
    }

    std::vector<PlanarMesh> meshes;
    std::deque<std::size_t> queue;
    for (std::size_t seed = 0; seed < available.size(); ++seed) {
        if (!available[seed]) continue;
        available[seed] = 0;
        PlanarMesh mesh;
        mesh.mesh_id = meshes.size();
        queue.push_back(seed);
        while (!queue.empty()) {
            const std::size_t t = queue.front();
            queue.pop_front();
            mesh.triangle_indices.push_back(t);
            for (std::size_t e = 3 * t; e < 3 * t + 3; ++e) {
                const std::size_t twin = tri.halfedges[e];
                if (twin == kNoEdge) continue;
                const std::size_t nb = twin / 3;
                if (available[nb]) {
                    available[nb] = 0;
                    queue.push_back(nb);
                }
            }
        }
        std::sort(mesh.triangle_indices.begin(), mesh.triangle_indices.end());
        mesh.plane = fit_mesh_plane(mesh.triangle_indices, tri, cloud);
        meshes.push_back(std::move(mesh));
    }
    return meshes;
}

/// Sum of the 2D areas of the mesh's triangles.
inline double mesh_area_2d(const PlanarMesh& mesh, const Triangulation& tri)
{
    double area = 0.0;
    for (std::size_t ti : mesh.triangle_indices) {
        const Triangle& t = tri.triangles[ti];
        const Point2& a = tri.points2d[t.v0];
        const Point2& b = tri.points2d[t.v1];
        const Point2& c = tri.points2d[t.v2];
        area += 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
    }
    return area;
}

/// Boundary of a planar mesh as a polygon with holes.
///
/// Boundary half-edges are those whose twin lies outside the mesh; each runs
/// with the mesh on its left. At a vertex with several outgoing boundary
/// edges (a pinch), the ring continues along the same empty region: the next
/// edge is the first one met rotating counter-clockwise from the incoming
/// edge. Rings touching at a pinch therefore stay separate and simple. The
/// ring with the largest absolute area is the outer ring.
inline PolygonWithHoles mesh_to_polygon(const PlanarMesh& mesh, const Triangulation& tri)
{
    if (mesh.triangle_indices.empty()) {
        throw std::invalid_argument("mesh_to_polygon: empty mesh");
    }
    std::vector<char> in_mesh(tri.triangles.size(), 0);
    for (std::size_t t : mesh.triangle_indices) in_mesh[t] = 1;

    // (start vertex, half-edge) for every boundary edge, grouped by vertex.
    std::vector<std::pair<std::size_t, std::size_t>> outgoing;
    for (std::size_t t : mesh.triangle_indices) {
        for (std::size_t e = 3 * t; e < 3 * t + 3; ++e) {
            const std::size_t twin = tri.halfedges[e];
            if (twin == kNoEdge || !in_mesh[twin / 3]) outgoing.emplace_back(tri.edge_start(e), e);
        }
    }
    std::sort(outgoing.begin(), outgoing.end());

    const auto& pts = tri.points2d;
    auto successor = [&](std::size_t e) {
        const std::size_t v = tri.edge_end(e);
        auto lo = std::lower_bound(outgoing.begin(), outgoing.end(), std::pair{v, std::size_t{0}});
        auto hi = lo;
        while (hi != outgoing.end() && hi->first == v) ++hi;
        if (lo == hi) throw NonManifoldBoundary("mesh_to_polygon: boundary ring does not close");
        if (hi - lo == 1) return lo->second;

        // Counter-clockwise angle from the reversed incoming edge, in (0, 2pi].
        const Point2& pv = pts[v];
        const Point2& pu = pts[tri.edge_start(e)];
        auto upper_half = [&](const Point2& d) {
            const double o = predicates::orient2d(pv.x, pv.y, pu.x, pu.y, d.x, d.y);
            if (o != 0.0) return o > 0.0;
            return (d.x - pv.x) * (pu.x - pv.x) + (d.y - pv.y) * (pu.y - pv.y) < 0.0; // pi counts as upper
        };
        auto before = [&](std::size_t a, std::size_t b) {
            const Point2& pa = pts[tri.edge_end(a)];
            const Point2& pb = pts[tri.edge_end(b)];
            const bool ha = upper_half(pa), hb = upper_half(pb);
            if (ha != hb) return ha;
            return predicates::orient2d(pv.x, pv.y, pa.x, pa.y, pb.x, pb.y) > 0.0;
        };
        std::size_t best = lo->second;
        for (auto it = lo + 1; it != hi; ++it) {
            if (before(it->second, best)) best = it->second;
        }
        return best;
    };

    std::vector<char> used(tri.halfedges.size(), 0);
    std::vector<std::size_t> boundary;
    boundary.reserve(outgoing.size());
    for (const auto& [v, e] : outgoing) boundary.push_back(e);
    std::sort(boundary.begin(), boundary.end());

    std::vector<Ring> rings;
    for (std::size_t start : boundary) {
        if (used[start]) continue;
        Ring ring;
        std::size_t e = start;
        do {
            if (used[e]) {
                throw NonManifoldBoundary("mesh_to_polygon: boundary edge revisited before ring closed");
            }
            used[e] = 1;
            ring.push_back(tri.points2d[tri.edge_start(e)]);
            e = successor(e);
        } while (e != start);
        rings.push_back(std::move(ring));
    }

    std::size_t outer = 0;
    for (std::size_t i = 1; i < rings.size(); ++i) {
        if (std::abs(signed_area(rings[i])) > std::abs(signed_area(rings[outer]))) outer = i;
    }
    std::vector<Ring> holes;
    for (std::size_t i = 0; i < rings.size(); ++i) {
        if (i != outer) holes.push_back(std::move(rings[i]));
    }
    return PolygonWithHoles(std::move(rings[outer]), std::move(holes), mesh.plane);
}

} // namespace landsite
