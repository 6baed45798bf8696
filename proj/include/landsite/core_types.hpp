#pragma once

#include <landsite/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace landsite {

using ClassId = std::uint16_t;

/// Class assigned to points that project outside the camera image.
inline constexpr ClassId kUnlabeled = 255;

/// Class ids shared by the scene generator, the label images and the config
/// defaults. The first fourteen follow the segmentation label order.
namespace classes {
inline constexpr ClassId sky = 0;
inline constexpr ClassId ground = 1;
inline constexpr ClassId building_wall = 2;
inline constexpr ClassId rooftop = 3;
inline constexpr ClassId small_rooftop_entrance = 4;
inline constexpr ClassId skylight = 5;
inline constexpr ClassId air_vents = 6;
inline constexpr ClassId ac_unit = 7;
inline constexpr ClassId seating = 8;
inline constexpr ClassId air_ducts = 9;
inline constexpr ClassId water_tower = 10;
inline constexpr ClassId chimney = 11;
inline constexpr ClassId tarp = 12;
inline constexpr ClassId vegetation = 13;
inline constexpr ClassId small_building = 14;
inline constexpr ClassId enclosed_water_tower = 15;
} // namespace classes

inline const std::map<ClassId, std::string>& default_class_names()
{
    static const std::map<ClassId, std::string> names{
        {classes::sky, "sky"},
        {classes::ground, "ground"},
        {classes::building_wall, "building-wall"},
        {classes::rooftop, "rooftop"},
        {classes::small_rooftop_entrance, "small-rooftop-entrance"},
        {classes::skylight, "skylight"},
        {classes::air_vents, "air-vents"},
        {classes::ac_unit, "ac-unit"},
        {classes::seating, "seating"},
        {classes::air_ducts, "air-ducts"},
        {classes::water_tower, "water-tower"},
        {classes::chimney, "chimney"},
        {classes::tarp, "tarp"},
        {classes::vegetation, "vegetation"},
        {classes::small_building, "small-building"},
        {classes::enclosed_water_tower, "enclosed-water-tower"},
        {kUnlabeled, "unlabeled"},
    };
    return names;
}

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Point in the local Cartesian frame, meters, +z up.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;

    bool finite() const noexcept { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Point cloud with one class id per point. Points are kept in input order.
class ClassifiedPointCloud {
public:
    ClassifiedPointCloud() = default;

    ClassifiedPointCloud(std::vector<Point3> points, std::vector<ClassId> classes)
        : points_(std::move(points)), classes_(std::move(classes))
    {
        if (points_.size() != classes_.size()) {
            throw std::invalid_argument("point and class lists differ in length");
        }
        for (const auto& p : points_) {
            if (!p.finite()) {
                throw std::invalid_argument("point cloud contains a non-finite coordinate");
            }
        }
    }

    /// Every point gets the same class.
    static ClassifiedPointCloud uniform(std::vector<Point3> points, ClassId cls)
    {
        std::vector<ClassId> c(points.size(), cls);
        return ClassifiedPointCloud(std::move(points), std::move(c));
    }

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    std::span<const Point3> points() const noexcept { return points_; }
    std::span<const ClassId> classes() const noexcept { return classes_; }
    const Point3& point(std::size_t i) const { return points_[i]; }
    ClassId cls(std::size_t i) const { return classes_[i]; }

    std::map<ClassId, std::string> class_names;

    friend bool operator==(const ClassifiedPointCloud& a, const ClassifiedPointCloud& b)
    {
        return a.points_ == b.points_ && a.classes_ == b.classes_;
    }

private:
    std::vector<Point3> points_;
    std::vector<ClassId> classes_;
};

/// Plane a*x + b*y + c*z + d = 0 with a unit normal.
struct Plane {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    double d = 0.0;

    Vec3 normal() const noexcept { return {a, b, c}; }

    /// Normalizes the given coefficients. Throws on a zero normal.
    static Plane from_coefficients(double a, double b, double c, double d)
    {
        double len = std::sqrt(a * a + b * b + c * c);
        if (!(len > 0.0) || !std::isfinite(len)) {
            throw std::invalid_argument("plane normal must be non-zero");
        }
        return {a / len, b / len, c / len, d / len};
    }

    static Plane through(const Point3& p, const Vec3& normal)
    {
        Plane pl = from_coefficients(normal.x, normal.y, normal.z, 0.0);
        pl.d = -(pl.a * p.x + pl.b * p.y + pl.c * p.z);
        return pl;
    }

    double evaluate(const Point3& p) const noexcept { return a * p.x + b * p.y + c * p.z + d; }
};

/// Solves the plane equation for z at (x, y).
inline Point3 lift_to_plane(const Point2& p, const Plane& plane)
{
    if (std::abs(plane.c) <= 1e-6) {
        throw VerticalPlane("cannot lift onto a vertical plane");
    }
    return {p.x, p.y, -(plane.a * p.x + plane.b * p.y + plane.d) / plane.c};
}

/// Indices into ClassifiedPointCloud::points().
struct Triangle {
    std::size_t v0 = 0;
    std::size_t v1 = 0;
    std::size_t v2 = 0;

    std::size_t operator[](int i) const noexcept { return i == 0 ? v0 : (i == 1 ? v1 : v2); }

    friend bool operator==(const Triangle&, const Triangle&) = default;
};

using Ring = std::vector<Point2>;

/// Shoelace area, positive for counter-clockwise rings. The ring is implicitly closed.
inline double signed_area(std::span<const Point2> ring)
{
    double sum = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n ? n - 1 : 0; i < n; j = i++) {
        sum += (ring[j].x - ring[i].x) * (ring[j].y + ring[i].y);
    }
    return 0.5 * sum;
}

/// One outer ring plus holes, in plane-projected 2D meters. Rings are stored
/// without a repeated closing vertex. Construction normalizes orientation:
/// outer counter-clockwise, holes clockwise.
class PolygonWithHoles {
public:
    PolygonWithHoles() = default;

    PolygonWithHoles(Ring outer, std::vector<Ring> holes, Plane plane = {})
        : outer_(std::move(outer)), holes_(std::move(holes)), plane_(plane)
    {
        if (signed_area(outer_) < 0.0) {
            std::reverse(outer_.begin(), outer_.end());
        }
        for (auto& h : holes_) {
            if (signed_area(h) > 0.0) {
                std::reverse(h.begin(), h.end());
            }
        }
    }

    const Ring& outer() const noexcept { return outer_; }
    const std::vector<Ring>& holes() const noexcept { return holes_; }
    const Plane& plane() const noexcept { return plane_; }

    /// Outer area minus hole areas.
    double area() const
    {
        double a = signed_area(outer_);
        for (const auto& h : holes_) {
            a += signed_area(h);
        }
        return a;
    }

private:
    Ring outer_;
    std::vector<Ring> holes_;
    Plane plane_;
};

struct LandingSite {
    Point2 center2d;
    Point3 center3d;
    double radius = 0.0;
    double precision = 0.5;
    std::size_t mesh_id = 0;
    Plane plane;
};

} // namespace landsite
