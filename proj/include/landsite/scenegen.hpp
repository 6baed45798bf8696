#pragma once

// Synthetic flat-roof scenes with box obstacles, a nadir camera and a
// dense-grid ground-truth landing site.

#include <landsite/core_types.hpp>
#include <landsite/pointclass.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <tuple>
#include <string>
#include <vector>

namespace landsite {

/// Mean quantity per building for each rooftop asset.
using AssetStats = std::map<std::string, double>;

/// Average asset quantities observed on flat Manhattan rooftops.
inline AssetStats manhattan_asset_stats()
{
    return {
        {"air-vents", 1.12},
        {"small-rooftop-entrance", 0.88},
        {"skylight", 0.51},
        {"small-building", 0.45},
        {"ac-unit", 0.28},
        {"seating", 0.12},
        {"air-ducts", 0.11},
        {"water-tower", 0.10},
        {"chimney", 0.05},
        {"enclosed-water-tower", 0.04},
        {"tarp", 0.03},
        {"vegetation", 0.02},
    };
}

/// Footprint and height ranges for a box standing in for an asset mesh.
struct AssetShape {
    ClassId cls = classes::ac_unit;
    double min_size = 1.0;
    double max_size = 2.0;
    double min_height = 0.5;
    double max_height = 1.0;
};

inline const std::map<std::string, AssetShape>& asset_shapes()
{
    static const std::map<std::string, AssetShape> shapes{
        {"air-vents", {classes::air_vents, 0.5, 1.0, 0.5, 1.0}},
        {"small-rooftop-entrance", {classes::small_rooftop_entrance, 2.0, 3.0, 2.2, 2.8}},
        {"skylight", {classes::skylight, 1.0, 2.0, 0.3, 0.6}},
        {"small-building", {classes::small_building, 3.0, 5.0, 2.5, 3.5}},
        {"ac-unit", {classes::ac_unit, 1.0, 3.0, 1.0, 1.5}},
        {"seating", {classes::seating, 1.0, 2.0, 0.5, 1.0}},
        {"air-ducts", {classes::air_ducts, 0.5, 3.0, 0.5, 0.8}},
        {"water-tower", {classes::water_tower, 3.0, 5.0, 4.0, 6.0}},
        {"chimney", {classes::chimney, 0.5, 1.0, 1.0, 2.0}},
        {"enclosed-water-tower", {classes::enclosed_water_tower, 3.0, 5.0, 4.0, 6.0}},
        {"tarp", {classes::tarp, 1.5, 3.0, 0.0, 0.0}},
        {"vegetation", {classes::vegetation, 1.0, 2.0, 0.5, 1.5}},
    };
    return shapes;
}

/// Axis-aligned obstacle footprint on the roof. Height 0 means flat (tarp).
struct Obstacle {
    std::string asset;
    ClassId cls = classes::ac_unit;
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;
    double height = 0.0;

    bool contains(double x, double y) const noexcept { return x >= min_x && x <= max_x && y >= min_y && y <= max_y; }

    /// Euclidean distance from (x, y) to the footprint, zero inside.
    double distance(double x, double y) const noexcept
    {
        double dx = std::max({min_x - x, 0.0, x - max_x});
        double dy = std::max({min_y - y, 0.0, y - max_y});
        return std::hypot(dx, dy);
    }

    bool overlaps(const Obstacle& o) const noexcept
    {
        return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
    }
};

struct SceneSpec {
    double roof_width = 20.0;  // along x
    double roof_length = 20.0; // along y
    double roof_height = 30.0;
    double spacing = 0.5;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    AssetStats assets = manhattan_asset_stats();
    /// Chance of one extra tarp on top of the sampled assets.
    double tarp_probability = 0.0;
    /// Obstacles placed before any sampled ones.
    std::vector<Obstacle> fixed_obstacles;
    /// Grid step of the ground-truth oracle, meters.
    double oracle_step = 0.05;
    int image_size = 512;
    double camera_altitude = 100.0;
    int max_placement_attempts = 200;
};

struct GroundTruth {
    std::vector<Obstacle> obstacles;
    /// Sampled roof extent, [0, roof_max_x] x [0, roof_max_y].
    double roof_max_x = 0.0;
    double roof_max_y = 0.0;
    /// Best landing site avoiding every footprint, tarps included.
    Point2 oracle_center;
    double oracle_radius = 0.0;
    /// Same, but tarps count as free roof (what depth alone can see).
    Point2 geometric_center;
    double geometric_radius = 0.0;
};

struct Scene {
    ClassifiedPointCloud cloud;
    LabelImage labels;
    CameraIntrinsics intrinsics;
    CameraExtrinsics extrinsics;
    GroundTruth truth;
};

/// Independent Poisson draw for each asset. Iterates in name order, so the
/// result depends only on the stats and the generator state.
template <typename Rng>
std::map<std::string, int> sample_asset_counts(const AssetStats& stats, Rng& rng)
{
    std::map<std::string, int> counts;
    for (const auto& [name, mean] : stats) {
        if (!(mean >= 0.0)) throw std::invalid_argument("asset mean must be non-negative: " + name);
        if (mean == 0.0) {
            counts[name] = 0;
            continue;
        }
        std::poisson_distribution<int> dist(mean);
        counts[name] = dist(rng);
    }
    return counts;
}

namespace detail {

struct OraclePole {
    Point2 center;
    double radius = 0.0;
};

// Grid search of the free roof region, cell-centred so roof edges are not sampled twice.
inline OraclePole grid_oracle(double max_x, double max_y, const std::vector<Obstacle>& obstacles, double step,
                              bool tarps_block)
{
    OraclePole best{{max_x / 2.0, max_y / 2.0}, -std::numeric_limits<double>::infinity()};
    const auto nx = static_cast<long>(std::floor(max_x / step + 1e-9));
    const auto ny = static_cast<long>(std::floor(max_y / step + 1e-9));
    for (long i = 0; i <= nx; ++i) {
        const double x = static_cast<double>(i) * step;
        for (long j = 0; j <= ny; ++j) {
            const double y = static_cast<double>(j) * step;
            double d = std::min({x, y, max_x - x, max_y - y});
            if (d <= best.radius) continue;
            for (const auto& o : obstacles) {
                if (!tarps_block && o.height == 0.0 && o.cls == classes::tarp) continue;
                d = std::min(d, o.contains(x, y) ? 0.0 : o.distance(x, y));
                if (d <= best.radius) break;
            }
            if (d > best.radius) best = {{x, y}, d};
        }
    }
    best.radius = std::max(best.radius, 0.0);
    return best;
}

// Ray/box slab intersection. Returns the entry parameter or nullopt.
inline std::optional<double> ray_box(const Point3& o, const Vec3& d, const Obstacle& box, double base_z)
{
    double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
    const double lo[3] = {box.min_x, box.min_y, base_z};
    const double hi[3] = {box.max_x, box.max_y, base_z + box.height};
    const double org[3] = {o.x, o.y, o.z};
    const double dir[3] = {d.x, d.y, d.z};
    for (int k = 0; k < 3; ++k) {
        if (dir[k] == 0.0) {
            if (org[k] < lo[k] || org[k] > hi[k]) return std::nullopt;
            continue;
        }
        double a = (lo[k] - org[k]) / dir[k];
        double b = (hi[k] - org[k]) / dir[k];
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
        if (t0 > t1) return std::nullopt;
    }
    return t0;
}

} // namespace detail

/// Nadir camera above the roof centre; every roof point lands in the image.
inline std::pair<CameraIntrinsics, CameraExtrinsics> nadir_camera(double max_x, double max_y, double roof_height,
                                                                  double altitude, int image_size,
                                                                  double tallest_obstacle)
{
    CameraIntrinsics intr;
    intr.width = intr.height = image_size;
    intr.cx = intr.cy = image_size / 2.0;
    const double half_extent = std::max(max_x, max_y) / 2.0;
    const double nearest_depth = altitude - tallest_obstacle;
    intr.fx = intr.fy = 0.9 * (image_size / 2.0) * nearest_depth / half_extent;

    // Camera x = world x, camera y = world -y, camera z = world -z.
    CameraExtrinsics ext;
    ext.rotation = {{{1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}}};
    const Point3 c{max_x / 2.0, max_y / 2.0, roof_height + altitude};
    ext.translation = {-c.x, c.y, c.z};
    return {intr, ext};
}

inline Scene generate_scene(const SceneSpec& spec)
{
    if (!(spec.roof_width > 0.0 && spec.roof_length > 0.0 && spec.spacing > 0.0)) {
        throw std::invalid_argument("scene dimensions and spacing must be positive");
    }
    if (!(spec.noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be non-negative");
    if (!(spec.tarp_probability >= 0.0 && spec.tarp_probability <= 1.0)) {
        throw std::invalid_argument("tarp probability must lie in [0, 1]");
    }

    std::mt19937_64 rng(spec.seed);
    const auto nx = static_cast<std::size_t>(std::floor(spec.roof_width / spec.spacing + 1e-9)) + 1;
    const auto ny = static_cast<std::size_t>(std::floor(spec.roof_length / spec.spacing + 1e-9)) + 1;
    const double max_x = static_cast<double>(nx - 1) * spec.spacing;
    const double max_y = static_cast<double>(ny - 1) * spec.spacing;

    Scene scene;
    GroundTruth& truth = scene.truth;
    truth.roof_max_x = max_x;
    truth.roof_max_y = max_y;

    for (const auto& o : spec.fixed_obstacles) {
        if (o.min_x < 0.0 || o.min_y < 0.0 || o.max_x > max_x || o.max_y > max_y || o.min_x >= o.max_x ||
            o.min_y >= o.max_y) {
            throw PlacementFailure("fixed obstacle '" + o.asset + "' does not fit on the roof");
        }
        for (const auto& prev : truth.obstacles) {
            if (prev.overlaps(o)) throw PlacementFailure("fixed obstacles overlap");
        }
        truth.obstacles.push_back(o);
    }

    std::vector<std::string> to_place;
    for (const auto& [name, count] : sample_asset_counts(spec.assets, rng)) {
        for (int k = 0; k < count; ++k) to_place.push_back(name);
    }
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < spec.tarp_probability) {
        to_place.emplace_back("tarp");
    }

    // Every footprint spans at least two grid steps so it is always sampled.
    const double min_extent = 2.0 * spec.spacing;
    for (const auto& name : to_place) {
        auto it = asset_shapes().find(name);
        AssetShape shape = it != asset_shapes().end() ? it->second : AssetShape{};
        std::uniform_real_distribution<double> size(shape.min_size, shape.max_size);
        std::uniform_real_distribution<double> height(shape.min_height, shape.max_height);
        Obstacle o;
        o.asset = name;
        o.cls = shape.cls;
        const double w = std::clamp(size(rng), min_extent, max_x);
        const double l = std::clamp(size(rng), min_extent, max_y);
        o.height = shape.max_height > 0.0 ? height(rng) : 0.0;

        bool placed = false;
        for (int attempt = 0; attempt < spec.max_placement_attempts && !placed; ++attempt) {
            o.min_x = std::uniform_real_distribution<double>(0.0, max_x - w)(rng);
            o.min_y = std::uniform_real_distribution<double>(0.0, max_y - l)(rng);
            o.max_x = o.min_x + w;
            o.max_y = o.min_y + l;
            placed = std::none_of(truth.obstacles.begin(), truth.obstacles.end(),
                                  [&](const Obstacle& prev) { return prev.overlaps(o); });
        }
        if (!placed) throw PlacementFailure("could not place '" + name + "' without overlap");
        truth.obstacles.push_back(o);
    }

    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    std::vector<Point3> points;
    std::vector<ClassId> cls;
    points.reserve(nx * ny);
    cls.reserve(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = static_cast<double>(i) * spec.spacing;
            const double y = static_cast<double>(j) * spec.spacing;
            double z = spec.roof_height;
            ClassId c = classes::rooftop;
            for (const auto& o : truth.obstacles) {
                if (o.contains(x, y)) {
                    z += o.height;
                    c = o.cls;
                    break;
                }
            }
            if (spec.noise_sigma > 0.0) z += noise(rng);
            points.push_back({x, y, z});
            cls.push_back(c);
        }
    }
    scene.cloud = ClassifiedPointCloud(std::move(points), std::move(cls));
    scene.cloud.class_names = default_class_names();

    double tallest = 0.0;
    for (const auto& o : truth.obstacles) tallest = std::max(tallest, o.height);
    std::tie(scene.intrinsics, scene.extrinsics) =
        nadir_camera(max_x, max_y, spec.roof_height, spec.camera_altitude, spec.image_size, tallest + 1.0);

    // Render labels by casting one ray per pixel centre.
    const auto& intr = scene.intrinsics;
    const auto& r = scene.extrinsics.rotation;
    const Point3 eye{max_x / 2.0, max_y / 2.0, spec.roof_height + spec.camera_altitude};
    scene.labels = LabelImage(intr.width, intr.height, classes::ground);
    // Half a pixel on the roof plane, so points on the parapet line stay rooftop.
    const double edge_slack = 0.5 * spec.camera_altitude / intr.fx;
    for (int v = 0; v < intr.height; ++v) {
        for (int u = 0; u < intr.width; ++u) {
            const Vec3 dc{(u - intr.cx) / intr.fx, (v - intr.cy) / intr.fy, 1.0};
            const Vec3 dw{r[0][0] * dc.x + r[1][0] * dc.y + r[2][0] * dc.z,
                          r[0][1] * dc.x + r[1][1] * dc.y + r[2][1] * dc.z,
                          r[0][2] * dc.x + r[1][2] * dc.y + r[2][2] * dc.z};
            double nearest = std::numeric_limits<double>::infinity();
            ClassId label = classes::ground;
            for (const auto& o : truth.obstacles) {
                auto t = detail::ray_box(eye, dw, o, spec.roof_height);
                if (t && *t < nearest) {
                    nearest = *t;
                    label = o.cls;
                }
            }
            if (!std::isfinite(nearest)) {
                const double t = (spec.roof_height - eye.z) / dw.z;
                const double x = eye.x + t * dw.x;
                const double y = eye.y + t * dw.y;
                if (x >= -edge_slack && x <= max_x + edge_slack && y >= -edge_slack && y <= max_y + edge_slack) {
                    label = classes::rooftop;
                }
            }
            scene.labels.at(u, v) = label;
        }
    }

    const auto full = detail::grid_oracle(max_x, max_y, truth.obstacles, spec.oracle_step, true);
    truth.oracle_center = full.center;
    truth.oracle_radius = full.radius;
    const auto geo = detail::grid_oracle(max_x, max_y, truth.obstacles, spec.oracle_step, false);
    truth.geometric_center = geo.center;
    truth.geometric_radius = geo.radius;
    return scene;
}

} // namespace landsite
