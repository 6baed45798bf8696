#pragma once

// End-to-end landing-site selection: classify, triangulate, filter, extract
// meshes, polygonize, and solve for the pole of the largest flat region.

#include <landsite/core_types.hpp>
#include <landsite/io.hpp>
#include <landsite/pointclass.hpp>
#include <landsite/polylabel.hpp>
#include <landsite/polylidar.hpp>
#include <landsite/triangulation.hpp>

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace landsite {

struct CameraSetup {
    CameraIntrinsics intrinsics;
    CameraExtrinsics extrinsics;
    std::string label_image_path;
    /// Loaded label image; read from label_image_path when not set.
    std::optional<LabelImage> labels;
};

struct PipelineConfig {
    FilterParams filter;
    double precision = 0.5;
    /// Class given to every point when the input carries no classes and no camera is configured.
    ClassId default_class = classes::rooftop;
    std::map<std::string, ClassId> class_ids;
    std::optional<CameraSetup> camera;

    PipelineConfig()
    {
        for (const auto& [id, name] : default_class_names()) class_ids[name] = id;
    }
};

struct StageTimings {
    double classification_ms = 0.0;
    double triangulation_ms = 0.0;
    double filtering_ms = 0.0;
    double extraction_ms = 0.0;
    double polygonization_ms = 0.0;
    double polylabel_ms = 0.0;
    double total_ms = 0.0;

    /// Everything after classification.
    double geometry_ms() const
    {
        return triangulation_ms + filtering_ms + extraction_ms + polygonization_ms + polylabel_ms;
    }
};

struct MeshSummary {
    std::size_t mesh_id = 0;
    std::size_t triangle_count = 0;
    double area = 0.0;
    PolygonWithHoles polygon;
};

enum class Status { ok, no_landing_site };

struct LandingReport {
    Status status = Status::no_landing_site;
    std::string message;
    std::optional<LandingSite> site;
    std::vector<MeshSummary> meshes;
    StageTimings timings;
    std::size_t input_points = 0;
    std::size_t unique_points = 0;
    std::size_t triangles = 0;
    std::size_t filtered_triangles = 0;
    /// Where point classes came from: "camera", "input" or "default".
    std::string class_source = "default";
};

namespace detail {

class StageClock {
public:
    StageClock() : start_(std::chrono::steady_clock::now()) {}

    double lap()
    {
        auto now = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(now - start_).count();
        start_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline LandingReport run_classified(const ClassifiedPointCloud& cloud, const FilterParams& filter, double precision,
                                    LandingReport report, std::chrono::steady_clock::time_point t0)
{
    StageClock clock;
    report.input_points = cloud.size();

    std::optional<Triangulation> tri;
    try {
        tri = delaunay(drop_z(cloud));
    } catch (const DegenerateInput& e) {
        report.timings.triangulation_ms = clock.lap();
        report.status = Status::no_landing_site;
        report.message = e.what();
        report.timings.total_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return report;
    }
    report.timings.triangulation_ms = clock.lap();
    report.unique_points = tri->unique_points;
    report.triangles = tri->size();

    const auto filtered = filter_triangles(*tri, cloud, filter);
    report.timings.filtering_ms = clock.lap();
    report.filtered_triangles = filtered.size();

    const auto meshes = extract_planar_meshes(filtered, *tri, cloud);
    report.timings.extraction_ms = clock.lap();

    std::optional<std::size_t> largest;
    for (const auto& mesh : meshes) {
        MeshSummary s;
        s.mesh_id = mesh.mesh_id;
        s.triangle_count = mesh.triangle_indices.size();
        s.area = mesh_area_2d(mesh, *tri);
        s.polygon = mesh_to_polygon(mesh, *tri);
        if (!largest || s.area > report.meshes[*largest].area) largest = report.meshes.size();
        report.meshes.push_back(std::move(s));
    }
    report.timings.polygonization_ms = clock.lap();

    if (!largest) {
        report.status = Status::no_landing_site;
        report.message = "no triangle survived filtering";
    } else {
        const MeshSummary& chosen = report.meshes[*largest];
        const Pole pole = find_pole(chosen.polygon, precision);
        if (pole.radius > 0.0) {
            LandingSite site;
            site.center2d = pole.center;
            site.center3d = lift_to_plane(pole.center, chosen.polygon.plane());
            site.radius = pole.radius;
            site.precision = precision;
            site.mesh_id = chosen.mesh_id;
            site.plane = chosen.polygon.plane();
            report.site = site;
            report.status = Status::ok;
        } else {
            report.status = Status::no_landing_site;
            report.message = "largest flat region has no interior clearance";
        }
    }
    report.timings.polylabel_ms = clock.lap();
    report.timings.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace detail

/// Runs on points without classes. With a camera configured the points are
/// classified from its label image; otherwise every point gets
/// config.default_class, which is also added to the allowed set.
inline LandingReport run(std::span<const Point3> points, const PipelineConfig& config)
{
    const auto t0 = std::chrono::steady_clock::now();
    LandingReport report;
    FilterParams filter = config.filter;
    ClassifiedPointCloud cloud;
    if (config.camera) {
        detail::StageClock clock;
        const CameraSetup& cam = *config.camera;
        const LabelImage image = cam.labels ? *cam.labels : load_pgm(cam.label_image_path);
        cloud = classify_cloud(points, image, cam.intrinsics, cam.extrinsics);
        report.timings.classification_ms = clock.lap();
        report.class_source = "camera";
    } else {
        cloud = ClassifiedPointCloud::uniform(std::vector<Point3>(points.begin(), points.end()), config.default_class);
        filter.allowed_classes.insert(config.default_class);
    }
    return detail::run_classified(cloud, filter, config.precision, std::move(report), t0);
}

/// Runs on an already classified cloud. A configured camera overrides the
/// cloud's classes.
inline LandingReport run(const ClassifiedPointCloud& cloud, const PipelineConfig& config)
{
    if (config.camera) return run(cloud.points(), config);
    LandingReport report;
    report.class_source = "input";
    return detail::run_classified(cloud, config.filter, config.precision, std::move(report),
                                  std::chrono::steady_clock::now());
}

inline LandingReport run(const LoadedCloud& loaded, const PipelineConfig& config)
{
    return loaded.has_classes ? run(loaded.cloud, config) : run(loaded.cloud.points(), config);
}

inline LandingReport run_file(const std::string& cloud_path, const PipelineConfig& config)
{
    return run(load_point_cloud(cloud_path), config);
}

} // namespace landsite
