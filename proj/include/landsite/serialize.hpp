#pragma once

// JSON config and report formats, the ground-truth sidecar, and SVG output.

#include <landsite/pipeline.hpp>
#include <landsite/scenegen.hpp>

#include <json.hpp>

#include <filesystem>
#include <numbers>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace landsite {

using json = nlohmann::json;

namespace detail {

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known, const std::string& where)
{
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ParseError("unknown key '" + key + "' in " + where);
    }
}

inline ClassId class_from_json(const json& v, const std::map<std::string, ClassId>& ids)
{
    if (v.is_number_integer()) {
        auto c = v.get<long>();
        if (c < 0 || c > 65535) throw ParseError("class id out of range: " + v.dump());
        return static_cast<ClassId>(c);
    }
    if (v.is_string()) {
        auto it = ids.find(v.get<std::string>());
        if (it == ids.end()) throw ParseError("unknown class name '" + v.get<std::string>() + "'");
        return it->second;
    }
    throw ParseError("class must be a name or an integer id: " + v.dump());
}

inline double number(const json& obj, const char* key, double fallback)
{
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ParseError(std::string("'") + key + "' must be a number");
    return obj[key].get<double>();
}

} // namespace detail

/// Parses a pipeline config. Every key is optional:
///
///     {
///       "l_max": 4.0, "dot_min": 0.96, "z_min": 0.10,
///       "allowed_classes": ["rooftop"],
///       "precision": 0.5,
///       "default_class": "rooftop",
///       "classes": {"rooftop": 3, "tarp": 12},
///       "camera": {
///         "intrinsics": {"fx": 500, "fy": 500, "cx": 256, "cy": 256, "width": 512, "height": 512},
///         "extrinsics": {"rotation": [[1,0,0],[0,1,0],[0,0,1]], "translation": [0,0,0]},
///         "label_image": "labels.pgm"
///       }
///     }
///
/// A relative label_image path is resolved against `base_dir`.
inline PipelineConfig parse_config(const json& j, const std::filesystem::path& base_dir = {})
{
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    detail::reject_unknown_keys(j,
                                {"l_max", "dot_min", "z_min", "allowed_classes", "precision", "default_class",
                                 "classes", "camera"},
                                "config");
    PipelineConfig cfg;
    if (j.contains("classes")) {
        if (!j["classes"].is_object()) throw ParseError("'classes' must map names to ids");
        for (const auto& [name, id] : j["classes"].items()) {
            if (!id.is_number_integer()) throw ParseError("class id for '" + name + "' must be an integer");
            cfg.class_ids[name] = static_cast<ClassId>(id.get<int>());
        }
    }
    cfg.filter.l_max = detail::number(j, "l_max", cfg.filter.l_max);
    cfg.filter.dot_min = detail::number(j, "dot_min", cfg.filter.dot_min);
    cfg.filter.z_min = detail::number(j, "z_min", cfg.filter.z_min);
    cfg.precision = detail::number(j, "precision", cfg.precision);
    if (j.contains("allowed_classes")) {
        if (!j["allowed_classes"].is_array()) throw ParseError("'allowed_classes' must be an array");
        cfg.filter.allowed_classes.clear();
        for (const auto& c : j["allowed_classes"]) cfg.filter.allowed_classes.insert(detail::class_from_json(c, cfg.class_ids));
    }
    if (j.contains("default_class")) cfg.default_class = detail::class_from_json(j["default_class"], cfg.class_ids);

    try {
        cfg.filter.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!(cfg.precision > 0.0)) throw ParseError("config: precision must be positive");

    if (j.contains("camera")) {
        const json& cam = j["camera"];
        if (!cam.is_object()) throw ParseError("'camera' must be an object");
        detail::reject_unknown_keys(cam, {"intrinsics", "extrinsics", "label_image"}, "camera");
        CameraSetup setup;
        if (!cam.contains("intrinsics")) throw ParseError("camera block needs 'intrinsics'");
        const json& in = cam["intrinsics"];
        detail::reject_unknown_keys(in, {"fx", "fy", "cx", "cy", "width", "height"}, "camera.intrinsics");
        for (const char* k : {"fx", "fy", "cx", "cy", "width", "height"}) {
            if (!in.contains(k)) throw ParseError(std::string("camera.intrinsics needs '") + k + "'");
        }
        setup.intrinsics.fx = in["fx"].get<double>();
        setup.intrinsics.fy = in["fy"].get<double>();
        setup.intrinsics.cx = in["cx"].get<double>();
        setup.intrinsics.cy = in["cy"].get<double>();
        setup.intrinsics.width = in["width"].get<int>();
        setup.intrinsics.height = in["height"].get<int>();

        if (cam.contains("extrinsics")) {
            const json& ex = cam["extrinsics"];
            detail::reject_unknown_keys(ex, {"rotation", "translation"}, "camera.extrinsics");
            if (ex.contains("rotation")) {
                const json& r = ex["rotation"];
                if (!r.is_array() || r.size() != 3) throw ParseError("rotation must be a 3x3 array");
                for (int i = 0; i < 3; ++i) {
                    if (!r[i].is_array() || r[i].size() != 3) throw ParseError("rotation must be a 3x3 array");
                    for (int k = 0; k < 3; ++k) setup.extrinsics.rotation[i][k] = r[i][k].get<double>();
                }
            }
            if (ex.contains("translation")) {
                const json& t = ex["translation"];
                if (!t.is_array() || t.size() != 3) throw ParseError("translation must have 3 entries");
                setup.extrinsics.translation = {t[0].get<double>(), t[1].get<double>(), t[2].get<double>()};
            }
        }
        try {
            setup.intrinsics.validate();
            setup.extrinsics.validate();
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("camera: ") + e.what());
        }
        if (cam.contains("label_image")) {
            std::filesystem::path p = cam["label_image"].get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            setup.label_image_path = p.string();
        }
        cfg.camera = std::move(setup);
    }
    return cfg;
}

inline PipelineConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        return parse_config(j, std::filesystem::path(path).parent_path());
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

/// Camera block in the config format, used by the scene writer.
inline json camera_to_json(const CameraIntrinsics& intr, const CameraExtrinsics& ext, const std::string& label_image)
{
    json r = json::array();
    for (const auto& row : ext.rotation) r.push_back({row[0], row[1], row[2]});
    return {
        {"intrinsics",
         {{"fx", intr.fx}, {"fy", intr.fy}, {"cx", intr.cx}, {"cy", intr.cy}, {"width", intr.width},
          {"height", intr.height}}},
        {"extrinsics", {{"rotation", r}, {"translation", {ext.translation.x, ext.translation.y, ext.translation.z}}}},
        {"label_image", label_image},
    };
}

namespace detail {

inline json ring_to_json(const Ring& ring)
{
    json out = json::array();
    for (const auto& p : ring) out.push_back({p.x, p.y});
    return out;
}

inline json plane_to_json(const Plane& p) { return {p.a, p.b, p.c, p.d}; }

} // namespace detail

/// Report as JSON. Timings are left out when `with_timings` is false, which
/// makes the output a pure function of inputs and config.
inline json report_to_json(const LandingReport& report, bool with_timings = true)
{
    json j;
    j["status"] = report.status == Status::ok ? "ok" : "no_landing_site";
    if (!report.message.empty()) j["message"] = report.message;
    if (report.site) {
        const auto& s = *report.site;
        j["site"] = {
            {"center2d", {s.center2d.x, s.center2d.y}},
            {"center3d", {s.center3d.x, s.center3d.y, s.center3d.z}},
            {"radius", s.radius},
            {"precision", s.precision},
            {"mesh_id", s.mesh_id},
            {"plane", detail::plane_to_json(s.plane)},
        };
    } else {
        j["site"] = nullptr;
    }
    j["input"] = {
        {"points", report.input_points},
        {"unique_points", report.unique_points},
        {"triangles", report.triangles},
        {"filtered_triangles", report.filtered_triangles},
        {"meshes", report.meshes.size()},
        {"class_source", report.class_source},
    };
    json meshes = json::array();
    for (const auto& m : report.meshes) {
        json holes = json::array();
        for (const auto& h : m.polygon.holes()) holes.push_back(detail::ring_to_json(h));
        meshes.push_back({
            {"mesh_id", m.mesh_id},
            {"triangles", m.triangle_count},
            {"area", m.area},
            {"plane", detail::plane_to_json(m.polygon.plane())},
            {"outer", detail::ring_to_json(m.polygon.outer())},
            {"holes", holes},
        });
    }
    j["meshes"] = meshes;
    if (with_timings) {
        const auto& t = report.timings;
        j["timings_ms"] = {
            {"classification", t.classification_ms}, {"triangulation", t.triangulation_ms},
            {"filtering", t.filtering_ms},           {"extraction", t.extraction_ms},
            {"polygonization", t.polygonization_ms}, {"polylabel", t.polylabel_ms},
            {"total", t.total_ms},
        };
    }
    return j;
}

inline json ground_truth_to_json(const GroundTruth& truth)
{
    json obstacles = json::array();
    for (const auto& o : truth.obstacles) {
        obstacles.push_back({{"asset", o.asset},
                             {"class", o.cls},
                             {"min", {o.min_x, o.min_y}},
                             {"max", {o.max_x, o.max_y}},
                             {"height", o.height}});
    }
    return {
        {"roof_extent", {truth.roof_max_x, truth.roof_max_y}},
        {"obstacles", obstacles},
        {"oracle", {{"center", {truth.oracle_center.x, truth.oracle_center.y}}, {"radius", truth.oracle_radius}}},
        {"geometric_oracle",
         {{"center", {truth.geometric_center.x, truth.geometric_center.y}}, {"radius", truth.geometric_radius}}},
    };
}

inline GroundTruth ground_truth_from_json(const json& j)
{
    GroundTruth t;
    t.roof_max_x = j.at("roof_extent").at(0).get<double>();
    t.roof_max_y = j.at("roof_extent").at(1).get<double>();
    for (const auto& o : j.at("obstacles")) {
        Obstacle ob;
        ob.asset = o.at("asset").get<std::string>();
        ob.cls = o.at("class").get<ClassId>();
        ob.min_x = o.at("min").at(0).get<double>();
        ob.min_y = o.at("min").at(1).get<double>();
        ob.max_x = o.at("max").at(0).get<double>();
        ob.max_y = o.at("max").at(1).get<double>();
        ob.height = o.at("height").get<double>();
        t.obstacles.push_back(ob);
    }
    t.oracle_center = {j.at("oracle").at("center").at(0).get<double>(), j.at("oracle").at("center").at(1).get<double>()};
    t.oracle_radius = j.at("oracle").at("radius").get<double>();
    const json& g = j.at("geometric_oracle");
    t.geometric_center = {g.at("center").at(0).get<double>(), g.at("center").at(1).get<double>()};
    t.geometric_radius = g.at("radius").get<double>();
    return t;
}

/// Renders flat regions (green), holes (orange), the inscribed circle (blue)
/// and its centre (star). One <path> per ring, one <circle> per site.
inline std::string render_svg(const LandingReport& report)
{
    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    double max_x = -min_x, max_y = -min_x;
    auto grow = [&](const Point2& p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    };
    for (const auto& m : report.meshes) {
        for (const auto& p : m.polygon.outer()) grow(p);
    }
    if (report.site) {
        const auto& s = *report.site;
        grow({s.center2d.x - s.radius, s.center2d.y - s.radius});
        grow({s.center2d.x + s.radius, s.center2d.y + s.radius});
    }

    constexpr double kCanvas = 800.0;
    constexpr double kMargin = 20.0;
    std::ostringstream out;
    out << std::setprecision(10);
    if (!std::isfinite(min_x)) {
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\"" << kCanvas
            << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n</svg>\n";
        return out.str();
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
    const double scale = (kCanvas - 2.0 * kMargin) / span;
    auto sx = [&](double x) { return kMargin + (x - min_x) * scale; };
    auto sy = [&](double y) { return kCanvas - kMargin - (y - min_y) * scale; }; // y up

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\"" << kCanvas
        << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n";
    auto path = [&](const Ring& ring, const char* stroke) {
        out << "  <path d=\"";
        for (std::size_t i = 0; i < ring.size(); ++i) {
            out << (i == 0 ? 'M' : 'L') << sx(ring[i].x) << ',' << sy(ring[i].y) << ' ';
        }
        out << "Z\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
    };
    for (const auto& m : report.meshes) {
        path(m.polygon.outer(), "green");
        for (const auto& h : m.polygon.holes()) path(h, "orange");
    }
    if (report.site) {
        const auto& s = *report.site;
        const double cx = sx(s.center2d.x), cy = sy(s.center2d.y);
        out << "  <circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << s.radius * scale
            << "\" fill=\"none\" stroke=\"blue\" stroke-width=\"2\"/>\n";
        out << "  <polygon points=\"";
        for (int k = 0; k < 10; ++k) {
            const double r = (k % 2 == 0) ? 10.0 : 4.0;
            const double a = -std::numbers::pi / 2.0 + k * std::numbers::pi / 5.0;
            out << cx + r * std::cos(a) << ',' << cy + r * std::sin(a) << ' ';
        }
        out << "\" fill=\"gold\" stroke=\"black\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

inline void emit_svg(const LandingReport& report, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << render_svg(report);
    if (!out) throw IoError("write failed for '" + path + "'");
}

/// Writes cloud.xyz, labels.pgm, config.json and ground_truth.json into `dir`.
inline void write_scene(const Scene& scene, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    save_point_cloud((dir / "cloud.xyz").string(), scene.cloud, true);
    save_pgm((dir / "labels.pgm").string(), scene.labels);

    json cfg = {
        {"l_max", 4.0},
        {"dot_min", 0.96},
        {"z_min", 0.10},
        {"allowed_classes", {"rooftop"}},
        {"precision", 0.5},
        {"camera", camera_to_json(scene.intrinsics, scene.extrinsics, "labels.pgm")},
    };
    std::ofstream c(dir / "config.json");
    c << cfg.dump(2) << '\n';
    std::ofstream g(dir / "ground_truth.json");
    g << ground_truth_to_json(scene.truth).dump(2) << '\n';
    if (!c || !g) throw IoError("write failed in '" + dir.string() + "'");
}

} // namespace landsite
