#include <landsite/landsite.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace landsite;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name)
{
    fs::path d = fs::path(LANDSITE_TEST_TMP) / "pipeline" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

SceneSpec bare_roof()
{
    SceneSpec s;
    s.assets.clear();
    return s;
}

PipelineConfig with_camera(const Scene& s)
{
    PipelineConfig cfg;
    CameraSetup cam;
    cam.intrinsics = s.intrinsics;
    cam.extrinsics = s.extrinsics;
    cam.labels = s.labels;
    cfg.camera = cam;
    return cfg;
}

int exit_code(const std::string& cmd)
{
    const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string land() { return std::string("\"") + LAND_EXE + "\""; }

} // namespace

TEST(Pipeline, EmptyRoofSiteAtCentre)
{
    const Scene s = generate_scene(bare_roof());
    const LandingReport r = run(s.cloud, PipelineConfig{});
    ASSERT_EQ(r.status, Status::ok);
    ASSERT_TRUE(r.site);
    EXPECT_NEAR(r.site->radius, 10.0, 0.5);
    EXPECT_NEAR(r.site->center2d.x, 10.0, 0.5);
    EXPECT_NEAR(r.site->center2d.y, 10.0, 0.5);
    EXPECT_NEAR(r.site->center3d.z, 30.0, 1e-9);
    EXPECT_EQ(r.meshes.size(), 1u);
    EXPECT_EQ(r.class_source, "input");
    EXPECT_EQ(r.input_points, s.cloud.size());
}

TEST(Pipeline, TwoObstaclesBecomeTwoHoles)
{
    SceneSpec spec = bare_roof();
    spec.fixed_obstacles = {{"ac-unit", classes::ac_unit, 4, 4, 7, 7, 1.2},
                            {"air-vents", classes::air_vents, 12, 11, 14, 13, 0.8}};
    const Scene s = generate_scene(spec);
    const LandingReport r = run(s.cloud, PipelineConfig{});
    ASSERT_TRUE(r.site);
    ASSERT_EQ(r.meshes.size(), 1u);
    EXPECT_EQ(r.meshes[0].polygon.holes().size(), 2u);
    EXPECT_NEAR(r.site->radius, s.truth.oracle_radius, 0.5 + 2 * spec.spacing);
    for (const auto& o : s.truth.obstacles) {
        // The chosen circle stays off every obstacle footprint.
        EXPECT_GE(o.distance(r.site->center2d.x, r.site->center2d.y), r.site->radius - 2 * spec.spacing);
    }
}

TEST(Pipeline, UnclassifiedInputUsesDefaultClass)
{
    const Scene s = generate_scene(bare_roof());
    const auto pts = s.cloud.points();
    const LandingReport r = run(pts, PipelineConfig{});
    EXPECT_EQ(r.class_source, "default");
    ASSERT_TRUE(r.site);
    EXPECT_NEAR(r.site->radius, 10.0, 0.5);
}

TEST(Pipeline, TarpExcludedOnlyWithClassification)
{
    SceneSpec spec = bare_roof();
    spec.fixed_obstacles = {{"tarp", classes::tarp, 8, 8, 12, 12, 0.0}};
    const Scene s = generate_scene(spec);

    const LandingReport geometric = run(s.cloud.points(), PipelineConfig{});
    const LandingReport classified = run(s.cloud.points(), with_camera(s));
    ASSERT_TRUE(geometric.site);
    ASSERT_TRUE(classified.site);
    EXPECT_EQ(classified.class_source, "camera");

    EXPECT_NEAR(geometric.site->radius, s.truth.geometric_radius, 0.5 + 2 * spec.spacing);
    EXPECT_NEAR(classified.site->radius, s.truth.oracle_radius, 0.5 + 2 * spec.spacing);
    EXPECT_LE(classified.site->radius, geometric.site->radius);
    // Without classes the flat tarp is indistinguishable from roof.
    EXPECT_TRUE(geometric.meshes[0].polygon.holes().empty());
    EXPECT_EQ(classified.meshes[0].polygon.holes().size(), 1u);
}

TEST(Pipeline, AllPointsForeignGivesNoSite)
{
    const Scene s = generate_scene(bare_roof());
    const auto cloud = ClassifiedPointCloud::uniform({s.cloud.points().begin(), s.cloud.points().end()}, classes::tarp);
    const LandingReport r = run(cloud, PipelineConfig{});
    EXPECT_EQ(r.status, Status::no_landing_site);
    EXPECT_FALSE(r.site);
    EXPECT_FALSE(r.message.empty());
}

TEST(Pipeline, DegenerateInputGivesNoSite)
{
    const std::vector<Point3> line{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    const LandingReport r = run(line, PipelineConfig{});
    EXPECT_EQ(r.status, Status::no_landing_site);
    EXPECT_FALSE(r.site);
    EXPECT_TRUE(run(std::vector<Point3>{}, PipelineConfig{}).status == Status::no_landing_site);
}

TEST(Pipeline, ReportIdempotentWithoutTimings)
{
    SceneSpec spec;
    spec.seed = 11;
    spec.noise_sigma = 0.02;
    const Scene s = generate_scene(spec);
    const auto a = report_to_json(run(s.cloud.points(), with_camera(s)), false).dump();
    const auto b = report_to_json(run(s.cloud.points(), with_camera(s)), false).dump();
    EXPECT_EQ(a, b);
    const json full = report_to_json(run(s.cloud, PipelineConfig{}), true);
    EXPECT_TRUE(full.contains("timings_ms"));
    EXPECT_GE(full["timings_ms"]["total"].get<double>(), full["timings_ms"]["triangulation"].get<double>());
}

TEST(Pipeline, TimingsCoverStages)
{
    const Scene s = generate_scene(bare_roof());
    const LandingReport r = run(s.cloud.points(), with_camera(s));
    const auto& t = r.timings;
    for (double v : {t.classification_ms, t.triangulation_ms, t.filtering_ms, t.extraction_ms, t.polygonization_ms,
                     t.polylabel_ms}) {
        EXPECT_GE(v, 0.0);
    }
    EXPECT_GE(t.total_ms + 1e-6, t.geometry_ms());
    EXPECT_GT(t.triangulation_ms, 0.0);
}

TEST(Svg, StructureMatchesReport)
{
    SceneSpec spec = bare_roof();
    spec.fixed_obstacles = {{"ac-unit", classes::ac_unit, 4, 4, 7, 7, 1.2},
                            {"air-vents", classes::air_vents, 12, 11, 14, 13, 0.8}};
    const LandingReport r = run(generate_scene(spec).cloud, PipelineConfig{});
    const std::string svg = render_svg(r);
    auto count = [&](const std::string& needle) {
        std::size_t n = 0;
        for (auto pos = svg.find(needle); pos != std::string::npos; pos = svg.find(needle, pos + 1)) ++n;
        return n;
    };
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_EQ(count("<path"), 3u);
    EXPECT_EQ(count("stroke=\"orange\""), 2u);
    EXPECT_EQ(count("<circle"), 1u);
    EXPECT_EQ(count("<polygon"), 1u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Svg, EmptyReportGivesEmptyCanvas)
{
    const std::string svg = render_svg(LandingReport{});
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_EQ(svg.find("<path"), std::string::npos);
    EXPECT_EQ(svg.find("<circle"), std::string::npos);
}

TEST(Cli, GenThenRunSucceeds)
{
    const auto dir = tmp_dir("cli_ok");
    ASSERT_EQ(exit_code(land() + " gen --seed 4 --out \"" + dir.string() + "\""), 0);
    const std::string report = (dir / "report.json").string();
    const std::string svg = (dir / "site.svg").string();
    EXPECT_EQ(exit_code(land() + " run --cloud \"" + (dir / "cloud.xyz").string() + "\" --config \"" +
                        (dir / "config.json").string() + "\" --report \"" + report + "\" --svg \"" + svg + "\""),
              0);
    std::ifstream in(report);
    const json j = json::parse(in);
    EXPECT_EQ(j["status"], "ok");
    EXPECT_EQ(j["input"]["class_source"], "camera");
    EXPECT_TRUE(fs::exists(svg));
}

TEST(Cli, NoSiteExitsTwo)
{
    const auto dir = tmp_dir("cli_nosite");
    {
        std::ofstream f(dir / "line.xyz");
        f << "0 0 0\n1 0 0\n2 0 0\n";
    }
    EXPECT_EQ(exit_code(land() + " run --cloud \"" + (dir / "line.xyz").string() + "\""), 2);
}

TEST(Cli, ErrorsExitOne)
{
    const auto dir = tmp_dir("cli_err");
    {
        std::ofstream f(dir / "bad.xyz");
        f << "0 0 0\n1 nan 0\n";
    }
    EXPECT_EQ(exit_code(land() + " run --cloud \"" + (dir / "bad.xyz").string() + "\""), 1);
    EXPECT_EQ(exit_code(land() + " run --cloud \"" + (dir / "missing.xyz").string() + "\""), 1);
    EXPECT_EQ(exit_code(land() + " run"), 1);
    EXPECT_EQ(exit_code(land() + " frobnicate"), 1);
}

TEST(Cli, BenchRuns)
{
    EXPECT_EQ(exit_code(land() + " bench --sizes 500 --repeat 3"), 0);
    EXPECT_EQ(exit_code(land() + " bench --sizes 1q --repeat 3"), 1);
}
