// land: rooftop landing-site selection from a point cloud.
//
//   land run   --cloud F [--config F] [--label-image F] [--svg F] [--report F] [--precision M]
//   land gen   --seed N --out DIR [--spacing M] [--noise M]
//   land bench --sizes 1k,10k --repeat R
//
// Exit codes: 0 success, 2 no landing site, 1 error.

#include <landsite/landsite.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoSite = 2;

std::size_t parse_size(const std::string& text)
{
    std::string s = text;
    double mult = 1.0;
    if (!s.empty() && (s.back() == 'k' || s.back() == 'K')) {
        mult = 1e3;
        s.pop_back();
    } else if (!s.empty() && (s.back() == 'm' || s.back() == 'M')) {
        mult = 1e6;
        s.pop_back();
    }
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !(v > 0.0)) throw std::invalid_argument("bad size '" + text + "'");
    return static_cast<std::size_t>(std::llround(v * mult));
}

struct RunArgs {
    std::string cloud;
    std::string config;
    std::string label_image;
    std::string svg;
    std::string report;
    double precision = 0.0;
};

int cmd_run(const RunArgs& a)
{
    landsite::PipelineConfig cfg = a.config.empty() ? landsite::PipelineConfig{} : landsite::load_config(a.config);
    if (a.precision > 0.0) cfg.precision = a.precision;
    if (!a.label_image.empty()) {
        if (!cfg.camera) throw landsite::ParseError("--label-image needs a camera block in --config");
        cfg.camera->label_image_path = a.label_image;
    }
    if (cfg.camera && cfg.camera->label_image_path.empty()) {
        throw landsite::ParseError("camera block needs 'label_image' or --label-image");
    }

    const landsite::LandingReport report = landsite::run_file(a.cloud, cfg);

    if (!a.report.empty()) {
        std::ofstream out(a.report);
        if (!out) throw landsite::IoError("cannot write '" + a.report + "'");
        out << landsite::report_to_json(report).dump(2) << '\n';
    }
    if (!a.svg.empty()) landsite::emit_svg(report, a.svg);

    const auto& t = report.timings;
    if (report.site) {
        const auto& s = *report.site;
        std::printf("landing site: center (%.3f, %.3f, %.3f) radius %.3f m (precision %.3f m, mesh %zu)\n",
                    s.center3d.x, s.center3d.y, s.center3d.z, s.radius, s.precision, s.mesh_id);
    } else {
        std::printf("no landing site: %s\n", report.message.c_str());
    }
    std::printf("points %zu, triangles %zu, filtered %zu, meshes %zu\n", report.input_points, report.triangles,
                report.filtered_triangles, report.meshes.size());
    std::printf("timings ms: classify %.3f  triangulate %.3f  filter %.3f  extract %.3f  polygonize %.3f  "
                "polylabel %.3f  total %.3f\n",
                t.classification_ms, t.triangulation_ms, t.filtering_ms, t.extraction_ms, t.polygonization_ms,
                t.polylabel_ms, t.total_ms);
    return report.site ? kExitOk : kExitNoSite;
}

struct GenArgs {
    std::uint64_t seed = 0;
    std::string out;
    double spacing = 0.5;
    double noise = 0.02;
    double width = 20.0;
    double length = 20.0;
    double tarp_probability = 0.0;
};

int cmd_gen(const GenArgs& a)
{
    landsite::SceneSpec spec;
    spec.seed = a.seed;
    spec.spacing = a.spacing;
    spec.noise_sigma = a.noise;
    spec.roof_width = a.width;
    spec.roof_length = a.length;
    spec.tarp_probability = a.tarp_probability;
    const landsite::Scene scene = landsite::generate_scene(spec);
    landsite::write_scene(scene, a.out);
    std::printf("wrote %zu points, %zu obstacles to %s (oracle radius %.3f m)\n", scene.cloud.size(),
                scene.truth.obstacles.size(), a.out.c_str(), scene.truth.oracle_radius);
    return kExitOk;
}

struct BenchArgs {
    std::string sizes = "1.5k";
    std::size_t repeat = 30;
    std::uint64_t seed = 7;
    bool classify = false;
};

int cmd_bench(const BenchArgs& a)
{
    std::vector<std::size_t> sizes;
    std::string item;
    for (std::size_t i = 0; i <= a.sizes.size(); ++i) {
        if (i == a.sizes.size() || a.sizes[i] == ',') {
            if (!item.empty()) sizes.push_back(parse_size(item));
            item.clear();
        } else {
            item.push_back(a.sizes[i]);
        }
    }
    if (sizes.empty()) throw std::invalid_argument("--sizes is empty");

    landsite::BenchOptions opt;
    opt.repeat = a.repeat;
    opt.seed = a.seed;
    opt.classify = a.classify;

    std::vector<landsite::BenchResult> results;
    for (std::size_t n : sizes) {
        results.push_back(landsite::bench_size(n, opt));
        const auto& r = results.back();
        std::printf("n=%zu (%zu points), %zu runs, mean +/- 95%% CI [ms]\n", r.target_points, r.points, opt.repeat);
        for (const auto& name : landsite::bench_stage_names()) {
            const auto& e = r.stages.at(name);
            std::printf("  %-15s %10.4f +/- %.4f\n", name.c_str(), e.mean, e.ci95);
        }
    }
    for (std::size_t i = 1; i < results.size(); ++i) {
        const double ratio = results[i].stages.at("geometry").mean / results[0].stages.at("geometry").mean;
        std::printf("geometry time ratio n=%zu / n=%zu: %.2f\n", results[i].target_points, results[0].target_points,
                    ratio);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rooftop landing-site selection"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Find the landing site in a point cloud");
    run->add_option("--cloud", run_args.cloud, "Point cloud file (x y z [class] per line)")->required();
    run->add_option("--config", run_args.config, "JSON config file");
    run->add_option("--label-image", run_args.label_image, "16-bit PGM label image (overrides the config path)");
    run->add_option("--svg", run_args.svg, "Write an SVG rendering");
    run->add_option("--report", run_args.report, "Write the JSON report");
    run->add_option("--precision", run_args.precision, "Pole search precision in meters")
        ->check(CLI::PositiveNumber);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic rooftop scene");
    gen->add_option("--seed", gen_args.seed, "RNG seed")->required();
    gen->add_option("--out", gen_args.out, "Output directory")->required();
    gen->add_option("--spacing", gen_args.spacing, "Point spacing in meters")->check(CLI::PositiveNumber);
    gen->add_option("--noise", gen_args.noise, "Vertical noise sigma in meters")->check(CLI::NonNegativeNumber);
    gen->add_option("--width", gen_args.width, "Roof width in meters")->check(CLI::PositiveNumber);
    gen->add_option("--length", gen_args.length, "Roof length in meters")->check(CLI::PositiveNumber);
    gen->add_option("--tarp-prob", gen_args.tarp_probability, "Probability of an extra tarp")
        ->check(CLI::Range(0.0, 1.0));

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Time each pipeline stage");
    bench->add_option("--sizes", bench_args.sizes, "Comma-separated point counts, e.g. 1k,10k");
    bench->add_option("--repeat", bench_args.repeat, "Timed runs per size")->check(CLI::Range(1, 1000000));
    bench->add_option("--seed", bench_args.seed, "Scene seed");
    bench->add_flag("--classify", bench_args.classify, "Include the classification stage");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitError;
    }

    try {
        if (*run) return cmd_run(run_args);
        if (*gen) return cmd_gen(gen_args);
        if (*bench) return cmd_bench(bench_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "land: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
