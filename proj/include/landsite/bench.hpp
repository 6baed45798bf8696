#pragma once

// Per-stage wall-clock timing over repeated pipeline runs, reported as the
// mean with a Student-t 95% confidence interval.

#include <landsite/pipeline.hpp>
#include <landsite/scenegen.hpp>

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace landsite {

struct Estimate {
    double mean = 0.0;
    /// Half-width of the 95% confidence interval; 0 with fewer than two samples.
    double ci95 = 0.0;
    std::size_t samples = 0;
};

inline Estimate estimate(const std::vector<double>& xs)
{
    Estimate e;
    e.samples = xs.size();
    if (xs.empty()) return e;
    double sum = 0.0;
    for (double x : xs) sum += x;
    e.mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return e;
    double ss = 0.0;
    for (double x : xs) ss += (x - e.mean) * (x - e.mean);
    const double n = static_cast<double>(xs.size());
    const double sd = std::sqrt(ss / (n - 1.0));
    boost::math::students_t dist(n - 1.0);
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    e.ci95 = t * sd / std::sqrt(n);
    return e;
}

inline const std::vector<std::string>& bench_stage_names()
{
    static const std::vector<std::string> names{"classification", "triangulation", "filtering", "extraction",
                                                "polygonization", "polylabel", "geometry", "total"};
    return names;
}

struct BenchResult {
    std::size_t target_points = 0;
    std::size_t points = 0;
    std::map<std::string, Estimate> stages;
};

struct BenchOptions {
    std::size_t repeat = 30;
    std::uint64_t seed = 7;
    double spacing = 0.5;
    double noise = 0.02;
    /// Run the classification stage through the synthetic camera.
    bool classify = false;
    /// Untimed runs before measuring.
    std::size_t warmup = 2;
};

/// Square synthetic roof whose grid has roughly `n` points.
inline Scene bench_scene(std::size_t n, const BenchOptions& opt)
{
    const double side_points = std::max(3.0, std::round(std::sqrt(static_cast<double>(n))));
    SceneSpec spec;
    spec.roof_width = spec.roof_length = (side_points - 1.0) * opt.spacing;
    spec.spacing = opt.spacing;
    spec.noise_sigma = opt.noise;
    spec.seed = opt.seed;
    spec.oracle_step = std::max(0.05, spec.roof_width / 400.0);
    return generate_scene(spec);
}

inline BenchResult bench_size(std::size_t n, const BenchOptions& opt)
{
    const Scene scene = bench_scene(n, opt);
    PipelineConfig cfg;
    if (opt.classify) {
        CameraSetup cam;
        cam.intrinsics = scene.intrinsics;
        cam.extrinsics = scene.extrinsics;
        cam.labels = scene.labels;
        cfg.camera = std::move(cam);
    }
    const auto points = scene.cloud.points();

    std::map<std::string, std::vector<double>> samples;
    for (std::size_t r = 0; r < opt.warmup + opt.repeat; ++r) {
        const LandingReport rep = run(points, cfg);
        if (r < opt.warmup) continue;
        const auto& t = rep.timings;
        samples["classification"].push_back(t.classification_ms);
        samples["triangulation"].push_back(t.triangulation_ms);
        samples["filtering"].push_back(t.filtering_ms);
        samples["extraction"].push_back(t.extraction_ms);
        samples["polygonization"].push_back(t.polygonization_ms);
        samples["polylabel"].push_back(t.polylabel_ms);
        samples["geometry"].push_back(t.geometry_ms());
        samples["total"].push_back(t.total_ms);
    }
    BenchResult res;
    res.target_points = n;
    res.points = scene.cloud.size();
    for (const auto& [name, xs] : samples) res.stages[name] = estimate(xs);
    return res;
}

} // namespace landsite
