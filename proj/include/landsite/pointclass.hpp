#pragma once

#include <landsite/core_types.hpp>

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace landsite {

/// Pinhole intrinsics in pixel units.
struct CameraIntrinsics {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 1;
    int height = 1;

    void validate() const
    {
        if (!(fx > 0.0 && fy > 0.0)) throw std::invalid_argument("focal lengths must be positive");
        if (width <= 0 || height <= 0) throw std::invalid_argument("image size must be positive");
        if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height)) {
            throw std::invalid_argument("principal point must lie inside the image");
        }
    }
};

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat3 identity3() { return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}; }

/// Rigid transform from the local frame into the camera frame
/// (+z forward, +x right, +y down).
struct CameraExtrinsics {
    Mat3 rotation = identity3();
    Vec3 translation{};

    void validate() const
    {
        const auto& r = rotation;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double d = r[i][0] * r[j][0] + r[i][1] * r[j][1] + r[i][2] * r[j][2];
                if (std::abs(d - (i == j ? 1.0 : 0.0)) > 1e-9) {
                    throw std::invalid_argument("rotation is not orthonormal");
                }
            }
        }
        double det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) -
                     r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
                     r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
        if (std::abs(det - 1.0) > 1e-9) throw std::invalid_argument("rotation must have determinant +1");
    }
};

/// Row-major per-pixel class ids.
struct LabelImage {
    int width = 0;
    int height = 0;
    std::vector<ClassId> labels;

    LabelImage() = default;
    LabelImage(int w, int h, ClassId fill = 0) : width(w), height(h), labels(static_cast<std::size_t>(w) * h, fill)
    {
        if (w < 0 || h < 0) throw std::invalid_argument("negative image size");
    }

    ClassId at(int u, int v) const { return labels[static_cast<std::size_t>(v) * width + u]; }
    ClassId& at(int u, int v) { return labels[static_cast<std::size_t>(v) * width + u]; }

    friend bool operator==(const LabelImage&, const LabelImage&) = default;
};

struct Pixel {
    int u = 0;
    int v = 0;

    friend bool operator==(const Pixel&, const Pixel&) = default;
};

inline Vec3 to_camera_frame(const Point3& p, const CameraExtrinsics& ext)
{
    const auto& r = ext.rotation;
    return {r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z + ext.translation.x,
            r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z + ext.translation.y,
            r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z + ext.translation.z};
}

/// Nearest pixel of a camera-frame point, or nullopt when it is behind the
/// camera or falls outside the image.
inline std::optional<Pixel> project(const Vec3& p_cam, const CameraIntrinsics& intr)
{
    if (!(p_cam.z > 0.0)) return std::nullopt;
    const double u = intr.fx * p_cam.x / p_cam.z + intr.cx;
    const double v = intr.fy * p_cam.y / p_cam.z + intr.cy;
    const double ur = std::round(u);
    const double vr = std::round(v);
    if (!(ur >= 0.0 && ur < intr.width && vr >= 0.0 && vr < intr.height)) return std::nullopt;
    return Pixel{static_cast<int>(ur), static_cast<int>(vr)};
}

/// Labels every point from the segmented image. Points that do not project
/// into the image get kUnlabeled. Occlusion is not modelled.
inline ClassifiedPointCloud classify_cloud(std::span<const Point3> points, const LabelImage& image,
                                           const CameraIntrinsics& intr, const CameraExtrinsics& ext)
{
    if (image.width != intr.width || image.height != intr.height) {
        throw std::invalid_argument("label image size does not match camera intrinsics");
    }
    std::vector<ClassId> cls;
    cls.reserve(points.size());
    for (const auto& p : points) {
        auto px = project(to_camera_frame(p, ext), intr);
        cls.push_back(px ? image.at(px->u, px->v) : kUnlabeled);
    }
    return ClassifiedPointCloud(std::vector<Point3>(points.begin(), points.end()), std::move(cls));
}

} // namespace landsite
