// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "games/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace games {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Pinhole camera. Camera space is +x right, +y down, +z forward; pixel
/// (i, j) has its centre at image coordinate (i, j).
struct Camera {
    Mat3 rotation = Mat3::Identity(); ///< world-to-camera
    Vec3 translation = Vec3::Zero();  ///< world-to-camera
    double fx = 1.0, fy = 1.0;
    double cx = 0.0, cy = 0.0;
    int width = 1, height = 1;
    double near = 0.01, far = 1000.0;

    Vec3 toCamera(const Vec3 &world) const { return rotation * world + translation; }
    Vec3 position() const { return -(rotation.transpose() * translation); }

    /// Camera at `eye` looking at `target`; `up` is the world direction that
    /// should appear upwards in the image. Principal point at the image centre.
    static Camera lookAt(const Vec3 &eye, const Vec3 &target, const Vec3 &up, double focal, int width, int height);

    /// The same view after the world has been moved by x ↦ q·x + offset.
    Camera movedWithWorld(const Mat3 &q, const Vec3 &offset) const;

    bool operator==(const Camera &) const = default;
};

/// Throws ValidationError unless fx, fy > 0, near < far and the image is at
/// least 1x1.
void validateCamera(const Camera &cam);

/// Row-major RGBA, one float per channel.
struct ImageBuffer {
    int width = 0, height = 0;
    std::vector<float> rgba;

    ImageBuffer() = default;
    ImageBuffer(int w, int h) : width(w), height(h), rgba(std::size_t(w) * std::size_t(h) * 4, 0.0f) {}

    float *pixel(int x, int y) { return rgba.data() + (std::size_t(y) * std::size_t(width) + std::size_t(x)) * 4; }
    const float *pixel(int x, int y) const {
        return rgba.data() + (std::size_t(y) * std::size_t(width) + std::size_t(x)) * 4;
    }

    bool operator==(const ImageBuffer &) const = default;
};

/// Added to both diagonal entries of every screen-space covariance.
inline constexpr double kLowPassFloor = 0.3;
inline constexpr float kMaxAlpha = 0.99f;
inline constexpr float kMinTransmittance = 1e-4f;

struct ProjectedSplat {
    Vec2 mean;
    Mat2 cov;
    double depth = 0.0;
    /// Pixel radius of the 3-sigma footprint.
    double radius = 0.0;
};

/// EWA projection: cov2d = J·W·Σ·Wᵀ·Jᵀ + floor·I. Returns nullopt when the
/// splat is outside [near, far] or its 3-sigma footprint misses the image.
std::optional<ProjectedSplat> project(const SplatGaussian &g, const Camera &cam);

/// Real SH colour in the reference splatting convention: the basis sum plus
/// 0.5, clamped below at zero.
Vec3 evalSh(const SphericalHarmonics &sh, const Vec3 &dir);

struct RenderOptions {
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Depth-sorted front-to-back alpha compositing over the background. Output is
/// bit-identical for identical inputs regardless of the thread count.
ImageBuffer rasterize(std::span<const SplatGaussian> gaussians, const Camera &cam, const Vec3 &background,
                      const RenderOptions &options = {});

/// PSNR over RGB (alpha ignored). Identical images give +infinity.
double psnr(const ImageBuffer &a, const ImageBuffer &b);

inline constexpr double kPsnrDisplayCap = 99.0;
inline double psnrForDisplay(double db) { return db > kPsnrDisplayCap ? kPsnrDisplayCap : db; }

/// round(255·v) after clamping to [0,1].
std::vector<std::uint8_t> toRgba8(const ImageBuffer &img);
ImageBuffer fromRgba8(std::span<const std::uint8_t> rgba, int width, int height);

} // namespace games
