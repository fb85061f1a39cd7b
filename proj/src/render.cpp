// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/render.hpp"

#include "games/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace games {

namespace {

constexpr double kShC0 = 0.28209479177387814;
constexpr double kShC1 = 0.4886025119029199;
constexpr double kShC2[] = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005, -1.0925484305920792,
                            0.5462742152960396};
constexpr double kShC3[] = {-0.5900435899266435, 2.890611442640554, -0.4570457994644658, 0.3731763325901154,
                            -0.4570457994644658, 1.445305721320277,  -0.5900435899266435};

constexpr int kTile = 16;

// Everything the pixel loop needs, in float, laid out in composite order.
struct ScreenSplat {
    float x, y;
    float conicA, conicB, conicC; // inverse covariance (a b; b c)
    float opacity;
    float r, g, b;
};

} // namespace

Camera Camera::lookAt(const Vec3 &eye, const Vec3 &target, const Vec3 &up, double focal, int width, int height) {
    const Vec3 forward = (target - eye).normalized();
    const Vec3 right = forward.cross(up).normalized();
    const Vec3 down = forward.cross(right);
    Camera cam;
    cam.rotation.row(0) = right.transpose();
    cam.rotation.row(1) = down.transpose();
    cam.rotation.row(2) = forward.transpose();
    cam.translation = -(cam.rotation * eye);
    cam.fx = cam.fy = focal;
    cam.width = width;
    cam.height = height;
    cam.cx = 0.5 * width;
    cam.cy = 0.5 * height;
    return cam;
}

Camera Camera::movedWithWorld(const Mat3 &q, const Vec3 &offset) const {
    Camera cam = *this;
    cam.rotation = rotation * q.transpose();
    cam.translation = translation - cam.rotation * offset;
    return cam;
}

void validateCamera(const Camera &cam) {
    if (!(cam.fx > 0.0 && cam.fy > 0.0))
        throw ValidationError("camera focal lengths must be positive");
    if (!(cam.near < cam.far))
        throw ValidationError("camera near plane must be in front of far plane");
    if (cam.width < 1 || cam.height < 1)
        throw ValidationError("camera image must be at least 1x1");
    if (!isOrthonormal(cam.rotation))
        throw ValidationError("camera rotation is not orthonormal");
    if (cam.rotation.determinant() < 0.0)
        throw ValidationError("camera rotation is a reflection");
}

std::optional<ProjectedSplat> project(const SplatGaussian &g, const Camera &cam) {
    const Vec3 p = cam.toCamera(g.mean);
    if (!(p.z() >= cam.near && p.z() <= cam.far))
        return std::nullopt;

    const double invZ = 1.0 / p.z();
    Eigen::Matrix<double, 2, 3> j;
    j << cam.fx * invZ, 0.0, -cam.fx * p.x() * invZ * invZ,
         0.0, cam.fy * invZ, -cam.fy * p.y() * invZ * invZ;

    const Mat3 rs = cam.rotation * quatToMatrix(g.rotation) * g.scale.asDiagonal();
    const Eigen::Matrix<double, 2, 3> jrs = j * rs;
    Mat2 cov = jrs * jrs.transpose();
    cov(0, 1) = cov(1, 0);
    cov(0, 0) += kLowPassFloor;
    cov(1, 1) += kLowPassFloor;

    ProjectedSplat out;
    out.mean = Vec2(cam.fx * p.x() * invZ + cam.cx, cam.fy * p.y() * invZ + cam.cy);
    out.cov = cov;
    out.depth = p.z();
    const double mid = 0.5 * (cov(0, 0) + cov(1, 1));
    const double det = cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(0, 1);
    const double lambdaMax = mid + std::sqrt(std::max(0.0, mid * mid - det));
    out.radius = 3.0 * std::sqrt(lambdaMax);

    if (out.mean.x() + out.radius < -0.5 || out.mean.x() - out.radius > cam.width - 0.5 ||
        out.mean.y() + out.radius < -0.5 || out.mean.y() - out.radius > cam.height - 0.5)
        return std::nullopt;
    return out;
}

Vec3 evalSh(const SphericalHarmonics &sh, const Vec3 &dir) {
    const auto &c = sh.coeffs;
    const int degree = sh.degree();
    Vec3 result = kShC0 * c[0];
    if (degree >= 1) {
        const double x = dir.x(), y = dir.y(), z = dir.z();
        result += -kShC1 * y * c[1] + kShC1 * z * c[2] - kShC1 * x * c[3];
        if (degree >= 2) {
            const double xx = x * x, yy = y * y, zz = z * z;
            const double xy = x * y, yz = y * z, xz = x * z;
            result += kShC2[0] * xy * c[4] + kShC2[1] * yz * c[5] + kShC2[2] * (2.0 * zz - xx - yy) * c[6] +
                      kShC2[3] * xz * c[7] + kShC2[4] * (xx - yy) * c[8];
            if (degree >= 3) {
                result += kShC3[0] * y * (3.0 * xx - yy) * c[9] + kShC3[1] * xy * z * c[10] +
                          kShC3[2] * y * (4.0 * zz - xx - yy) * c[11] +
                          kShC3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy) * c[12] +
                          kShC3[4] * x * (4.0 * zz - xx - yy) * c[13] + kShC3[5] * z * (xx - yy) * c[14] +
                          kShC3[6] * x * (xx - 3.0 * yy) * c[15];
            }
        }
    }
    result.array() += 0.5;
    return result.cwiseMax(0.0);
}

ImageBuffer rasterize(std::span<const SplatGaussian> gaussians, const Camera &cam, const Vec3 &background,
                      const RenderOptions &options) {
    validateCamera(cam);

    struct Candidate {
        std::uint32_t index;
        double depth;
        ScreenSplat splat;
        int x0, x1, y0, y1; // inclusive pixel bounds
    };
    std::vector<Candidate> visible;
    visible.reserve(gaussians.size());
    const Vec3 eye = cam.position();
    for (std::uint32_t i = 0; i < gaussians.size(); ++i) {
        const SplatGaussian &g = gaussians[i];
        const auto proj = project(g, cam);
        if (!proj)
            continue;
        const double det = proj->cov.determinant();
        if (!(det > 0.0))
            throw InvariantViolation("projected covariance is singular despite the low-pass floor");
        const Vec3 colour = evalSh(g.sh, (g.mean - eye).normalized());

        Candidate c;
        c.index = i;
        c.depth = proj->depth;
        c.splat = {float(proj->mean.x()),
                   float(proj->mean.y()),
                   float(proj->cov(1, 1) / det),
                   float(-proj->cov(0, 1) / det),
                   float(proj->cov(0, 0) / det),
                   float(g.opacity),
                   float(colour.x()),
                   float(colour.y()),
                   float(colour.z())};
        c.x0 = std::max(0, int(std::ceil(proj->mean.x() - proj->radius)));
        c.x1 = std::min(cam.width - 1, int(std::floor(proj->mean.x() + proj->radius)));
        c.y0 = std::max(0, int(std::ceil(proj->mean.y() - proj->radius)));
        c.y1 = std::min(cam.height - 1, int(std::floor(proj->mean.y() + proj->radius)));
        if (c.x0 > c.x1 || c.y0 > c.y1)
            continue;
        visible.push_back(c);
    }

    std::stable_sort(visible.begin(), visible.end(), [](const Candidate &a, const Candidate &b) {
        return a.depth < b.depth;
    });

    const int tilesX = (cam.width + kTile - 1) / kTile;
    const int tilesY = (cam.height + kTile - 1) / kTile;
    std::vector<ScreenSplat> ordered(visible.size());
    std::vector<std::vector<std::uint32_t>> bins(std::size_t(tilesX) * std::size_t(tilesY));
    for (std::uint32_t k = 0; k < visible.size(); ++k) {
        const Candidate &c = visible[k];
        ordered[k] = c.splat;
        for (int ty = c.y0 / kTile; ty <= c.y1 / kTile; ++ty)
            for (int tx = c.x0 / kTile; tx <= c.x1 / kTile; ++tx)
                bins[std::size_t(ty) * tilesX + tx].push_back(k);
    }

    ImageBuffer image(cam.width, cam.height);
    const float bg[3] = {float(background.x()), float(background.y()), float(background.z())};

    auto renderTile = [&](int tile) {
        const int tx = tile % tilesX, ty = tile / tilesX;
        const auto &bin = bins[std::size_t(tile)];
        const int xEnd = std::min(cam.width, (tx + 1) * kTile);
        const int yEnd = std::min(cam.height, (ty + 1) * kTile);
        for (int py = ty * kTile; py < yEnd; ++py) {
            for (int px = tx * kTile; px < xEnd; ++px) {
                float transmittance = 1.0f;
                float rgb[3] = {0.0f, 0.0f, 0.0f};
                for (std::uint32_t k : bin) {
                    const ScreenSplat &s = ordered[k];
                    const float dx = float(px) - s.x;
                    const float dy = float(py) - s.y;
                    const float q = s.conicA * dx * dx + 2.0f * s.conicB * dx * dy + s.conicC * dy * dy;
                    // Footprint truncated at 3 sigma.
                    if (q > 9.0f)
                        continue;
                    const float alpha = std::min(kMaxAlpha, s.opacity * std::exp(-0.5f * q));
                    const float weight = alpha * transmittance;
                    rgb[0] += s.r * weight;
                    rgb[1] += s.g * weight;
                    rgb[2] += s.b * weight;
                    transmittance *= 1.0f - alpha;
                    if (transmittance < kMinTransmittance)
                        break;
                }
                float *out = image.pixel(px, py);
                for (int ch = 0; ch < 3; ++ch)
                    out[ch] = std::clamp(rgb[ch] + transmittance * bg[ch], 0.0f, 1.0f);
                out[3] = std::clamp(1.0f - transmittance, 0.0f, 1.0f);
            }
        }
    };

    const int tileCount = tilesX * tilesY;
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, unsigned(tileCount));
    if (threads <= 1) {
        for (int t = 0; t < tileCount; ++t)
            renderTile(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (int t = next++; t < tileCount; t = next++)
                    renderTile(t);
            });
    }
    return image;
}

double psnr(const ImageBuffer &a, const ImageBuffer &b) {
    if (a.width != b.width || a.height != b.height)
        throw ValidationError("psnr: image dimensions differ (" + std::to_string(a.width) + "x" +
                              std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                              std::to_string(b.height) + ")");
    const std::size_t pixels = std::size_t(a.width) * std::size_t(a.height);
    if (pixels == 0)
        throw ValidationError("psnr: empty images");
    double sum = 0.0;
    for (std::size_t i = 0; i < pixels; ++i)
        for (int ch = 0; ch < 3; ++ch) {
            const double d = double(a.rgba[i * 4 + ch]) - double(b.rgba[i * 4 + ch]);
            sum += d * d;
        }
    const double mse = sum / double(pixels * 3);
    if (mse == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

std::vector<std::uint8_t> toRgba8(const ImageBuffer &img) {
    std::vector<std::uint8_t> out(img.rgba.size());
    for (std::size_t i = 0; i < img.rgba.size(); ++i)
        out[i] = static_cast<std::uint8_t>(std::lround(255.0f * std::clamp(img.rgba[i], 0.0f, 1.0f)));
    return out;
}

ImageBuffer fromRgba8(std::span<const std::uint8_t> rgba, int width, int height) {
    ImageBuffer img(width, height);
    if (rgba.size() != img.rgba.size())
        throw ValidationError("fromRgba8: buffer size does not match dimensions");
    for (std::size_t i = 0; i < rgba.size(); ++i)
        img.rgba[i] = float(rgba[i]) / 255.0f;
    return img;
}

} // namespace games
