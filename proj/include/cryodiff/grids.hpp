#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cryodiff/errors.hpp"

namespace cryodiff {

// 3x3 rotation matrix, row-major.
using Mat3 = std::array<double, 9>;
using Vec3 = std::array<double, 3>;

inline Vec3 mat3_apply(const Mat3& m, const Vec3& v) {
    return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
            m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
            m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
}

// Unit quaternion (w, x, y, z). q and -q describe the same rotation.
struct Orientation {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    void validate() const {
        if (std::abs(norm() - 1.0) > 1e-9)
            throw PreconditionError("orientation quaternion is not unit length");
    }

    // Rotation matrix taking camera-frame coordinates to volume-frame
    // coordinates; columns are the rotated basis vectors.
    Mat3 rotation() const {
        const double xx = x * x, yy = y * y, zz = z * z;
        const double xy = x * y, xz = x * z, yz = y * z;
        const double wx = w * x, wy = w * y, wz = w * z;
        return {1 - 2 * (yy + zz), 2 * (xy - wz), 2 * (xz + wy),
                2 * (xy + wz), 1 - 2 * (xx + zz), 2 * (yz - wx),
                2 * (xz - wy), 2 * (yz + wx), 1 - 2 * (xx + yy)};
    }
};

// Per-image record carried through simulation, training and reconstruction.
// Fields may be absent for real (non-simulated) data.
struct ImageMeta {
    std::optional<Orientation> orientation;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> source;
    // z-score normalization applied at simulation time: stored = (raw - mean)/std
    std::optional<double> norm_mean;
    std::optional<double> norm_std;
    int split = 0;  // 0 train, 1 val, 2 test
};

struct Image2D {
    int nx = 0, ny = 0;
    double pixel_size = 1.0;  // Angstrom per pixel
    std::vector<float> pix;   // row-major, x fastest

    Image2D() = default;
    Image2D(int nx_, int ny_, double ps = 1.0)
        : nx(nx_), ny(ny_), pixel_size(ps), pix(static_cast<std::size_t>(nx_) * ny_, 0.0f) {}

    float& at(int ix, int iy) { return pix[static_cast<std::size_t>(iy) * nx + ix]; }
    float at(int ix, int iy) const { return pix[static_cast<std::size_t>(iy) * nx + ix]; }
    std::size_t size() const { return pix.size(); }
};

struct ImageStack {
    int nx = 0, ny = 0;
    double pixel_size = 1.0;
    std::vector<float> data;          // n * ny * nx, image-major
    std::vector<ImageMeta> metadata;  // one per image (may be default records)

    ImageStack() = default;
    ImageStack(int n, int nx_, int ny_, double ps = 1.0)
        : nx(nx_), ny(ny_), pixel_size(ps),
          data(static_cast<std::size_t>(n) * nx_ * ny_, 0.0f), metadata(n) {}

    int count() const {
        return nx == 0 || ny == 0 ? 0
                                  : static_cast<int>(data.size() / (static_cast<std::size_t>(nx) * ny));
    }

    float* image_ptr(int i) { return data.data() + static_cast<std::size_t>(i) * nx * ny; }
    const float* image_ptr(int i) const {
        return data.data() + static_cast<std::size_t>(i) * nx * ny;
    }

    Image2D image(int i) const {
        Image2D im(nx, ny, pixel_size);
        const float* p = image_ptr(i);
        std::copy(p, p + im.size(), im.pix.begin());
        return im;
    }

    void set_image(int i, const Image2D& im) {
        if (im.nx != nx || im.ny != ny)
            throw PreconditionError("stack/image shape mismatch");
        std::copy(im.pix.begin(), im.pix.end(), image_ptr(i));
    }

    void append(const Image2D& im, ImageMeta meta = {}) {
        if (count() == 0 && data.empty()) {
            nx = im.nx;
            ny = im.ny;
            pixel_size = im.pixel_size;
        }
        if (im.nx != nx || im.ny != ny)
            throw PreconditionError("stack/image shape mismatch");
        data.insert(data.end(), im.pix.begin(), im.pix.end());
        metadata.push_back(std::move(meta));
    }
};

struct DensityMap {
    int nx = 0, ny = 0, nz = 0;
    double voxel_size = 1.0;          // Angstrom, isotropic
    Vec3 origin = {0.0, 0.0, 0.0};    // Angstrom
    std::vector<float> voxels;        // z-major, x fastest

    DensityMap() = default;
    DensityMap(int nx_, int ny_, int nz_, double vs = 1.0)
        : nx(nx_), ny(ny_), nz(nz_), voxel_size(vs),
          voxels(static_cast<std::size_t>(nx_) * ny_ * nz_, 0.0f) {}

    float& at(int ix, int iy, int iz) {
        return voxels[(static_cast<std::size_t>(iz) * ny + iy) * nx + ix];
    }
    float at(int ix, int iy, int iz) const {
        return voxels[(static_cast<std::size_t>(iz) * ny + iy) * nx + ix];
    }
    bool cubic() const { return nx == ny && ny == nz; }
};

// Basic statistics, accumulated in double.
template <typename Container>
double grid_mean(const Container& v) {
    double s = 0.0;
    for (const auto x : v) s += static_cast<double>(x);
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

template <typename Container>
double grid_variance(const Container& v) {
    if (v.empty()) return 0.0;
    const double m = grid_mean(v);
    double s = 0.0;
    for (const auto x : v) {
        const double d = static_cast<double>(x) - m;
        s += d * d;
    }
    return s / static_cast<double>(v.size());
}

template <typename Container>
bool grid_finite(const Container& v) {
    for (const auto x : v)
        if (!std::isfinite(static_cast<double>(x))) return false;
    return true;
}

}  // namespace cryodiff
