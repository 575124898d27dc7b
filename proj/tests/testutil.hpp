#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cryodiff/grids.hpp"
#include "cryodiff/rng.hpp"

#ifndef CRYODIFF_TEST_DATA_DIR
#define CRYODIFF_TEST_DATA_DIR "tests/data"
#endif

namespace testutil {

inline std::string fixture(const std::string& name) {
    return std::string(CRYODIFF_TEST_DATA_DIR) + "/" + name;
}

// Scratch directory under the test working directory, wiped per call site.
inline std::string scratch_dir(const std::string& tag) {
    auto dir = std::filesystem::path("scratch_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

inline std::vector<unsigned char> read_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::string& path, const std::vector<unsigned char>& b) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

// Portable generator mirrored in tests/data/gen_ssim_anchors.py; the frozen
// scikit-image anchor values depend on reproducing this stream bit-exactly.
class XorShift64Star {
public:
    explicit XorShift64Star(std::uint64_t seed) : x_(seed) {}
    std::uint64_t next_u64() {
        x_ ^= x_ >> 12;
        x_ ^= x_ << 25;
        x_ ^= x_ >> 27;
        return x_ * 2685821657736338717ULL;
    }
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t x_;
};

inline cryodiff::Image2D random_image(int n, std::uint64_t seed, double lo = 0.0,
                                      double hi = 1.0) {
    cryodiff::Rng rng(seed);
    cryodiff::Image2D im(n, n);
    for (auto& p : im.pix) p = static_cast<float>(rng.uniform(lo, hi));
    return im;
}

inline cryodiff::DensityMap random_map(int n, std::uint64_t seed) {
    cryodiff::Rng rng(seed);
    cryodiff::DensityMap m(n, n, n, 1.0);
    for (auto& v : m.voxels) v = static_cast<float>(rng.normal());
    return m;
}

// Smooth sum-of-Gaussian-blobs volume; well inside the box so projections at
// any pose keep the full mass in view.
inline cryodiff::DensityMap blob_phantom(int n, std::uint64_t seed, int n_blobs = 6,
                                         double voxel_size = 1.0) {
    cryodiff::Rng rng(seed);
    cryodiff::DensityMap m(n, n, n, voxel_size);
    const double c = (n - 1) / 2.0;
    struct Blob {
        double x, y, z, s, a;
    };
    std::vector<Blob> blobs;
    for (int b = 0; b < n_blobs; ++b) {
        blobs.push_back({c + rng.uniform(-0.18, 0.18) * n, c + rng.uniform(-0.18, 0.18) * n,
                         c + rng.uniform(-0.18, 0.18) * n, rng.uniform(0.04, 0.09) * n,
                         rng.uniform(0.5, 1.5)});
    }
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                double v = 0.0;
                for (const auto& b : blobs) {
                    const double dx = x - b.x, dy = y - b.y, dz = z - b.z;
                    v += b.a * std::exp(-(dx * dx + dy * dy + dz * dz) / (2 * b.s * b.s));
                }
                m.at(x, y, z) = static_cast<float>(v);
            }
    return m;
}

}  // namespace testutil
