#include "cryodiff/mrc.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace cryodiff {

static_assert(std::endian::native == std::endian::little,
              "MRC I/O assumes a little-endian host");

namespace {

constexpr std::size_t kHeaderBytes = 1024;

std::int32_t rd_i32(const unsigned char* h, int word) {
    std::int32_t v;
    std::memcpy(&v, h + 4 * (word - 1), 4);
    return v;
}

float rd_f32(const unsigned char* h, int word) {
    float v;
    std::memcpy(&v, h + 4 * (word - 1), 4);
    return v;
}

void wr_i32(unsigned char* h, int word, std::int32_t v) {
    std::memcpy(h + 4 * (word - 1), &v, 4);
}

void wr_f32(unsigned char* h, int word, float v) {
    std::memcpy(h + 4 * (word - 1), &v, 4);
}

struct ParsedHeader {
    int nx, ny, nz;
    int mode;
    int mapc, mapr, maps;
    int ispg;
    std::int64_t nsymbt;
    double vx, vy, vz;  // cell / grid, 0 when the cell is unset
    Vec3 origin;
};

std::size_t mode_element_size(int mode) {
    switch (mode) {
        case 0: return 1;
        case 1: return 2;
        case 2: return 4;
        case 6: return 2;
        default: return 0;
    }
}

ParsedHeader parse_header(const unsigned char* h, const std::string& path) {
    if (std::memcmp(h + 208, "MAP ", 4) != 0)
        throw FormatError(path + ": not an MRC2014 file (missing \"MAP \" identifier)");

    // machine stamp: require little-endian data (0x44 first byte); tolerate an
    // all-zero stamp, which several writers emit
    const unsigned char* st = h + 212;
    const bool le = st[0] == 0x44;
    const bool zero = st[0] == 0 && st[1] == 0 && st[2] == 0 && st[3] == 0;
    if (!le && !zero)
        throw FormatError(path + ": unsupported machine stamp (big-endian data?)");

    ParsedHeader p{};
    p.nx = rd_i32(h, 1);
    p.ny = rd_i32(h, 2);
    p.nz = rd_i32(h, 3);
    p.mode = rd_i32(h, 4);
    if (mode_element_size(p.mode) == 0)
        throw FormatError(path + ": unsupported MODE " + std::to_string(p.mode) +
                          " (supported: 0, 1, 2, 6)");
    constexpr int kMaxDim = 1 << 20;
    if (p.nx < 1 || p.ny < 1 || p.nz < 1 || p.nx > kMaxDim || p.ny > kMaxDim || p.nz > kMaxDim)
        throw FormatError(path + ": unreasonable grid dimensions in header");
    const std::int64_t n_elem =
        static_cast<std::int64_t>(p.nx) * p.ny * p.nz;
    if (n_elem > (std::int64_t{1} << 31))
        throw FormatError(path + ": header declares more data than supported");

    int mx = rd_i32(h, 8), my = rd_i32(h, 9), mz = rd_i32(h, 10);
    if (mx < 1) mx = p.nx;
    if (my < 1) my = p.ny;
    if (mz < 1) mz = p.nz;
    p.vx = rd_f32(h, 11) / mx;
    p.vy = rd_f32(h, 12) / my;
    p.vz = rd_f32(h, 13) / mz;

    p.mapc = rd_i32(h, 17);
    p.mapr = rd_i32(h, 18);
    p.maps = rd_i32(h, 19);
    if (p.mapc == 0 && p.mapr == 0 && p.maps == 0) {
        p.mapc = 1;
        p.mapr = 2;
        p.maps = 3;
    }
    const int axis_bits = (1 << p.mapc) | (1 << p.mapr) | (1 << p.maps);
    if (axis_bits != 0b1110)
        throw FormatError(path + ": MAPC/MAPR/MAPS is not a permutation of 1/2/3");

    p.ispg = rd_i32(h, 23);
    p.nsymbt = rd_i32(h, 24);
    if (p.nsymbt < 0 || p.nsymbt > (std::int64_t{1} << 27))
        throw FormatError(path + ": unreasonable extended header size");

    p.origin = {rd_f32(h, 50), rd_f32(h, 51), rd_f32(h, 52)};
    return p;
}

std::vector<float> read_data_as_float(std::ifstream& f, const ParsedHeader& p,
                                      const std::string& path) {
    const std::size_t n = static_cast<std::size_t>(p.nx) * p.ny * p.nz;
    const std::size_t elem = mode_element_size(p.mode);
    std::vector<unsigned char> raw(n * elem);
    f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(f.gcount()) != raw.size())
        throw FormatError(path + ": data section truncated (expected " +
                          std::to_string(raw.size()) + " bytes)");

    std::vector<float> out(n);
    switch (p.mode) {
        case 0: {
            const auto* s = reinterpret_cast<const std::int8_t*>(raw.data());
            for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<float>(s[i]);
            break;
        }
        case 1: {
            for (std::size_t i = 0; i < n; ++i) {
                std::int16_t v;
                std::memcpy(&v, raw.data() + 2 * i, 2);
                out[i] = static_cast<float>(v);
            }
            break;
        }
        case 2:
            std::memcpy(out.data(), raw.data(), n * 4);
            break;
        case 6: {
            for (std::size_t i = 0; i < n; ++i) {
                std::uint16_t v;
                std::memcpy(&v, raw.data() + 2 * i, 2);
                out[i] = static_cast<float>(v);
            }
            break;
        }
    }
    return out;
}

// Rearrange file-order data (sections/rows/columns on axes maps/mapr/mapc)
// into canonical x/y/z order.
std::vector<float> normalize_axes(const std::vector<float>& file_data,
                                  const ParsedHeader& p, int dims_out[3]) {
    int dim[3];  // canonical nx, ny, nz
    dim[p.mapc - 1] = p.nx;
    dim[p.mapr - 1] = p.ny;
    dim[p.maps - 1] = p.nz;
    dims_out[0] = dim[0];
    dims_out[1] = dim[1];
    dims_out[2] = dim[2];

    if (p.mapc == 1 && p.mapr == 2 && p.maps == 3) return file_data;

    std::vector<float> out(file_data.size());
    std::size_t idx = 0;
    int coords[3];
    for (int s = 0; s < p.nz; ++s) {
        for (int r = 0; r < p.ny; ++r) {
            for (int c = 0; c < p.nx; ++c, ++idx) {
                coords[p.mapc - 1] = c;
                coords[p.mapr - 1] = r;
                coords[p.maps - 1] = s;
                const std::size_t o =
                    (static_cast<std::size_t>(coords[2]) * dim[1] + coords[1]) * dim[0] +
                    coords[0];
                out[o] = file_data[idx];
            }
        }
    }
    return out;
}

void check_isotropic(double a, double b, const std::string& path) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-12});
    if (std::abs(a - b) > 1e-4 * scale)
        throw FormatError(path + ": non-isotropic voxel size (" + std::to_string(a) +
                          " vs " + std::to_string(b) + " A); this toolkit requires isotropy");
}

struct DataStats {
    float dmin, dmax, dmean, rms;
};

DataStats compute_stats(const std::vector<float>& v) {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn, sum = 0.0, sum2 = 0.0;
    for (float x : v) {
        mn = std::min(mn, static_cast<double>(x));
        mx = std::max(mx, static_cast<double>(x));
        sum += x;
        sum2 += static_cast<double>(x) * x;
    }
    const double n = static_cast<double>(v.size());
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    return {static_cast<float>(mn), static_cast<float>(mx), static_cast<float>(mean),
            static_cast<float>(std::sqrt(var))};
}

void write_common(unsigned char* h, int nx, int ny, int nz, int mz, double cell_z,
                  double voxel, const DataStats& st, int ispg, const Vec3& origin) {
    wr_i32(h, 1, nx);
    wr_i32(h, 2, ny);
    wr_i32(h, 3, nz);
    wr_i32(h, 4, 2);  // MODE 2, float32
    wr_i32(h, 8, nx);
    wr_i32(h, 9, ny);
    wr_i32(h, 10, mz);
    wr_f32(h, 11, static_cast<float>(nx * voxel));
    wr_f32(h, 12, static_cast<float>(ny * voxel));
    wr_f32(h, 13, static_cast<float>(cell_z));
    wr_f32(h, 14, 90.0f);
    wr_f32(h, 15, 90.0f);
    wr_f32(h, 16, 90.0f);
    wr_i32(h, 17, 1);
    wr_i32(h, 18, 2);
    wr_i32(h, 19, 3);
    wr_f32(h, 20, st.dmin);
    wr_f32(h, 21, st.dmax);
    wr_f32(h, 22, st.dmean);
    wr_i32(h, 23, ispg);
    wr_i32(h, 24, 0);      // nsymbt
    wr_i32(h, 28, 20140);  // nversion
    wr_f32(h, 50, static_cast<float>(origin[0]));
    wr_f32(h, 51, static_cast<float>(origin[1]));
    wr_f32(h, 52, static_cast<float>(origin[2]));
    std::memcpy(h + 208, "MAP ", 4);
    h[212] = 0x44;
    h[213] = 0x44;
    h[214] = 0x00;
    h[215] = 0x00;
    wr_f32(h, 55, st.rms);
    wr_i32(h, 56, 1);
    static const char label[] = "cryodiff";
    std::memcpy(h + 224, label, sizeof(label) - 1);
}

void write_file(const std::string& path, const unsigned char* header,
                const std::vector<float>& data) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(path + ": cannot open for writing");
    f.write(reinterpret_cast<const char*>(header), kHeaderBytes);
    f.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * 4));
    f.flush();
    if (!f) throw IoError(path + ": write failed");
}

}  // namespace

MrcData read_mrc(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(path + ": cannot open");
    std::array<unsigned char, kHeaderBytes> h{};
    f.read(reinterpret_cast<char*>(h.data()), kHeaderBytes);
    if (static_cast<std::size_t>(f.gcount()) != kHeaderBytes)
        throw FormatError(path + ": file shorter than the 1024-byte MRC header");

    const ParsedHeader p = parse_header(h.data(), path);
    if (p.nsymbt > 0) f.seekg(p.nsymbt, std::ios::cur);
    std::vector<float> data = read_data_as_float(f, p, path);

    const bool is_volume = p.ispg != 0;
    if (is_volume) {
        int dims[3];
        data = normalize_axes(data, p, dims);
        check_isotropic(p.vx, p.vy, path);
        check_isotropic(p.vx, p.vz, path);
        DensityMap map(dims[0], dims[1], dims[2], p.vx > 0 ? p.vx : 1.0);
        map.origin = p.origin;
        map.voxels = std::move(data);
        return map;
    }

    if (!(p.mapc == 1 && p.mapr == 2 && p.maps == 3))
        throw FormatError(path + ": image stacks with permuted axes are not supported");
    check_isotropic(p.vx, p.vy, path);
    ImageStack st(p.nz, p.nx, p.ny, p.vx > 0 ? p.vx : 1.0);
    st.data = std::move(data);
    return st;
}

DensityMap read_map(const std::string& path) {
    MrcData d = read_mrc(path);
    if (auto* m = std::get_if<DensityMap>(&d)) return std::move(*m);
    throw FormatError(path + ": expected a 3D volume, found an image stack");
}

ImageStack read_stack(const std::string& path) {
    MrcData d = read_mrc(path);
    if (auto* s = std::get_if<ImageStack>(&d)) return std::move(*s);
    throw FormatError(path + ": expected an image stack, found a 3D volume");
}

void write_mrc(const DensityMap& map, const std::string& path) {
    require(map.nx > 0 && map.ny > 0 && map.nz > 0, "write_mrc: empty volume");
    require(map.voxel_size > 0, "write_mrc: voxel_size must be positive");
    require(map.voxels.size() ==
                static_cast<std::size_t>(map.nx) * map.ny * map.nz,
            "write_mrc: voxel buffer does not match shape");
    require(grid_finite(map.voxels), "write_mrc: non-finite voxel values");

    std::array<unsigned char, kHeaderBytes> h{};
    write_common(h.data(), map.nx, map.ny, map.nz, map.nz, map.nz * map.voxel_size,
                 map.voxel_size, compute_stats(map.voxels), 1, map.origin);
    write_file(path, h.data(), map.voxels);
}

void write_mrc(const ImageStack& stack, const std::string& path) {
    require(stack.count() > 0, "write_mrc: empty stack");
    require(stack.pixel_size > 0, "write_mrc: pixel_size must be positive");
    require(grid_finite(stack.data), "write_mrc: non-finite pixel values");

    std::array<unsigned char, kHeaderBytes> h{};
    write_common(h.data(), stack.nx, stack.ny, stack.count(), 1, stack.pixel_size,
                 stack.pixel_size, compute_stats(stack.data), 0, {0.0, 0.0, 0.0});
    write_file(path, h.data(), stack.data);
}

}  // namespace cryodiff
