#include "autocomb/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "autocomb/kernels.hpp"
#include "autocomb/parallel.hpp"

namespace autocomb {

Volume3D clip_rescale(const Volume3D& vol, float lo, float hi) {
    if (!(lo < hi))
        throw precondition_error("clip_rescale requires lo < hi");
    for (float v : vol.data)
        if (!std::isfinite(v))
            throw precondition_error(
                "clip_rescale input contains non-finite voxels");
    Volume3D out = vol.like();
    const auto& k = kernels::active();
    parallel_for(vol.size(), [&](std::size_t b, std::size_t e) {
        k.clamp_shift(vol.data.data() + b, out.data.data() + b, e - b, lo, hi);
    });
    return out;
}

namespace {

// Normalized 1D Gaussian taps for a voxel-unit sigma, truncated at 4 sigma.
std::vector<float> gaussian_taps(double sigma_vox) {
    int r = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_vox)));
    std::vector<double> w(2 * r + 1);
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        double v = std::exp(-0.5 * (i * i) / (sigma_vox * sigma_vox));
        w[i + r] = v;
        sum += v;
    }
    std::vector<float> taps(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        taps[i] = static_cast<float>(w[i] / sum);
    return taps;
}

} // namespace

namespace detail {

// 1D convolution along the x axis, replicate boundary; rows are contiguous.
void conv_axis_x(const Volume3D& src, Volume3D& dst,
                 const std::vector<float>& taps) {
    const int nx = src.dims[0], ny = src.dims[1], nz = src.dims[2];
    const int r = (static_cast<int>(taps.size()) - 1) / 2;
    const auto& k = kernels::active();
    parallel_for(static_cast<std::size_t>(ny) * nz,
                 [&](std::size_t b, std::size_t e) {
        std::vector<float> padded(nx + 2 * r);
        for (std::size_t row = b; row < e; ++row) {
            const float* s = src.data.data() + row * nx;
            float* d = dst.data.data() + row * nx;
            for (int i = 0; i < r; ++i) padded[i] = s[0];
            std::copy(s, s + nx, padded.begin() + r);
            for (int i = 0; i < r; ++i) padded[nx + r + i] = s[nx - 1];
            k.conv_row(padded.data(), d, nx, taps.data(),
                       static_cast<int>(taps.size()));
        }
    });
}

// Convolution along y or z: each output row is a tap-weighted sum of
// clamped-index source rows, which keeps the x direction contiguous.
void conv_axis_yz(const Volume3D& src, Volume3D& dst,
                  const std::vector<float>& taps, int axis) {
    const int nx = src.dims[0], ny = src.dims[1], nz = src.dims[2];
    const int r = (static_cast<int>(taps.size()) - 1) / 2;
    const int ntaps = static_cast<int>(taps.size());
    const int extent = axis == 1 ? ny : nz;
    const auto& k = kernels::active();
    parallel_for(static_cast<std::size_t>(ny) * nz,
                 [&](std::size_t b, std::size_t e) {
        std::vector<const float*> lines(ntaps);
        for (std::size_t row = b; row < e; ++row) {
            int y = static_cast<int>(row % ny);
            int z = static_cast<int>(row / ny);
            int pos = axis == 1 ? y : z;
            for (int t = 0; t < ntaps; ++t) {
                int q = std::clamp(pos + t - r, 0, extent - 1);
                std::size_t idx =
                    axis == 1 ? src.index(0, q, z) : src.index(0, y, q);
                lines[t] = src.data.data() + idx;
            }
            k.weighted_sum_lines(lines.data(), taps.data(), ntaps,
                                 dst.data.data() + row * nx, nx);
        }
    });
}

} // namespace detail

Volume3D gaussian_smooth(const Volume3D& vol, double sigma_mm) {
    if (!(sigma_mm > 0.0))
        throw precondition_error("gaussian_smooth requires sigma_mm > 0");
    Volume3D a = vol.like();
    Volume3D b = vol.like();
    detail::conv_axis_x(vol, a, gaussian_taps(sigma_mm / vol.spacing[0]));
    detail::conv_axis_yz(a, b, gaussian_taps(sigma_mm / vol.spacing[1]), 1);
    detail::conv_axis_yz(b, a, gaussian_taps(sigma_mm / vol.spacing[2]), 2);
    return a;
}

double percentile_nonzero(const Volume3D& vol, double p) {
    if (!(p > 0.0 && p < 100.0))
        throw precondition_error("percentile must lie in (0,100)");
    std::vector<float> pos;
    pos.reserve(vol.size() / 4);
    for (float v : vol.data)
        if (v > 0.f) pos.push_back(v);
    if (pos.empty())
        throw insufficient_data_error(
            "percentile_nonzero: no nonzero voxels");
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(p / 100.0 * static_cast<double>(pos.size())));
    rank = std::clamp<std::size_t>(rank, 1, pos.size());
    std::nth_element(pos.begin(), pos.begin() + (rank - 1), pos.end());
    return pos[rank - 1];
}

double percentile_nonzero(const ProbabilityMap& map, double p) {
    return percentile_nonzero(map.vol, p);
}

namespace {

constexpr double kEdtInf = 1e30;

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher), sample pitch w.
void edt_1d(const double* f, double* d, int n, double w, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -kEdtInf;
    z[1] = kEdtInf;
    for (int q = 1; q < n; ++q) {
        double qw = q * w;
        double s;
        while (true) {
            int p = v[k];
            double pw = p * w;
            s = ((f[q] + qw * qw) - (f[p] + pw * pw)) / (2.0 * w * (q - p));
            if (s <= z[k] && k > 0) {
                --k;
                continue;
            }
            break;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kEdtInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        double qw = q * w;
        while (z[k + 1] < qw) ++k;
        double diff = qw - v[k] * w;
        d[q] = diff * diff + f[v[k]];
    }
}

} // namespace

std::vector<double> squared_edt(const std::vector<std::uint8_t>& seeds,
                                const std::array<int, 3>& dims,
                                const std::array<double, 3>& spacing) {
    const int nx = dims[0], ny = dims[1], nz = dims[2];
    const std::size_t n = static_cast<std::size_t>(nx) * ny * nz;
    if (seeds.size() != n)
        throw precondition_error("squared_edt: seed size mismatch");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = seeds[i] ? 0.0 : kEdtInf;

    auto idx = [&](int x, int y, int z) {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(nx) *
                   (static_cast<std::size_t>(y) +
                    static_cast<std::size_t>(ny) * z);
    };

    int maxdim = std::max({nx, ny, nz});
    std::vector<double> f(maxdim), g(maxdim), z(maxdim + 1);
    std::vector<int> v(maxdim);

    // x lines
    for (int zz = 0; zz < nz; ++zz)
        for (int y = 0; y < ny; ++y) {
            double* line = d.data() + idx(0, y, zz);
            edt_1d(line, g.data(), nx, spacing[0], v.data(), z.data());
            std::copy(g.begin(), g.begin() + nx, line);
        }
    // y lines
    for (int zz = 0; zz < nz; ++zz)
        for (int x = 0; x < nx; ++x) {
            for (int y = 0; y < ny; ++y) f[y] = d[idx(x, y, zz)];
            edt_1d(f.data(), g.data(), ny, spacing[1], v.data(), z.data());
            for (int y = 0; y < ny; ++y) d[idx(x, y, zz)] = g[y];
        }
    // z lines
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
            for (int zz = 0; zz < nz; ++zz) f[zz] = d[idx(x, y, zz)];
            edt_1d(f.data(), g.data(), nz, spacing[2], v.data(), z.data());
            for (int zz = 0; zz < nz; ++zz) d[idx(x, y, zz)] = g[zz];
        }
    return d;
}

} // namespace autocomb
