// Scalar reference kernels. These define the numeric contract; SIMD variants
// must reproduce them bit-for-bit.

#include <cmath>
#include <limits>

#include "autocomb/kernels.hpp"

namespace autocomb::kernels {
namespace scalar_impl {

void clamp_shift(const float* src, float* dst, std::size_t n, float lo,
                 float hi) {
    for (std::size_t i = 0; i < n; ++i) {
        float v = src[i];
        if (v < lo) v = lo;
        if (v > hi) v = hi;
        dst[i] = v - lo;
    }
}

void mul(const float* a, const float* b, float* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

void max2(const float* a, const float* b, float* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] > b[i] ? a[i] : b[i];
}

void max3(const float* a, const float* b, const float* c, float* dst,
          std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        float m = a[i] > b[i] ? a[i] : b[i];
        dst[i] = m > c[i] ? m : c[i];
    }
}

void conv_row(const float* padded, float* dst, std::size_t n,
              const float* taps, int ntaps) {
    for (std::size_t i = 0; i < n; ++i) {
        float acc = 0.f;
        for (int t = 0; t < ntaps; ++t) acc += taps[t] * padded[i + t];
        dst[i] = acc;
    }
}

void weighted_sum_lines(const float* const* lines, const float* w, int nlines,
                        float* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        float acc = 0.f;
        for (int l = 0; l < nlines; ++l) acc += w[l] * lines[l][i];
        dst[i] = acc;
    }
}

void stencil3(const float* a, const float* b, const float* c, float* dst,
              std::size_t n, float s) {
    for (std::size_t i = 0; i < n; ++i) {
        float t = (a[i] - 2.f * b[i]) + c[i];
        dst[i] = t * s;
    }
}

void stencil4(const float* pp, const float* pm, const float* mp,
              const float* mm, float* dst, std::size_t n, float s) {
    for (std::size_t i = 0; i < n; ++i) {
        float t = (pp[i] - pm[i]) - (mp[i] - mm[i]);
        dst[i] = t * s;
    }
}

void geo_mean_sqrt(const float* m, const float* p, float* dst,
                   std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = std::sqrt(m[i] * p[i]);
}

void jerman(const float* l2v, const float* l3v, float* dst, std::size_t n,
            float cap) {
    for (std::size_t i = 0; i < n; ++i) {
        float l2 = l2v[i];
        float l3 = l3v[i];
        float rho = l3 > cap ? l3 : (l3 > 0.f ? cap : 0.f);
        if (!(l2 > 0.f) || !(rho > 0.f)) {
            dst[i] = 0.f;
            continue;
        }
        if (l2 >= 0.5f * rho) {
            dst[i] = 1.f;
            continue;
        }
        float a = l2 * l2;
        float b = rho - l2;
        float c = a * b;
        float t = 3.f / (l2 + rho);
        float t3 = (t * t) * t;
        float r = c * t3;
        if (r < 0.f) r = 0.f;
        if (r > 1.f) r = 1.f;
        dst[i] = r;
    }
}

void threshold_zero(const float* p, const std::uint8_t* excl, float* dst,
                    std::size_t n, float tau) {
    if (excl) {
        for (std::size_t i = 0; i < n; ++i)
            dst[i] = (p[i] >= tau && !excl[i]) ? p[i] : 0.f;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            dst[i] = p[i] >= tau ? p[i] : 0.f;
    }
}

void div_scalar(const float* src, float* dst, std::size_t n, float d) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] / d;
}

float max_value(const float* src, std::size_t n) {
    float m = -std::numeric_limits<float>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        if (src[i] > m) m = src[i];
    return m;
}

float max_value_masked(const float* src, const std::uint8_t* mask,
                       std::size_t n) {
    float m = -std::numeric_limits<float>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        if (mask[i] && src[i] > m) m = src[i];
    return m;
}

} // namespace scalar_impl

const KernelTable& scalar() {
    static const KernelTable t = {
        "scalar",
        scalar_impl::clamp_shift,
        scalar_impl::mul,
        scalar_impl::max2,
        scalar_impl::max3,
        scalar_impl::conv_row,
        scalar_impl::weighted_sum_lines,
        scalar_impl::stencil3,
        scalar_impl::stencil4,
        scalar_impl::geo_mean_sqrt,
        scalar_impl::jerman,
        scalar_impl::threshold_zero,
        scalar_impl::div_scalar,
        scalar_impl::max_value,
        scalar_impl::max_value_masked,
    };
    return t;
}

} // namespace autocomb::kernels
