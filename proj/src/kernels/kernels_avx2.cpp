// AVX2 kernel variants. Each lane executes the scalar reference's operation
// sequence (mul+add kept separate, no FMA), so outputs are bit-identical to
// the scalar table on finite inputs. Tails fall through to the scalar loops.

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <limits>
#include <vector>

#include "autocomb/kernels.hpp"
#include "kernels_detail.hpp"

namespace autocomb::kernels {
namespace avx2_impl {

constexpr std::size_t W = 8;

inline __m256 expand_mask_u8(const std::uint8_t* m) {
    // 8 bytes -> 8 float lanes, all-ones where byte != 0
    __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(m));
    __m256i lanes = _mm256_cvtepu8_epi32(bytes);
    __m256i nz = ~_mm256_cmpeq_epi32(lanes, _mm256_setzero_si256());
    return _mm256_castsi256_ps(nz);
}

void clamp_shift(const float* src, float* dst, std::size_t n, float lo,
                 float hi) {
    const __m256 vlo = _mm256_set1_ps(lo);
    const __m256 vhi = _mm256_set1_ps(hi);
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        __m256 v = _mm256_loadu_ps(src + i);
        v = _mm256_max_ps(v, vlo);
        v = _mm256_min_ps(v, vhi);
        _mm256_storeu_ps(dst + i, _mm256_sub_ps(v, vlo));
    }
    scalar_impl::clamp_shift(src + i, dst + i, n - i, lo, hi);
}

void mul(const float* a, const float* b, float* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + W <= n; i += W)
        _mm256_storeu_ps(dst + i, _mm256_mul_ps(_mm256_loadu_ps(a + i),
                                                _mm256_loadu_ps(b + i)));
    scalar_impl::mul(a + i, b + i, dst + i, n - i);
}

void max2(const float* a, const float* b, float* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + W <= n; i += W)
        _mm256_storeu_ps(dst + i, _mm256_max_ps(_mm256_loadu_ps(a + i),
                                                _mm256_loadu_ps(b + i)));
    scalar_impl::max2(a + i, b + i, dst + i, n - i);
}

void max3(const float* a, const float* b, const float* c, float* dst,
          std::size_t n) {
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        __m256 m = _mm256_max_ps(_mm256_loadu_ps(a + i),
                                 _mm256_loadu_ps(b + i));
        _mm256_storeu_ps(dst + i, _mm256_max_ps(m, _mm256_loadu_ps(c + i)));
    }
    scalar_impl::max3(a + i, b + i, c + i, dst + i, n - i);
}

void conv_row(const float* padded, float* dst, std::size_t n,
              const float* taps, int ntaps) {
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        __m256 acc = _mm256_setzero_ps();
        for (int t = 0; t < ntaps; ++t) {
            __m256 k = _mm256_set1_ps(taps[t]);
            __m256 v = _mm256_loadu_ps(padded + i + t);
            acc = _mm256_add_ps(acc, _mm256_mul_ps(k, v));
        }
        _mm256_storeu_ps(dst + i, acc);
    }
    scalar_impl::conv_row(padded + i, dst + i, n - i, taps, ntaps);
}

void weighted_sum_lines(const float* const* lines, const float* w, int nlines,
                        float* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        __m256 acc = _mm256_setzero_ps();
        for (int l = 0; l < nlines; ++l) {
            __m256 k = _mm256_set1_ps(w[l]);
            __m256 v = _mm256_loadu_ps(lines[l] + i);
            acc = _mm256_add_ps(acc, _mm256_mul_ps(k, v));
        }
        _mm256_storeu_ps(dst + i, acc);
    }
    if (i < n) {
        // shift line pointers for the tail
        const float* tail[64];
        const float** tp = tail;
        std::vector<const float*> big;
        if (nlines > 64) {
            big.resize(nlines);
            tp = big.data();
        }
        for (int l = 0; l < nlines; ++l) tp[l] = lines[l] + i;
        scalar_impl::weighted_sum_lines(tp, w, nlines, dst + i, n - i);
    }
}

void stencil3(const float* a, const float* b, const float* c, float* dst,
              std::size_t n, float s) {
    const __m256 two = _mm256_set1_ps(2.f);
    const __m256 vs = _mm256_set1_ps(s);
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        __m256 t = _mm256_sub_ps(_mm256_loadu_ps(a + i),
                                 _mm256_mul_ps(two, _mm256_loadu_ps(b + i)));
        t = _mm256_add_ps(t, _mm256_loadu_ps(c + i));
        _mm256_storeu_ps(dst + i, _mm256_mul_ps(t, vs));
    }
    scalar_impl::stencil3(a + i, b + i, c + i, dst + i, n - i, s);
}

void stencil4(const float* pp, const float* pm, const float* mp,
              const float* mm, float* dst, std::size_t n, float s) {
    const __m256 vs = _mm256_set1_ps(s);
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        __m256 t = _mm256_sub_ps(
            _mm256_sub_ps(_mm256_loadu_ps(pp + i), _mm256_loadu_ps(pm + i)),
            _mm256_sub_ps(_mm256_loadu_ps(mp + i), _mm256_loadu_ps(mm + i)));
        _mm256_storeu_ps(dst + i, _mm256_mul_ps(t, vs));
    }
    scalar_impl::stencil4(pp + i, pm + i, mp + i, mm + i, dst + i, n - i, s);
}

void geo_mean_sqrt(const float* m, const float* p, float* dst,
                   std::size_t n) {
    std::size_t i = 0;
    for (; i + W <= n; i += W)
        _mm256_storeu_ps(dst + i,
                         _mm256_sqrt_ps(_mm256_mul_ps(_mm256_loadu_ps(m + i),
                                                      _mm256_loadu_ps(p + i))));
    scalar_impl::geo_mean_sqrt(m + i, p + i, dst + i, n - i);
}

void jerman(const float* l2v, const float* l3v, float* dst, std::size_t n,
            float cap) {
    const __m256 vcap = _mm256_set1_ps(cap);
    const __m256 zero = _mm256_setzero_ps();
    const __m256 one = _mm256_set1_ps(1.f);
    const __m256 half = _mm256_set1_ps(0.5f);
    const __m256 three = _mm256_set1_ps(3.f);
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        __m256 l2 = _mm256_loadu_ps(l2v + i);
        __m256 l3 = _mm256_loadu_ps(l3v + i);
        // rho = l3 > cap ? l3 : (l3 > 0 ? cap : 0)
        __m256 gt_cap = _mm256_cmp_ps(l3, vcap, _CMP_GT_OQ);
        __m256 gt_zero = _mm256_cmp_ps(l3, zero, _CMP_GT_OQ);
        __m256 rho = _mm256_and_ps(gt_zero, vcap);
        rho = _mm256_blendv_ps(rho, l3, gt_cap);
        __m256 keep = _mm256_and_ps(_mm256_cmp_ps(l2, zero, _CMP_GT_OQ),
                                    _mm256_cmp_ps(rho, zero, _CMP_GT_OQ));
        __m256 is_one =
            _mm256_cmp_ps(l2, _mm256_mul_ps(half, rho), _CMP_GE_OQ);
        __m256 a = _mm256_mul_ps(l2, l2);
        __m256 b = _mm256_sub_ps(rho, l2);
        __m256 c = _mm256_mul_ps(a, b);
        __m256 t = _mm256_div_ps(three, _mm256_add_ps(l2, rho));
        __m256 t3 = _mm256_mul_ps(_mm256_mul_ps(t, t), t);
        __m256 r = _mm256_mul_ps(c, t3);
        r = _mm256_max_ps(r, zero);
        r = _mm256_min_ps(r, one);
        r = _mm256_blendv_ps(r, one, is_one);
        r = _mm256_and_ps(r, keep);
        _mm256_storeu_ps(dst + i, r);
    }
    scalar_impl::jerman(l2v + i, l3v + i, dst + i, n - i, cap);
}

void threshold_zero(const float* p, const std::uint8_t* excl, float* dst,
                    std::size_t n, float tau) {
    const __m256 vtau = _mm256_set1_ps(tau);
    std::size_t i = 0;
    if (excl) {
        for (; i + W <= n; i += W) {
            __m256 v = _mm256_loadu_ps(p + i);
            __m256 keep = _mm256_cmp_ps(v, vtau, _CMP_GE_OQ);
            keep = _mm256_andnot_ps(expand_mask_u8(excl + i), keep);
            _mm256_storeu_ps(dst + i, _mm256_and_ps(v, keep));
        }
    } else {
        for (; i + W <= n; i += W) {
            __m256 v = _mm256_loadu_ps(p + i);
            __m256 keep = _mm256_cmp_ps(v, vtau, _CMP_GE_OQ);
            _mm256_storeu_ps(dst + i, _mm256_and_ps(v, keep));
        }
    }
    scalar_impl::threshold_zero(p + i, excl ? excl + i : nullptr, dst + i,
                                n - i, tau);
}

void div_scalar(const float* src, float* dst, std::size_t n, float d) {
    const __m256 vd = _mm256_set1_ps(d);
    std::size_t i = 0;
    for (; i + W <= n; i += W)
        _mm256_storeu_ps(dst + i, _mm256_div_ps(_mm256_loadu_ps(src + i), vd));
    scalar_impl::div_scalar(src + i, dst + i, n - i, d);
}

inline float hmax(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    __m128 m = _mm_max_ps(lo, hi);
    m = _mm_max_ps(m, _mm_movehl_ps(m, m));
    m = _mm_max_ss(m, _mm_shuffle_ps(m, m, 1));
    return _mm_cvtss_f32(m);
}

float max_value(const float* src, std::size_t n) {
    const float ninf = -std::numeric_limits<float>::infinity();
    __m256 acc = _mm256_set1_ps(ninf);
    std::size_t i = 0;
    for (; i + W <= n; i += W)
        acc = _mm256_max_ps(acc, _mm256_loadu_ps(src + i));
    float m = hmax(acc);
    for (; i < n; ++i)
        if (src[i] > m) m = src[i];
    return m;
}

float max_value_masked(const float* src, const std::uint8_t* mask,
                       std::size_t n) {
    const float ninf = -std::numeric_limits<float>::infinity();
    const __m256 vninf = _mm256_set1_ps(ninf);
    __m256 acc = vninf;
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        __m256 v = _mm256_loadu_ps(src + i);
        v = _mm256_blendv_ps(vninf, v, expand_mask_u8(mask + i));
        acc = _mm256_max_ps(acc, v);
    }
    float m = hmax(acc);
    for (; i < n; ++i)
        if (mask[i] && src[i] > m) m = src[i];
    return m;
}

} // namespace avx2_impl

const KernelTable& avx2_table() {
    static const KernelTable t = {
        "avx2",
        avx2_impl::clamp_shift,
        avx2_impl::mul,
        avx2_impl::max2,
        avx2_impl::max3,
        avx2_impl::conv_row,
        avx2_impl::weighted_sum_lines,
        avx2_impl::stencil3,
        avx2_impl::stencil4,
        avx2_impl::geo_mean_sqrt,
        avx2_impl::jerman,
        avx2_impl::threshold_zero,
        avx2_impl::div_scalar,
        avx2_impl::max_value,
        avx2_impl::max_value_masked,
    };
    return t;
}

} // namespace autocomb::kernels

#endif // x86
