// Internal declarations of the scalar reference loops so SIMD translation
// units can reuse them for vector-width tails.

#ifndef AUTOCOMB_KERNELS_DETAIL_HPP
#define AUTOCOMB_KERNELS_DETAIL_HPP

#include <cstddef>
#include <cstdint>

namespace autocomb::kernels {

namespace scalar_impl {
void clamp_shift(const float* src, float* dst, std::size_t n, float lo,
                 float hi);
void mul(const float* a, const float* b, float* dst, std::size_t n);
void max2(const float* a, const float* b, float* dst, std::size_t n);
void max3(const float* a, const float* b, const float* c, float* dst,
          std::size_t n);
void conv_row(const float* padded, float* dst, std::size_t n,
              const float* taps, int ntaps);
void weighted_sum_lines(const float* const* lines, const float* w, int nlines,
                        float* dst, std::size_t n);
void stencil3(const float* a, const float* b, const float* c, float* dst,
              std::size_t n, float s);
void stencil4(const float* pp, const float* pm, const float* mp,
              const float* mm, float* dst, std::size_t n, float s);
void geo_mean_sqrt(const float* m, const float* p, float* dst, std::size_t n);
void jerman(const float* l2v, const float* l3v, float* dst, std::size_t n,
            float cap);
void threshold_zero(const float* p, const std::uint8_t* excl, float* dst,
                    std::size_t n, float tau);
void div_scalar(const float* src, float* dst, std::size_t n, float d);
float max_value(const float* src, std::size_t n);
float max_value_masked(const float* src, const std::uint8_t* mask,
                       std::size_t n);
} // namespace scalar_impl

struct KernelTable;

#if defined(__x86_64__) || defined(__i386__)
// Defined in kernels_avx2.cpp; call only when the CPU reports AVX2.
const KernelTable& avx2_table();
#endif

} // namespace autocomb::kernels

#endif
