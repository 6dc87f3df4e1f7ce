// kernels.hpp -- voxel-parallel inner loops: scalar reference implementations
// plus AVX2 variants selected at runtime.
//
// Every SIMD variant performs the exact IEEE operation sequence of its scalar
// reference per output element, so the two paths produce bit-identical
// results (the whole library builds with -ffp-contract=off). Equivalence is
// asserted in tests/test_kernels.cpp.
//
// Kernels that need libm transcendentals (general-exponent pow, trig in the
// eigensolver) stay scalar-only and live with their callers.

#ifndef AUTOCOMB_KERNELS_HPP
#define AUTOCOMB_KERNELS_HPP

#include <cstddef>
#include <cstdint>

namespace autocomb::kernels {

struct KernelTable {
    const char* name;

    // dst[i] = min(max(src[i], lo), hi) - lo
    void (*clamp_shift)(const float* src, float* dst, std::size_t n, float lo,
                        float hi);

    // dst[i] = a[i] * b[i]
    void (*mul)(const float* a, const float* b, float* dst, std::size_t n);

    // dst[i] = max(a[i], b[i])
    void (*max2)(const float* a, const float* b, float* dst, std::size_t n);

    // dst[i] = max(a[i], b[i], c[i]) evaluated as max(max(a,b),c)
    void (*max3)(const float* a, const float* b, const float* c, float* dst,
                 std::size_t n);

    // dst[i] = sum_t taps[t] * padded[i + t], t ascending; padded holds
    // n + ntaps - 1 elements.
    void (*conv_row)(const float* padded, float* dst, std::size_t n,
                     const float* taps, int ntaps);

    // dst[i] = sum_l w[l] * lines[l][i], l ascending.
    void (*weighted_sum_lines)(const float* const* lines, const float* w,
                               int nlines, float* dst, std::size_t n);

    // dst[i] = s * ((a[i] - 2*b[i]) + c[i])  -- second central difference
    void (*stencil3)(const float* a, const float* b, const float* c,
                     float* dst, std::size_t n, float s);

    // dst[i] = s * ((pp[i] - pm[i]) - (mp[i] - mm[i]))  -- mixed difference
    void (*stencil4)(const float* pp, const float* pm, const float* mp,
                     const float* mm, float* dst, std::size_t n, float s);

    // dst[i] = sqrt(m[i] * p[i])  -- geometric-mean update at lambda = 0.5
    void (*geo_mean_sqrt)(const float* m, const float* p, float* dst,
                          std::size_t n);

    // Jerman vesselness from bright-convention eigenvalues l2, l3 with the
    // regularizer cap = tau_cut * max(l3):
    //   rho = l3 > cap ? l3 : (l3 > 0 ? cap : 0)
    //   0                      if l2 <= 0 or rho <= 0
    //   1                      if l2 >= rho/2
    //   l2^2*(rho-l2)*(3/(l2+rho))^3 clamped to [0,1] otherwise
    void (*jerman)(const float* l2, const float* l3, float* dst,
                   std::size_t n, float cap);

    // dst[i] = (p[i] >= tau && !excl[i]) ? p[i] : 0; excl may be null.
    void (*threshold_zero)(const float* p, const std::uint8_t* excl,
                           float* dst, std::size_t n, float tau);

    // dst[i] = src[i] / d
    void (*div_scalar)(const float* src, float* dst, std::size_t n, float d);

    // max over src[0..n); n >= 1, no NaNs.
    float (*max_value)(const float* src, std::size_t n);

    // max over src[i] with mask[i] != 0; returns -inf when mask is empty.
    float (*max_value_masked)(const float* src, const std::uint8_t* mask,
                              std::size_t n);
};

// Reference path, always available.
const KernelTable& scalar();

// Runtime-selected path (AVX2 when the CPU supports it). Honors
// AUTOCOMB_SIMD=scalar in the environment and force_scalar().
const KernelTable& active();

// Test hook: pin dispatch to the scalar table.
void force_scalar(bool on);

// True when active() is a SIMD table.
bool simd_active();

} // namespace autocomb::kernels

#endif
