#include <atomic>
#include <cstdlib>
#include <cstring>

#include "autocomb/kernels.hpp"
#include "kernels_detail.hpp"

namespace autocomb::kernels {

namespace {

std::atomic<bool> g_force_scalar{false};

bool env_forces_scalar() {
    const char* v = std::getenv("AUTOCOMB_SIMD");
    return v && std::strcmp(v, "scalar") == 0;
}

const KernelTable* detect() {
    if (env_forces_scalar()) return &scalar();
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2")) return &avx2_table();
#endif
    return &scalar();
}

const KernelTable* detected() {
    static const KernelTable* t = detect();
    return t;
}

} // namespace

void force_scalar(bool on) { g_force_scalar.store(on); }

const KernelTable& active() {
    if (g_force_scalar.load()) return scalar();
    return *detected();
}

bool simd_active() { return &active() != &scalar(); }

} // namespace autocomb::kernels
