#include "circledyn/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace circledyn::kernels {

#ifdef CIRCLEDYN_HAVE_SIMD
const KernelTable* simd_table_impl();  // defined in kernels_simd.cpp
#endif

namespace {

bool cpu_has_simd() {
#if !defined(CIRCLEDYN_HAVE_SIMD)
    return false;
#elif defined(__aarch64__) || defined(_M_ARM64)
    return true;  // NEON is baseline on AArch64
#else
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#endif
}

const KernelTable* pick() {
    const char* env = std::getenv("CIRCLEDYN_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
#ifdef CIRCLEDYN_HAVE_SIMD
    if (cpu_has_simd()) return simd_table_impl();
#endif
    return &scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
    static const KernelTable* table = pick();
    return *table;
}

const KernelTable* simd_kernels_if_available() {
#ifdef CIRCLEDYN_HAVE_SIMD
    if (cpu_has_simd()) return simd_table_impl();
#endif
    return nullptr;
}

std::string active_kernel_name() { return active_kernels().name; }

}  // namespace circledyn::kernels
