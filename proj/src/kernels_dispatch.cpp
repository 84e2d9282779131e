#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"

namespace g2kit::kernels {

bool cpu_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const KernelTable* avx2() { return cpu_has_avx2() ? &detail::avx2_table() : nullptr; }

const KernelTable& active() {
    static const KernelTable* chosen = [] {
        const char* env = std::getenv("G2KIT_KERNELS");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar();
        const KernelTable* v = avx2();
        return v ? v : &scalar();
    }();
    return *chosen;
}

}  // namespace g2kit::kernels
