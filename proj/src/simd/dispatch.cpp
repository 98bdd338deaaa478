#include <cstdlib>
#include <cstring>
#include <iostream>

#include "mkv/simd/kernels.hpp"

namespace mkv::simd {

#ifdef MKV_HAVE_AVX2
const kernel_table& avx2_table() noexcept;
#endif

std::string_view isa_name(isa id) noexcept {
    switch (id) {
        case isa::scalar: return "scalar";
        case isa::avx2: return "avx2";
    }
    return "unknown";
}

const kernel_table* avx2_kernels() noexcept {
#ifdef MKV_HAVE_AVX2
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const kernel_table& active_kernels() noexcept {
    static const kernel_table& chosen = [] () -> const kernel_table& {
        const char* req = std::getenv("MKV_SIMD");
        if (req && std::strcmp(req, "scalar") == 0) return scalar_kernels();
        if (const kernel_table* t = avx2_kernels()) return *t;
        if (req && std::strcmp(req, "avx2") == 0)
            std::clog << "mkv: AVX2 kernels unavailable, using scalar\n";
        return scalar_kernels();
    }();
    return chosen;
}

namespace {

double tree_sum(const kernel_table& k, const double* x, std::size_t leaves, std::size_t n,
                double shift) {
    if (leaves == 1) return k.leaf_sum_shifted(x, n, shift);
    const std::size_t left = leaves / 2;
    const std::size_t left_n = left * sum_leaf;
    return tree_sum(k, x, left, left_n, shift) + tree_sum(k, x + left_n, leaves - left, n - left_n, shift);
}

}  // namespace

double pairwise_sum(const kernel_table& k, const double* x, std::size_t n, double shift) {
    if (n == 0) return 0.0;
    const std::size_t leaves = (n + sum_leaf - 1) / sum_leaf;
    return tree_sum(k, x, leaves, n, shift);
}

}  // namespace mkv::simd
