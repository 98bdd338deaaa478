#pragma once

// Data-parallel inner loops of the engine. Every kernel exists as a scalar
// reference and, where the build and CPU allow it, an AVX2 variant; the active
// table is chosen once per process (override with MKV_SIMD=scalar|avx2).
//
// Equivalence contract between variants:
//   sum_shifted, affine_euler, sq_diff_accumulate, max_inplace: bit-identical.
//   kde_accumulate: same summation order, exp differs by a few ulp.

#include <cstddef>
#include <string_view>

namespace mkv::simd {

enum class isa { scalar, avx2 };

std::string_view isa_name(isa id) noexcept;

// Diagonal affine coefficients, frozen for one time step:
//   drift  = drift_x * x + drift_mean * mean + drift_const
//   idio   = idio_x * x + idio_const      (multiplies the particle's own draw)
//   common = common_x * x + common_const  (multiplies the shared draw)
struct affine_coeffs {
    double drift_x = 0.0;
    double drift_mean = 0.0;
    double drift_const = 0.0;
    double idio_x = 0.0;
    double idio_const = 0.0;
    double common_x = 0.0;
    double common_const = 0.0;
};

// Elements per leaf of the canonical summation tree. Inside a leaf, element i
// goes to lane i % 4, lanes accumulate in index order and fold as
// (l0 + l1) + (l2 + l3).
inline constexpr std::size_t sum_leaf = 32;

struct kernel_table {
    isa id;
    // One leaf: sum of (x[i] - shift) for n <= sum_leaf elements.
    double (*leaf_sum_shifted)(const double* x, std::size_t n, double shift);
    // x <- x + h*drift + sqrt_h*idio*z + sqrt_h*common*z0, evaluated in that order.
    void (*affine_euler)(double* x, const double* z, std::size_t n, double mean, double z0,
                         const affine_coeffs& c, double h, double sqrt_h);
    // acc[i] += (a[i] - b[i])^2
    void (*sq_diff_accumulate)(const double* a, const double* b, double* acc, std::size_t n);
    // sup[i] = max(sup[i], v[i])
    void (*max_inplace)(double* sup, const double* v, std::size_t n);
    // out[g] = sum_i K((grid[g] - samples[i]) * inv_eta), order-5 Gaussian kernel,
    // terms with |u| > 12 dropped. Samples are visited in index order.
    void (*kde_accumulate)(const double* samples, std::size_t n, const double* grid,
                           std::size_t grid_points, double inv_eta, double* out);
};

const kernel_table& scalar_kernels() noexcept;
// nullptr when AVX2 was not compiled in or the CPU lacks it.
const kernel_table* avx2_kernels() noexcept;
const kernel_table& active_kernels() noexcept;

// Pairwise (tree) sum of x[i] - shift in the canonical order; result depends only
// on the input, never on the thread schedule.
double pairwise_sum(const kernel_table& k, const double* x, std::size_t n, double shift = 0.0);
inline double pairwise_sum(const double* x, std::size_t n, double shift = 0.0) {
    return pairwise_sum(active_kernels(), x, n, shift);
}

}  // namespace mkv::simd
