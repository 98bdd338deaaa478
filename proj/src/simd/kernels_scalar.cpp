#include <algorithm>
#include <cmath>

#include "kernel_math.hpp"
#include "mkv/simd/kernels.hpp"

namespace mkv::simd {

namespace {

double leaf_sum_shifted(const double* x, std::size_t n, double shift) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) lane[i & 3u] += x[i] - shift;
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void affine_euler(double* x, const double* z, std::size_t n, double mean, double z0,
                  const affine_coeffs& c, double h, double sqrt_h) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double drift = (c.drift_x * xi + c.drift_mean * mean) + c.drift_const;
        const double idio = c.idio_x * xi + c.idio_const;
        const double common = c.common_x * xi + c.common_const;
        x[i] = ((xi + h * drift) + sqrt_h * (idio * z[i])) + sqrt_h * (common * z0);
    }
}

void sq_diff_accumulate(const double* a, const double* b, double* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc[i] = acc[i] + d * d;
    }
}

void max_inplace(double* sup, const double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) sup[i] = std::max(sup[i], v[i]);
}

void kde_accumulate(const double* samples, std::size_t n, const double* grid,
                    std::size_t grid_points, double inv_eta, double* out) {
    for (std::size_t g = 0; g < grid_points; ++g) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (grid[g] - samples[i]) * inv_eta;
            if (std::fabs(u) > detail::kde_cutoff) continue;
            const double u2 = u * u;
            const double poly = (15.0 - 10.0 * u2) + u2 * u2;
            acc += poly * std::exp(-0.5 * u2) * detail::kde_scale;
        }
        out[g] = acc;
    }
}

}  // namespace

const kernel_table& scalar_kernels() noexcept {
    static const kernel_table table{isa::scalar, leaf_sum_shifted, affine_euler,
                                    sq_diff_accumulate, max_inplace, kde_accumulate};
    return table;
}

}  // namespace mkv::simd
