// Compiled with -mavx2 only (no FMA) so every lane rounds exactly like the
// scalar reference.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernel_math.hpp"
#include "mkv/simd/kernels.hpp"

namespace mkv::simd {

namespace {

double leaf_sum_shifted(const double* x, std::size_t n, double shift) {
    const __m256d s = _mm256_set1_pd(shift);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_sub_pd(_mm256_loadu_pd(x + i), s));
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    for (std::size_t l = 0; i < n; ++i, ++l) lane[l] += x[i] - shift;
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void affine_euler(double* x, const double* z, std::size_t n, double mean, double z0,
                  const affine_coeffs& c, double h, double sqrt_h) {
    const __m256d dx = _mm256_set1_pd(c.drift_x);
    const __m256d dm = _mm256_set1_pd(c.drift_mean * mean);
    const __m256d dc = _mm256_set1_pd(c.drift_const);
    const __m256d ix = _mm256_set1_pd(c.idio_x);
    const __m256d ic = _mm256_set1_pd(c.idio_const);
    const __m256d cx = _mm256_set1_pd(c.common_x);
    const __m256d cc = _mm256_set1_pd(c.common_const);
    const __m256d vz0 = _mm256_set1_pd(z0);
    const __m256d vh = _mm256_set1_pd(h);
    const __m256d vsh = _mm256_set1_pd(sqrt_h);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        const __m256d zi = _mm256_loadu_pd(z + i);
        const __m256d drift = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, xi), dm), dc);
        const __m256d idio = _mm256_add_pd(_mm256_mul_pd(ix, xi), ic);
        const __m256d common = _mm256_add_pd(_mm256_mul_pd(cx, xi), cc);
        __m256d r = _mm256_add_pd(xi, _mm256_mul_pd(vh, drift));
        r = _mm256_add_pd(r, _mm256_mul_pd(vsh, _mm256_mul_pd(idio, zi)));
        r = _mm256_add_pd(r, _mm256_mul_pd(vsh, _mm256_mul_pd(common, vz0)));
        _mm256_storeu_pd(x + i, r);
    }
    for (; i < n; ++i) {
        const double xi = x[i];
        const double drift = (c.drift_x * xi + c.drift_mean * mean) + c.drift_const;
        const double idio = c.idio_x * xi + c.idio_const;
        const double common = c.common_x * xi + c.common_const;
        x[i] = ((xi + h * drift) + sqrt_h * (idio * z[i])) + sqrt_h * (common * z0);
    }
}

void sq_diff_accumulate(const double* a, const double* b, double* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_mul_pd(d, d)));
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        acc[i] = acc[i] + d * d;
    }
}

void max_inplace(double* sup, const double* v, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(sup + i, _mm256_max_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(sup + i)));
    for (; i < n; ++i) sup[i] = std::max(sup[i], v[i]);
}

// exp on [-72, 0]: 2^k * e^r with |r| <= ln2/2, Taylor polynomial to degree 13.
inline __m256d exp_nonpositive(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
    const __m256d ln2_hi = _mm256_set1_pd(0.693145751953125);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
    const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(k, ln2_hi));
    r = _mm256_sub_pd(r, _mm256_mul_pd(k, ln2_lo));

    static constexpr double inv_fact[14] = {
        1.0, 1.0, 1.0 / 2, 1.0 / 6, 1.0 / 24, 1.0 / 120, 1.0 / 720, 1.0 / 5040, 1.0 / 40320,
        1.0 / 362880, 1.0 / 3628800, 1.0 / 39916800, 1.0 / 479001600, 1.0 / 6227020800.0};
    __m256d p = _mm256_set1_pd(inv_fact[13]);
    for (int j = 12; j >= 0; --j) p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(inv_fact[j]));

    const __m128i k32 = _mm256_cvtpd_epi32(k);
    __m256i bits = _mm256_add_epi64(_mm256_cvtepi32_epi64(k32), _mm256_set1_epi64x(1023));
    bits = _mm256_slli_epi64(bits, 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

void kde_accumulate(const double* samples, std::size_t n, const double* grid,
                    std::size_t grid_points, double inv_eta, double* out) {
    const __m256d vinv = _mm256_set1_pd(inv_eta);
    const __m256d cutoff = _mm256_set1_pd(detail::kde_cutoff);
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d c15 = _mm256_set1_pd(15.0);
    const __m256d c10 = _mm256_set1_pd(10.0);
    const __m256d half = _mm256_set1_pd(-0.5);
    const __m256d scale = _mm256_set1_pd(detail::kde_scale);
    for (std::size_t g = 0; g < grid_points; g += 4) {
        alignas(32) double gx[4];
        for (std::size_t l = 0; l < 4; ++l) gx[l] = grid[std::min(g + l, grid_points - 1)];
        const __m256d vg = _mm256_load_pd(gx);
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t i = 0; i < n; ++i) {
            const __m256d u = _mm256_mul_pd(_mm256_sub_pd(vg, _mm256_set1_pd(samples[i])), vinv);
            const __m256d inside = _mm256_cmp_pd(_mm256_andnot_pd(sign_mask, u), cutoff, _CMP_LE_OQ);
            if (_mm256_movemask_pd(inside) == 0) continue;
            const __m256d u2 = _mm256_mul_pd(u, u);
            const __m256d poly = _mm256_add_pd(_mm256_sub_pd(c15, _mm256_mul_pd(c10, u2)), _mm256_mul_pd(u2, u2));
            const __m256d e = exp_nonpositive(_mm256_max_pd(_mm256_mul_pd(half, u2), _mm256_set1_pd(-80.0)));
            const __m256d term = _mm256_mul_pd(_mm256_mul_pd(poly, e), scale);
            acc = _mm256_add_pd(acc, _mm256_and_pd(inside, term));
        }
        alignas(32) double res[4];
        _mm256_store_pd(res, acc);
        for (std::size_t l = 0; l < 4 && g + l < grid_points; ++l) out[g + l] = res[l];
    }
}

}  // namespace

const kernel_table& avx2_table() noexcept {
    static const kernel_table table{isa::avx2, leaf_sum_shifted, affine_euler,
                                    sq_diff_accumulate, max_inplace, kde_accumulate};
    return table;
}

}  // namespace mkv::simd
