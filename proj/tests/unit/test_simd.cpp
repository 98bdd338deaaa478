#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "mkv/kde.hpp"
#include "mkv/simd/kernels.hpp"

using namespace mkv::simd;

namespace {

std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n, double scale) {
    std::normal_distribution<double> z(0.0, scale);
    std::vector<double> v(n);
    for (auto& x : v) x = z(gen);
    return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

const kernel_table* avx2_or_skip() {
    const kernel_table* t = avx2_kernels();
    if (!t) MESSAGE("AVX2 kernels unavailable on this build or CPU; equivalence checks skipped");
    return t;
}

// Canonical order restated independently of the library's tree code.
double reference_sum(const double* x, std::size_t n, double shift) {
    if (n == 0) return 0.0;
    const std::size_t leaves = (n + sum_leaf - 1) / sum_leaf;
    if (leaves == 1) {
        double lane[4] = {0, 0, 0, 0};
        for (std::size_t i = 0; i < n; ++i) lane[i % 4] += x[i] - shift;
        return (lane[0] + lane[1]) + (lane[2] + lane[3]);
    }
    const std::size_t left = (leaves / 2) * sum_leaf;
    return reference_sum(x, left, shift) + reference_sum(x + left, n - left, shift);
}

}  // namespace

TEST_CASE("isa names") {
    CHECK(isa_name(isa::scalar) == "scalar");
    CHECK(isa_name(isa::avx2) == "avx2");
    CHECK(scalar_kernels().id == isa::scalar);
}

TEST_CASE("pairwise sum follows the canonical order") {
    std::mt19937_64 gen(1);
    for (std::size_t n = 0; n < 700; n += (n < 70 ? 1 : 13)) {
        const auto x = random_vector(gen, n, 10.0);
        const double shift = n ? x[0] : 0.0;
        CHECK(same_bits(pairwise_sum(scalar_kernels(), x.data(), n, shift), reference_sum(x.data(), n, shift)));
    }
}

TEST_CASE("pairwise sum accuracy") {
    std::mt19937_64 gen(2);
    const auto x = random_vector(gen, 100000, 1.0);
    long double ref = 0.0L;
    for (double v : x) ref += v;
    CHECK(std::abs(pairwise_sum(scalar_kernels(), x.data(), x.size()) - static_cast<double>(ref)) < 1e-11);
}

TEST_CASE("avx2 reductions are bit-identical to scalar") {
    const kernel_table* v = avx2_or_skip();
    if (!v) return;
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<std::size_t> size(0, 5000);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = trial < 70 ? static_cast<std::size_t>(trial) : size(gen);
        const auto x = random_vector(gen, n, trial % 2 ? 1e3 : 1e-3);
        const double shift = n ? x[n / 2] : 0.0;
        REQUIRE(same_bits(pairwise_sum(*v, x.data(), n, shift), pairwise_sum(scalar_kernels(), x.data(), n, shift)));
    }
}

TEST_CASE("avx2 affine step is bit-identical to scalar") {
    const kernel_table* v = avx2_or_skip();
    if (!v) return;
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(trial * 7 % 301);
        const auto x0 = random_vector(gen, n, 2.0);
        const auto z = random_vector(gen, n, 1.0);
        affine_coeffs c{u(gen), u(gen), u(gen), u(gen), u(gen), u(gen), u(gen)};
        const double h = 0.01 * (1 + trial % 5), sh = std::sqrt(h), mean = u(gen), z0 = u(gen);
        auto a = x0, b = x0;
        scalar_kernels().affine_euler(a.data(), z.data(), n, mean, z0, c, h, sh);
        v->affine_euler(b.data(), z.data(), n, mean, z0, c, h, sh);
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(same_bits(a[i], b[i]));
            const double xi = x0[i];
            const double drift = (c.drift_x * xi + c.drift_mean * mean) + c.drift_const;
            const double expect =
                ((xi + h * drift) + sh * ((c.idio_x * xi + c.idio_const) * z[i])) + sh * ((c.common_x * xi + c.common_const) * z0);
            REQUIRE(same_bits(a[i], expect));
        }
    }
}

TEST_CASE("avx2 squared-difference and max kernels are bit-identical to scalar") {
    const kernel_table* v = avx2_or_skip();
    if (!v) return;
    std::mt19937_64 gen(5);
    for (std::size_t n = 0; n < 260; n += 3) {
        const auto a = random_vector(gen, n, 1.0), b = random_vector(gen, n, 1.0);
        auto acc1 = random_vector(gen, n, 1.0);
        for (auto& x : acc1) x = std::abs(x);
        auto acc2 = acc1;
        scalar_kernels().sq_diff_accumulate(a.data(), b.data(), acc1.data(), n);
        v->sq_diff_accumulate(a.data(), b.data(), acc2.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(same_bits(acc1[i], acc2[i]));
            REQUIRE(same_bits(acc1[i], std::abs(acc2[i])));
        }

        auto s1 = random_vector(gen, n, 1.0), s2 = s1;
        scalar_kernels().max_inplace(s1.data(), a.data(), n);
        v->max_inplace(s2.data(), a.data(), n);
        for (std::size_t i = 0; i < n; ++i) REQUIRE(same_bits(s1[i], s2[i]));
    }
}

TEST_CASE("avx2 kde accumulation matches scalar to rounding") {
    const kernel_table* v = avx2_or_skip();
    if (!v) return;
    std::mt19937_64 gen(6);
    for (std::size_t n : {1u, 3u, 64u, 1000u}) {
        const auto samples = random_vector(gen, n, 0.4);
        for (std::size_t gp : {1u, 3u, 4u, 5u, 601u}) {
            mkv::uniform_grid g{-3.0, 3.0, gp < 2 ? 2 : gp};
            auto grid = g.nodes();
            grid.resize(gp);
            std::vector<double> a(gp), b(gp);
            const double inv_eta = 1.0 / 0.55;
            scalar_kernels().kde_accumulate(samples.data(), n, grid.data(), gp, inv_eta, a.data());
            v->kde_accumulate(samples.data(), n, grid.data(), gp, inv_eta, b.data());
            for (std::size_t k = 0; k < gp; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-13 * (1.0 + std::abs(a[k])) * static_cast<double>(n));
        }
    }
}

TEST_CASE("avx2 kde exponential covers the full cutoff range") {
    const kernel_table* v = avx2_or_skip();
    if (!v) return;
    // One sample at 0; grid points sweep u across [-13, 13] so both the tail
    // mask and the exp argument range are exercised.
    const double sample = 0.0;
    std::vector<double> grid;
    for (int k = -1300; k <= 1300; ++k) grid.push_back(k / 100.0);
    std::vector<double> a(grid.size()), b(grid.size());
    scalar_kernels().kde_accumulate(&sample, 1, grid.data(), grid.size(), 1.0, a.data());
    v->kde_accumulate(&sample, 1, grid.data(), grid.size(), 1.0, b.data());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (std::abs(grid[k]) > 12.0) {
            CHECK(a[k] == 0.0);
            CHECK(b[k] == 0.0);
        } else {
            REQUIRE(std::abs(a[k] - b[k]) <= 4e-16 * std::abs(a[k]) + 1e-300);
            REQUIRE(a[k] == doctest::Approx(mkv::kernel_order5(grid[k])).epsilon(1e-14));
        }
    }
}
