#include "mkv/rng.hpp"

#include <cmath>

#include "mkv/errors.hpp"

namespace mkv {

namespace {

constexpr std::uint32_t philox_m0 = 0xD2511F53u;
constexpr std::uint32_t philox_m1 = 0xCD9E8D57u;
constexpr std::uint32_t philox_w0 = 0x9E3779B9u;
constexpr std::uint32_t philox_w1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

double poly(const double* c, int n, double x) noexcept {
    double r = c[n - 1];
    for (int i = n - 2; i >= 0; --i) r = r * x + c[i];
    return r;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(philox_m0, ctr[0], hi0, lo0);
        mulhilo(philox_m1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += philox_w0;
        key[1] += philox_w1;
    }
    return ctr;
}

double normal_quantile(double p) noexcept {
    // Coefficients of algorithm AS241 (PPND16), Wichura 1988.
    static constexpr double a[8] = {3.3871328727963666080e0, 1.3314166789178437745e+2,
                                    1.9715909503065514427e+3, 1.3731693765509461125e+4,
                                    4.5921953931549871457e+4, 6.7265770927008700853e+4,
                                    3.3430575583588128105e+4, 2.5090809287301226727e+3};
    static constexpr double b[8] = {1.0, 4.2313330701600911252e+1, 6.8718700749205790830e+2,
                                    5.3941960214247511077e+3, 2.1213794301586595867e+4,
                                    3.9307895800092710610e+4, 2.8729085735721942674e+4,
                                    5.2264952788528545610e+3};
    static constexpr double c[8] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                                    5.76949722146069140550e0, 3.64784832476320460504e0,
                                    1.27045825245236838258e0, 2.41780725177450611770e-1,
                                    2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[8] = {1.0, 2.05319162663775882187e0, 1.67638483018380384940e0,
                                    6.89767334985100004550e-1, 1.48103976427480074590e-1,
                                    1.51986665636164571966e-2, 5.47593808499534494600e-4,
                                    1.05075007164441684324e-9};
    static constexpr double e[8] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                                    1.78482653991729133580e0, 2.96560571828504891230e-1,
                                    2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                    2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[8] = {1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1,
                                    1.48753612908506148525e-2, 7.86869131145613259100e-4,
                                    1.84631831751005468180e-5, 1.42151175831644588870e-7,
                                    2.04426310338993978564e-15};

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly(a, 8, r) / poly(b, 8, r);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = poly(c, 8, r) / poly(d, 8, r);
    } else {
        r -= 5.0;
        val = poly(e, 8, r) / poly(f, 8, r);
    }
    return q < 0.0 ? -val : val;
}

double rng_stream::uniform_at(std::uint64_t k) const noexcept {
    // Two uniforms per Philox block: words (0,1) and (2,3).
    const std::uint64_t block = k >> 1;
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
        static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                              static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = philox4x32(ctr, key);
    const std::size_t w = (k & 1u) ? 2 : 0;
    const std::uint64_t bits = (static_cast<std::uint64_t>(out[w]) << 32) | out[w + 1];
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

void rng_stream::fill_normal(std::span<double> out) noexcept {
    for (double& v : out) v = next_normal();
}

std::uint64_t derive_stream_id(std::uint32_t experiment, std::uint32_t n_index,
                               std::uint32_t replication) {
    if (experiment > 0xFFFFu || n_index > 0xFFFFu)
        throw domain_error("stream id component out of range");
    return (static_cast<std::uint64_t>(experiment) << 48) |
           (static_cast<std::uint64_t>(n_index) << 32) | replication;
}

}  // namespace mkv
