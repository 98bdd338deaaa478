#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace mkv {

// Philox4x32-10 block: a bijection of the 128-bit counter under a 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

// Inverse of the standard normal CDF (Wichura AS241, ~1e-16 relative accuracy).
// Defined on the open interval (0, 1).
double normal_quantile(double u) noexcept;

// Counter-based stream. Draw k of stream (seed, id) is a pure function of
// (seed, id, k), so any block of draws can be regenerated without replaying the
// stream. Never share one instance between threads; derive another id instead.
class rng_stream {
public:
    rng_stream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : seed_(seed), stream_id_(stream_id) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    std::uint64_t counter() const noexcept { return counter_; }

    // Uniform on the open interval (0, 1) with 53 random bits.
    double next_uniform() noexcept { return uniform_at(counter_++); }
    double next_normal() noexcept { return normal_quantile(next_uniform()); }
    void fill_normal(std::span<double> out) noexcept;

    // Moves the counter forward without computing the skipped draws.
    void skip(std::uint64_t draws) noexcept { counter_ += draws; }

    double uniform_at(std::uint64_t k) const noexcept;
    double normal_at(std::uint64_t k) const noexcept { return normal_quantile(uniform_at(k)); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_ = 0;
};

// Injective packing of (experiment tag, N index, replication) into a stream id.
// Tags use 16 bits, N indices 16 bits, replications 32 bits.
std::uint64_t derive_stream_id(std::uint32_t experiment, std::uint32_t n_index,
                               std::uint32_t replication);

}  // namespace mkv
