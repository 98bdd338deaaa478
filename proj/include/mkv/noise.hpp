#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mkv/rng.hpp"

namespace mkv {

// Standard-normal draws for one step: an N x q idiosyncratic block and a single
// q-vector of common draws shared by every particle.
class noise_increments {
public:
    noise_increments(std::size_t particles, std::size_t dim_noise);

    std::size_t particles() const noexcept { return particles_; }
    std::size_t dim_noise() const noexcept { return dim_noise_; }

    double idio(std::size_t i, std::size_t j) const { return idio_[j * particles_ + i]; }
    double& idio(std::size_t i, std::size_t j) { return idio_[j * particles_ + i]; }
    // Column j of the idiosyncratic block (all particles, noise component j).
    std::span<const double> idio_column(std::size_t j) const { return {idio_.data() + j * particles_, particles_}; }
    std::span<double> idio_column(std::size_t j) { return {idio_.data() + j * particles_, particles_}; }

    std::span<const double> common() const noexcept { return common_; }
    std::span<double> common() noexcept { return common_; }

private:
    std::size_t particles_;
    std::size_t dim_noise_;
    std::vector<double> idio_;
    std::vector<double> common_;
};

// Consumes N*q + q draws: idiosyncratic draws particle by particle (component
// index fastest), then the common vector.
noise_increments sample_increments(rng_stream& stream, std::size_t particles, std::size_t dim_noise);

}  // namespace mkv
