#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mkv/empirical_measure.hpp"
#include "mkv/model.hpp"
#include "mkv/rng.hpp"
#include "mkv/time_grid.hpp"

namespace mkv {

enum class record_mode { full_trajectories, terminal_only, running_sup_error };

// Draws the N initial particles; may consume from the stream.
using initial_sampler = std::function<empirical_measure(rng_stream&, std::size_t count, std::size_t dim)>;

// All particles at x0 (consumes no draws).
initial_sampler point_mass(std::vector<double> x0);

struct sim_config {
    model_spec model;
    time_grid grid{1.0, 1};
    std::size_t particles = 1;
    std::uint64_t seed = 0;
    std::size_t replications = 1;
    record_mode record = record_mode::terminal_only;
    // Defaults to the point mass at the origin.
    initial_sampler initial;

    void validate() const;
    empirical_measure sample_initial(rng_stream& stream) const;
};

}  // namespace mkv
