#pragma once

#include <cstddef>
#include <vector>

namespace mkv {

// Uniform grid t_m = m T / M, m = 0..M.
class time_grid {
public:
    time_grid(double horizon, std::size_t steps);

    // Zero-step grid with the single node t_0 = 0; simulating on it returns the
    // initial cloud. make_time_grid never produces it.
    static time_grid empty();

    double horizon() const noexcept { return horizon_; }
    std::size_t steps() const noexcept { return steps_; }
    double step() const noexcept { return step_; }
    double sqrt_step() const noexcept { return sqrt_step_; }
    double node(std::size_t m) const { return nodes_.at(m); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }

private:
    time_grid() = default;

    double horizon_;
    std::size_t steps_;
    double step_;
    double sqrt_step_;
    std::vector<double> nodes_;
};

// Throws domain_error for T <= 0 (or non-finite) and M == 0.
time_grid make_time_grid(double horizon, std::size_t steps);

}  // namespace mkv
