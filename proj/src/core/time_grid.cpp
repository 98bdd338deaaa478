#include "mkv/time_grid.hpp"

#include <cmath>
#include <string>

#include "mkv/errors.hpp"

namespace mkv {

time_grid::time_grid(double horizon, std::size_t steps)
    : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw domain_error("time grid horizon must be positive, got " + std::to_string(horizon));
    if (steps == 0) throw domain_error("time grid needs at least one step");
    step_ = horizon / static_cast<double>(steps);
    sqrt_step_ = std::sqrt(step_);
    nodes_.resize(steps + 1);
    for (std::size_t m = 0; m < steps; ++m)
        nodes_[m] = horizon * static_cast<double>(m) / static_cast<double>(steps);
    nodes_[steps] = horizon;
}

time_grid time_grid::empty() {
    time_grid g;
    g.horizon_ = 0.0;
    g.steps_ = 0;
    g.step_ = 0.0;
    g.sqrt_step_ = 0.0;
    g.nodes_ = {0.0};
    return g;
}

time_grid make_time_grid(double horizon, std::size_t steps) { return time_grid(horizon, steps); }

}  // namespace mkv
