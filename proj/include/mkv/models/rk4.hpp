#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mkv::models {

struct ode_system {
    std::size_t dimension = 1;
    std::function<std::vector<double>(double t, std::span<const double> y)> rhs;
};

struct ode_point {
    double t;
    std::vector<double> y;
};

// Classical fixed-step RK4 from t0 to t1 in `steps` steps. t1 < t0 integrates
// backwards (terminal-value problems). Returns steps + 1 points including both
// ends; a non-finite rhs raises numerical_error carrying the offending t.
std::vector<ode_point> rk4_solve(const ode_system& system, double t0, std::span<const double> y0,
                                 double t1, std::size_t steps);

}  // namespace mkv::models
