#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mkv/models/rk4.hpp"

namespace mkv::models {

// Piecewise-linear function of time through (t, value) knots, held constant
// outside the knot range.
class schedule {
public:
    static schedule constant(double value);
    // Knots must be strictly increasing in t.
    static schedule from_knots(std::vector<double> t, std::vector<double> values);
    // Two-column CSV "t,value"; one optional non-numeric header line, '#' comments.
    static schedule from_csv(const std::string& path);
    // Component of an ODE solution path (either integration direction).
    static schedule from_ode_path(const std::vector<ode_point>& path, std::size_t component);

    double operator()(double t) const;
    bool is_constant() const noexcept { return t_.size() == 1; }
    const std::vector<double>& knots() const noexcept { return t_; }
    const std::vector<double>& values() const noexcept { return v_; }

private:
    std::vector<double> t_;
    std::vector<double> v_;
};

}  // namespace mkv::models
