#include "mkv/models/rk4.hpp"

#include <cmath>
#include <string>

#include "mkv/errors.hpp"

namespace mkv::models {

namespace {

std::vector<double> eval(const ode_system& sys, double t, std::span<const double> y) {
    auto f = sys.rhs(t, y);
    if (f.size() != sys.dimension) throw shape_error("ODE rhs returned the wrong dimension");
    for (double v : f)
        if (!std::isfinite(v)) throw numerical_error("non-finite ODE rhs at t=" + std::to_string(t), t);
    return f;
}

}  // namespace

std::vector<ode_point> rk4_solve(const ode_system& sys, double t0, std::span<const double> y0,
                                 double t1, std::size_t steps) {
    if (!sys.rhs) throw domain_error("ODE system without rhs");
    if (y0.size() != sys.dimension) throw shape_error("initial value has the wrong dimension");
    if (steps == 0) throw domain_error("rk4_solve needs at least one step");
    if (!(t1 != t0) || !std::isfinite(t0) || !std::isfinite(t1))
        throw domain_error("rk4_solve needs distinct finite end points");

    const std::size_t n = sys.dimension;
    const double h = (t1 - t0) / static_cast<double>(steps);
    std::vector<ode_point> path;
    path.reserve(steps + 1);
    path.push_back({t0, std::vector<double>(y0.begin(), y0.end())});
    std::vector<double> tmp(n);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = t0 + h * static_cast<double>(s);
        const std::vector<double>& y = path.back().y;
        const auto k1 = eval(sys, t, y);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        const auto k2 = eval(sys, t + 0.5 * h, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        const auto k3 = eval(sys, t + 0.5 * h, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        const auto k4 = eval(sys, t + h, tmp);
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i)
            next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        const double t_next = s + 1 == steps ? t1 : t0 + h * static_cast<double>(s + 1);
        path.push_back({t_next, std::move(next)});
    }
    return path;
}

}  // namespace mkv::models
