#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mkv/model.hpp"

namespace mkv::models {

// Measure-free model whose strong solution is an explicit function of the
// terminal Brownian values, for time-discretisation probes.
struct probe_model {
    model_spec model;
    std::vector<double> x0;
    // X_t given x0, W_t (q entries) and W0_t (q entries).
    std::function<std::vector<double>(double t, std::span<const double> x0, std::span<const double> w,
                                      std::span<const double> w0)>
        exact;
    // Euler is exact for this model; the slope fit is meaningless.
    bool euler_exact = false;
};

// dX = vol X dW, X_t = x0 exp(vol W_t - vol^2 t / 2).
probe_model gbm_probe(double x0 = 1.0, double vol = 1.0);
// dX = -rate X dt, X_t = x0 e^{-rate t}.
probe_model linear_ode_probe(double x0 = 1.0, double rate = 1.0);
// dX = drift dt + vol dW, X_t = x0 + drift t + vol W_t.
probe_model constant_probe(double x0 = 0.0, double drift = 1.0, double vol = 1.0);

}  // namespace mkv::models
