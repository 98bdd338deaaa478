#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mkv/model.hpp"
#include "mkv/models/schedule.hpp"
#include "mkv/time_grid.hpp"

namespace mkv::models {

// Transaction-rate rule of a bank and the population average it induces.
struct control_policy {
    std::function<double(double t, double x, double market_mean)> per_bank;
    std::function<double(double t)> population;

    // Set for policies of the form u = c1(t) + c2(t) (m - x).
    struct affine_form {
        schedule c1;
        schedule c2;
    };
    std::optional<affine_form> affine;
};

// u^i = c1(t) + c2(t) (m - x^i); its cloud average is c1(t) exactly.
control_policy affine_control(schedule c1 = schedule::constant(0.0), schedule c2 = schedule::constant(1.0));

// Policy with a fixed rate for every bank (population rate equals it).
control_policy constant_control(double rate);

// dX^i = (a (m - X^i) + u^i + b(t)) dt + sigma sqrt(1 - rho^2) dW^i + sigma rho dW0.
struct interbank_params {
    double mean_reversion_a = 10.0;
    std::function<double(double)> liquidity_b = [](double) { return 1.0; };
    double sigma = 0.5;
    double rho = 0.5;
    control_policy control = affine_control();
    // Initial log-reserve of every bank and of the limiting market state.
    double x0 = 0.0;
    double xbar0 = 0.0;

    void validate() const;
    double idio_coefficient() const;
    double common_coefficient() const { return sigma * rho; }
};

model_spec interbank_model(const interbank_params& params);

// Euler path of dXbar = (ubar(t) + b(t)) dt + sigma rho dW0 on the given common
// draws (M entries). Returns M + 1 values.
std::vector<double> macro_state_path(const interbank_params& params, std::span<const double> common_draws,
                                     const time_grid& grid, double xbar0);

}  // namespace mkv::models
