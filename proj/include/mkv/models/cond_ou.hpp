#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mkv/empirical_measure.hpp"
#include "mkv/integrator.hpp"
#include "mkv/model.hpp"
#include "mkv/time_grid.hpp"

namespace mkv::models {

// dX = -(X - E^1 X) dt + sigma dW + sigma0 dW0 in R^d, X_0 = x0.
struct cond_ou_params {
    std::vector<double> x0{0.0};
    double sigma = 0.0;
    double sigma0 = 0.0;
    std::size_t dim = 1;

    // sigma must be > 0 unless allow_degenerate (used by the zero-noise checks).
    void validate(bool allow_degenerate = false) const;
};

model_spec cond_ou_model(const cond_ou_params& params);

// Closed-form solution coupled to the scheme's draws for one particle.
// idio_draws, common_draws: M x q row-major standard-normal increments.
// The stochastic integral uses the left-point recursion
//   I_{m+1} = e^{-h} (I_m + sqrt(h) Z_{m+1}),  I_0 = 0.
// Returns the (M+1) x d path, row-major.
std::vector<double> cond_ou_exact_path(const cond_ou_params& params, std::span<const double> idio_draws,
                                       std::span<const double> common_draws, const time_grid& grid);

// Variance of the conditional law at time t: sigma^2 (1 - e^{-2t}) / 2.
double cond_ou_conditional_variance(double sigma, double t);

// Density of the conditional law at time t (d = 1) given W0_t = w0.
double cond_ou_true_density(const cond_ou_params& params, double t, double w0, double x);

// Exact-solution reference for simulate_coupled_pair, one path per particle.
// Warns once per process on std::clog when x0 != 0: the closed form then no longer solves the
// equation exactly.
class cond_ou_exact_reference final : public coupled_reference {
public:
    explicit cond_ou_exact_reference(cond_ou_params params);

    void reset(const empirical_measure& initial, const time_grid& grid) override;
    void advance(std::size_t m, const noise_increments& noise) override;
    const empirical_measure& state() const override { return state_; }

private:
    cond_ou_params params_;
    const time_grid* grid_ = nullptr;
    double decay_ = 1.0;
    std::vector<double> integral_;   // I per (coordinate, particle), coordinate-major
    std::vector<double> common_;     // W0 per coordinate
    empirical_measure state_{1, 1};
};

}  // namespace mkv::models
