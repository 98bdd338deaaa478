#include "mkv/models/interbank.hpp"

#include <cmath>
#include <string>

#include "mkv/errors.hpp"

namespace mkv::models {

control_policy affine_control(schedule c1, schedule c2) {
    control_policy p;
    p.per_bank = [c1, c2](double t, double x, double m) { return c1(t) + c2(t) * (m - x); };
    p.population = [c1](double t) { return c1(t); };
    p.affine = control_policy::affine_form{std::move(c1), std::move(c2)};
    return p;
}

control_policy constant_control(double rate) {
    control_policy p;
    p.per_bank = [rate](double, double, double) { return rate; };
    p.population = [rate](double) { return rate; };
    p.affine = control_policy::affine_form{schedule::constant(rate), schedule::constant(0.0)};
    return p;
}

void interbank_params::validate() const {
    if (!std::isfinite(mean_reversion_a)) throw domain_error("interbank: a must be finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw domain_error("interbank: sigma must be positive");
    if (!(rho >= 0.0 && rho <= 1.0)) throw domain_error("interbank: rho must lie in [0, 1]");
    if (!liquidity_b) throw domain_error("interbank: missing liquidity b(t)");
    if (!control.per_bank || !control.population) throw domain_error("interbank: incomplete control policy");
    if (!std::isfinite(x0) || !std::isfinite(xbar0)) throw domain_error("interbank: initial states must be finite");
}

double interbank_params::idio_coefficient() const { return sigma * std::sqrt(1.0 - rho * rho); }

model_spec interbank_model(const interbank_params& p) {
    p.validate();
    model_spec m;
    m.name = "interbank";
    m.dim_state = 1;
    m.dim_noise = 1;
    m.dependence = measure_dependence::mean;
    m.drift = [a = p.mean_reversion_a, u = p.control.per_bank, b = p.liquidity_b](
                  double t, std::span<const double> x, const measure_view& mu) {
        const double mean = mu.mean()[0];
        return std::vector<double>{a * (mean - x[0]) + u(t, x[0], mean) + b(t)};
    };
    const double s_idio = p.idio_coefficient();
    const double s_common = p.common_coefficient();
    m.idio_diffusion = [s_idio](double, std::span<const double>, const measure_view&) { return std::vector<double>{s_idio}; };
    m.common_diffusion = [s_common](double, std::span<const double>, const measure_view&) { return std::vector<double>{s_common}; };
    if (p.control.affine) {
        m.affine = [a = p.mean_reversion_a, form = *p.control.affine, b = p.liquidity_b, s_idio, s_common](double t) {
            const double k = a + form.c2(t);
            simd::affine_coeffs c;
            c.drift_x = -k;
            c.drift_mean = k;
            c.drift_const = form.c1(t) + b(t);
            c.idio_const = s_idio;
            c.common_const = s_common;
            return c;
        };
    }
    return m;
}

std::vector<double> macro_state_path(const interbank_params& p, std::span<const double> common,
                                     const time_grid& grid, double xbar0) {
    p.validate();
    const std::size_t steps = grid.steps();
    if (common.size() != steps)
        throw shape_error("macro_state_path: expected " + std::to_string(steps) + " common draws, got " +
                          std::to_string(common.size()));
    const double h = grid.step();
    const double sh = grid.sqrt_step();
    const double s0 = p.common_coefficient();
    std::vector<double> path(steps + 1);
    path[0] = xbar0;
    for (std::size_t m = 0; m < steps; ++m) {
        const double t = grid.node(m);
        path[m + 1] = (path[m] + h * (p.control.population(t) + p.liquidity_b(t))) + sh * (s0 * common[m]);
    }
    return path;
}

}  // namespace mkv::models
