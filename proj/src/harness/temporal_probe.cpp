#include <algorithm>
#include <cmath>
#include <string>

#include "cells.hpp"
#include "mkv/errors.hpp"
#include "mkv/harness.hpp"
#include "mkv/integrator.hpp"
#include "mkv/simd/kernels.hpp"

namespace mkv::harness {

namespace {

struct level {
    double h;
    std::size_t steps;
    std::size_t ratio;  // fine steps per coarse step
};

std::vector<level> make_levels(std::span<const double> h_values, double horizon) {
    if (h_values.size() < 2) throw domain_error("temporal probe needs at least two step sizes");
    std::vector<level> out;
    std::size_t finest = 0;
    for (double h : h_values) {
        if (!(h > 0.0) || !std::isfinite(h)) throw domain_error("temporal probe: step sizes must be positive");
        const double ratio = horizon / h;
        const long long m = std::llround(ratio);
        if (m < 1 || std::abs(ratio - static_cast<double>(m)) > 1e-9 * ratio)
            throw domain_error("temporal probe: T/h = " + std::to_string(ratio) + " is not an integer");
        out.push_back({h, static_cast<std::size_t>(m), 0});
        finest = std::max(finest, static_cast<std::size_t>(m));
    }
    for (auto& l : out) {
        if (finest % l.steps != 0)
            throw domain_error("temporal probe: " + std::to_string(l.steps) + " steps do not divide the finest grid of " +
                               std::to_string(finest));
        l.ratio = finest / l.steps;
    }
    return out;
}

}  // namespace

error_report temporal_order_probe(const models::probe_model& probe, std::span<const double> h_values,
                                  const experiment_plan& plan, const execution& exec) {
    plan.validate();
    probe.model.validate();
    if (!probe.exact) throw domain_error("probe model has no explicit solution");
    const double horizon = plan.grid.horizon();
    const auto levels = make_levels(h_values, horizon);
    std::size_t finest = 0;
    for (const auto& l : levels) finest = std::max(finest, l.steps);

    const std::size_t n = plan.n_values.front();
    const std::size_t d = probe.model.dim_state;
    const std::size_t q = probe.model.dim_noise;
    if (probe.x0.size() != d) throw shape_error("probe x0 does not match the state dimension");
    const double p = plan.wasserstein_p;

    auto cell = [&](std::size_t, std::size_t rep) {
        rng_stream stream(plan.seed, derive_stream_id(static_cast<std::uint32_t>(experiment_tag::temporal), 0,
                                                      static_cast<std::uint32_t>(rep)));
        std::vector<noise_increments> fine;
        fine.reserve(finest);
        for (std::size_t s = 0; s < finest; ++s) fine.push_back(sample_increments(stream, n, q));

        // Terminal Brownian values on the finest grid.
        const double sh_fine = std::sqrt(horizon / static_cast<double>(finest));
        std::vector<double> w(n * q, 0.0), w0(q, 0.0);
        for (const auto& z : fine) {
            for (std::size_t j = 0; j < q; ++j) {
                for (std::size_t i = 0; i < n; ++i) w[i * q + j] += sh_fine * z.idio(i, j);
                w0[j] += sh_fine * z.common()[j];
            }
        }
        std::vector<std::vector<double>> exact(n);
        for (std::size_t i = 0; i < n; ++i)
            exact[i] = probe.exact(horizon, probe.x0, std::span<const double>(w.data() + i * q, q), w0);

        std::vector<double> errors(levels.size());
        std::vector<double> terms(n);
        for (std::size_t l = 0; l < levels.size(); ++l) {
            const time_grid grid(horizon, levels[l].steps);
            const std::size_t r = levels[l].ratio;
            const double scale = 1.0 / std::sqrt(static_cast<double>(r));
            empirical_measure start(n, d);
            for (std::size_t k = 0; k < d; ++k) std::fill(start.coord(k).begin(), start.coord(k).end(), probe.x0[k]);
            particle_state state{0, std::move(start)};
            noise_increments coarse(n, q);
            for (std::size_t m = 0; m < levels[l].steps; ++m) {
                for (std::size_t j = 0; j < q; ++j) {
                    for (std::size_t i = 0; i < n; ++i) {
                        double s = 0.0;
                        for (std::size_t b = 0; b < r; ++b) s += fine[m * r + b].idio(i, j);
                        coarse.idio(i, j) = r == 1 ? s : s * scale;
                    }
                    double s0 = 0.0;
                    for (std::size_t b = 0; b < r; ++b) s0 += fine[m * r + b].common()[j];
                    coarse.common()[j] = r == 1 ? s0 : s0 * scale;
                }
                state = euler_particle_step(state, probe.model, grid, coarse);
            }
            for (std::size_t i = 0; i < n; ++i) {
                double sq = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    const double e = state.cloud.at(i, k) - exact[i][k];
                    sq += e * e;
                }
                terms[i] = std::pow(sq, p / 2.0);
            }
            errors[l] = simd::pairwise_sum(terms.data(), n) / static_cast<double>(n);
        }
        return errors;
    };

    const auto per_rep = detail::run_cells(1, plan.replications, exec.threads, cell);
    // Reorder to level-major for the report.
    std::vector<double> values(levels.size() * plan.replications);
    std::vector<double> abscissa(levels.size());
    for (std::size_t l = 0; l < levels.size(); ++l) {
        abscissa[l] = levels[l].h;
        for (std::size_t j = 0; j < plan.replications; ++j) values[l * plan.replications + j] = per_rep[j][l];
    }
    error_report rep = build_report("probe-temporal", abscissa, values, plan.replications, p, 0);
    if (probe.euler_exact) {
        rep.slope = std::nan("");
        rep.intercept = std::nan("");
        rep.slope_fitted = false;
    }
    return rep;
}

}  // namespace mkv::harness
