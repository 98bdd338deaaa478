#include "mkv/integrator.hpp"

#include <cmath>
#include <string>

#include "mkv/errors.hpp"

namespace mkv {

namespace {

void check_noise(const model_spec& model, const particle_state& state, const noise_increments& noise) {
    if (noise.particles() != state.cloud.size() || noise.dim_noise() != model.dim_noise)
        throw shape_error("noise shaped (" + std::to_string(noise.particles()) + ", " +
                          std::to_string(noise.dim_noise()) + "), step needs (" +
                          std::to_string(state.cloud.size()) + ", " + std::to_string(model.dim_noise) + ")");
    if (state.cloud.dim() != model.dim_state) throw shape_error("cloud dimension differs from model");
}

void check_finite_state(const empirical_measure& cloud, double t) {
    for (std::size_t k = 0; k < cloud.dim(); ++k) {
        const auto c = cloud.coord(k);
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!std::isfinite(c[i]))
                throw numerical_error("non-finite state after step at t=" + std::to_string(t) +
                                          ", particle " + std::to_string(i),
                                      t, static_cast<long>(i));
    }
}

particle_state step_with_mean(const particle_state& state, const model_spec& model,
                              const time_grid& grid, const noise_increments& noise,
                              std::span<const double> mean, const step_options& opts) {
    const std::size_t m = state.step;
    if (m >= grid.steps()) throw domain_error("step index already at the end of the grid");
    const double t = grid.node(m);
    const double h = grid.step();
    const double sh = grid.sqrt_step();
    const std::size_t n = state.cloud.size();
    const std::size_t d = model.dim_state;
    const std::size_t q = model.dim_noise;

    particle_state next{m + 1, state.cloud};

    if (model.affine && opts.use_affine) {
        const simd::kernel_table& kt = opts.kernels ? *opts.kernels : simd::active_kernels();
        const simd::affine_coeffs c = (*model.affine)(t);
        for (std::size_t k = 0; k < d; ++k) {
            const double mk = mean.empty() ? 0.0 : mean[k];
            kt.affine_euler(next.cloud.coord(k).data(), noise.idio_column(k).data(), n, mk,
                            noise.common()[k], c, h, sh);
        }
    } else {
        const measure_view mu(state.cloud, mean);
        const auto z0 = noise.common();
        std::vector<double> x(d);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < d; ++k) x[k] = state.cloud.at(i, k);
            const long idx = static_cast<long>(i);
            const auto b = eval_drift(model, t, x, mu, idx);
            const auto s = eval_idio(model, t, x, mu, idx);
            const auto s0 = eval_common(model, t, x, mu, idx);
            if (opts.on_common) opts.on_common(i, z0);
            for (std::size_t k = 0; k < d; ++k) {
                double idio = 0.0;
                double common = 0.0;
                for (std::size_t j = 0; j < q; ++j) {
                    idio += s[k * q + j] * noise.idio(i, j);
                    common += s0[k * q + j] * z0[j];
                }
                next.cloud.at(i, k) = ((x[k] + h * b[k]) + sh * idio) + sh * common;
            }
        }
    }
    check_finite_state(next.cloud, t);
    return next;
}

std::vector<double> step_mean(const model_spec& model, const empirical_measure& cloud) {
    if (model.dependence == measure_dependence::none && !model.affine) return {};
    return empirical_mean(cloud);
}

void record_paths(std::vector<double>& paths, const empirical_measure& cloud, std::size_t m,
                  std::size_t nodes) {
    const std::size_t d = cloud.dim();
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t k = 0; k < d; ++k) paths[(i * nodes + m) * d + k] = cloud.at(i, k);
}

// Shared driver: runs the particle system and calls on_step(m + 1, noise, cloud)
// after every step.
template <class OnStep>
trajectory_bundle run_particles(const sim_config& config, rng_stream& stream,
                                const step_options& opts, OnStep&& on_step) {
    config.validate();
    const model_spec& model = config.model;
    const time_grid& grid = config.grid;
    const std::size_t steps = grid.steps();
    const std::size_t nodes = steps + 1;
    const std::size_t d = model.dim_state;
    const std::size_t q = model.dim_noise;

    trajectory_bundle out;
    out.grid = grid;
    out.particles = config.particles;
    out.dim_state = d;
    out.dim_noise = q;
    out.initial_cloud = config.sample_initial(stream);
    out.common_path.assign(nodes * q, 0.0);
    out.common_draws.assign(steps * q, 0.0);
    out.mean_path.assign(nodes * d, 0.0);
    const bool full = config.record == record_mode::full_trajectories;
    if (full) out.particle_paths.assign(config.particles * nodes * d, 0.0);

    particle_state state{0, out.initial_cloud};
    if (full) record_paths(out.particle_paths, state.cloud, 0, nodes);

    for (std::size_t m = 0; m < steps; ++m) {
        std::vector<double> mean = step_mean(model, state.cloud);
        if (mean.empty()) mean = empirical_mean(state.cloud);
        for (std::size_t k = 0; k < d; ++k) out.mean_path[m * d + k] = mean[k];

        const noise_increments noise = sample_increments(stream, config.particles, q);
        for (std::size_t j = 0; j < q; ++j) {
            out.common_draws[m * q + j] = noise.common()[j];
            out.common_path[(m + 1) * q + j] = out.common_path[m * q + j] + grid.sqrt_step() * noise.common()[j];
        }
        state = step_with_mean(state, model, grid, noise, mean, opts);
        if (full) record_paths(out.particle_paths, state.cloud, m + 1, nodes);
        on_step(m, noise, state.cloud);
    }
    const auto terminal_mean = empirical_mean(state.cloud);
    for (std::size_t k = 0; k < d; ++k) out.mean_path[steps * d + k] = terminal_mean[k];
    out.terminal_cloud = std::move(state.cloud);
    return out;
}

}  // namespace

particle_state euler_particle_step(const particle_state& state, const model_spec& model,
                                   const time_grid& grid, const noise_increments& noise,
                                   const step_options& opts) {
    check_noise(model, state, noise);
    return step_with_mean(state, model, grid, noise, step_mean(model, state.cloud), opts);
}

trajectory_bundle simulate_particle_system(const sim_config& config, rng_stream& stream,
                                           const step_options& opts) {
    return run_particles(config, stream, opts, [](std::size_t, const noise_increments&, const empirical_measure&) {});
}

void scheme_reference::reset(const empirical_measure& initial, const time_grid& grid) {
    grid_ = &grid;
    state_ = particle_state{0, initial};
}

void scheme_reference::advance(std::size_t m, const noise_increments& noise) {
    if (!grid_ || state_.step != m) throw domain_error("scheme reference advanced out of order");
    state_ = euler_particle_step(state_, model_, *grid_, noise, opts_);
}

coupled_run simulate_coupled_pair(const sim_config& config, coupled_reference& reference,
                                  rng_stream& stream, const step_options& opts) {
    const std::size_t n = config.particles;
    const std::size_t d = config.model.dim_state;
    const std::size_t nodes = config.grid.steps() + 1;
    const bool full = config.record == record_mode::full_trajectories;
    const simd::kernel_table& kt = opts.kernels ? *opts.kernels : simd::active_kernels();

    coupled_run run;
    run.sup_sq_error.assign(n, 0.0);
    if (full) run.reference_paths.assign(n * nodes * d, 0.0);
    std::vector<double> dist(n);

    auto check_reference = [&] {
        const empirical_measure& r = reference.state();
        if (r.size() != n || r.dim() != d)
            throw shape_error("reference state shaped (" + std::to_string(r.size()) + ", " +
                              std::to_string(r.dim()) + "), particle system is (" + std::to_string(n) +
                              ", " + std::to_string(d) + ")");
    };

    bool started = false;
    auto on_step = [&](std::size_t m, const noise_increments& noise, const empirical_measure& cloud) {
        reference.advance(m, noise);
        check_reference();
        const empirical_measure& r = reference.state();
        if (full) record_paths(run.reference_paths, r, m + 1, nodes);
        std::fill(dist.begin(), dist.end(), 0.0);
        for (std::size_t k = 0; k < d; ++k)
            kt.sq_diff_accumulate(cloud.coord(k).data(), r.coord(k).data(), dist.data(), n);
        kt.max_inplace(run.sup_sq_error.data(), dist.data(), n);
    };

    // The reference starts from the same initial cloud; hook it in before the
    // first step by wrapping the sampler.
    sim_config cfg = config;
    cfg.initial = [&](rng_stream& s, std::size_t count, std::size_t dim) {
        empirical_measure init = config.initial ? config.initial(s, count, dim) : empirical_measure(count, dim);
        reference.reset(init, config.grid);
        check_reference();
        if (full) record_paths(run.reference_paths, reference.state(), 0, nodes);
        started = true;
        return init;
    };
    run.particles = run_particles(cfg, stream, opts, on_step);
    if (!started) throw domain_error("coupled run never initialised its reference");
    return run;
}

}  // namespace mkv
