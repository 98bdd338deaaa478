#include <algorithm>
#include <cmath>
#include <string>

#include "cells.hpp"
#include "mkv/errors.hpp"
#include "mkv/harness.hpp"
#include "mkv/integrator.hpp"
#include "mkv/kde.hpp"
#include "mkv/simd/kernels.hpp"

namespace mkv::harness {

namespace {

std::uint64_t stream_for(experiment_tag tag, std::size_t n_index, std::size_t rep) {
    return derive_stream_id(static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(n_index),
                            static_cast<std::uint32_t>(rep));
}

void check_cell(const experiment_plan& plan, std::size_t n_index, std::size_t rep) {
    if (n_index >= plan.n_values.size()) throw domain_error("N index out of range");
    if (rep >= plan.replications) throw domain_error("replication index out of range");
}

std::vector<double> abscissae(const experiment_plan& plan) {
    return {plan.n_values.begin(), plan.n_values.end()};
}

sim_config base_config(const experiment_plan& plan, model_spec model, std::size_t n, record_mode rec,
                       std::vector<double> x0) {
    sim_config cfg;
    cfg.model = std::move(model);
    cfg.grid = plan.grid;
    cfg.particles = n;
    cfg.seed = plan.seed;
    cfg.replications = plan.replications;
    cfg.record = rec;
    cfg.initial = point_mass(std::move(x0));
    return cfg;
}

}  // namespace

void experiment_plan::validate() const {
    if (n_values.empty()) throw domain_error("plan: n_values must not be empty");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] == 0) throw domain_error("plan: every N must be >= 1");
        if (i > 0 && n_values[i] <= n_values[i - 1]) throw domain_error("plan: n_values must be strictly increasing");
    }
    if (n_values.size() > 0xffff) throw domain_error("plan: at most 65535 N values");
    if (replications < 2) throw domain_error("plan: replications must be >= 2");
    if (replications > 0xffffffffULL) throw domain_error("plan: too many replications");
    if (!(wasserstein_p >= 1.0) || !std::isfinite(wasserstein_p)) throw domain_error("plan: p must be >= 1");
}

std::vector<std::size_t> powers_of_two(int lo, int hi) {
    if (lo < 0 || hi < lo || hi > 40) throw domain_error("powers_of_two: need 0 <= lo <= hi <= 40");
    std::vector<std::size_t> out;
    for (int k = lo; k <= hi; ++k) out.push_back(std::size_t{1} << k);
    return out;
}

double ou_strong_cell(const experiment_plan& plan, const models::cond_ou_params& params, std::size_t n_index,
                      std::size_t rep) {
    check_cell(plan, n_index, rep);
    const std::size_t n = plan.n_values[n_index];
    const sim_config cfg =
        base_config(plan, models::cond_ou_model(params), n, record_mode::running_sup_error, params.x0);
    rng_stream stream(plan.seed, stream_for(experiment_tag::ou_strong, n_index, rep));
    models::cond_ou_exact_reference ref(params);
    const coupled_run run = simulate_coupled_pair(cfg, ref, stream);
    std::vector<double> terms(n);
    const double half_p = plan.wasserstein_p / 2.0;
    for (std::size_t i = 0; i < n; ++i)
        terms[i] = half_p == 1.0 ? run.sup_sq_error[i] : std::pow(run.sup_sq_error[i], half_p);
    return simd::pairwise_sum(terms.data(), n) / static_cast<double>(n);
}

error_report ou_strong_error(const experiment_plan& plan, const models::cond_ou_params& params,
                             const execution& exec) {
    plan.validate();
    params.validate();
    const auto values = detail::run_cells(plan.n_values.size(), plan.replications, exec.threads,
                                          [&](std::size_t a, std::size_t b) { return ou_strong_cell(plan, params, a, b); });
    const auto x = abscissae(plan);
    return build_report("ou-converge", x, values, plan.replications, plan.wasserstein_p, plan.burn_in_drop);
}

density_cell_result density_cell(const experiment_plan& plan, const models::cond_ou_params& params,
                                 const uniform_grid& grid, std::size_t n_index, std::size_t rep) {
    check_cell(plan, n_index, rep);
    if (params.dim != 1) throw shape_error("density experiment needs d = 1");
    const std::size_t n = plan.n_values[n_index];
    const sim_config cfg = base_config(plan, models::cond_ou_model(params), n, record_mode::terminal_only, params.x0);
    rng_stream stream(plan.seed, stream_for(experiment_tag::ou_density, n_index, rep));
    const trajectory_bundle run = simulate_particle_system(cfg, stream);

    kde_config kc;
    kc.eta = bandwidth(n);
    kc.grid = grid;
    density_cell_result out;
    out.terminal_common = run.common_path[plan.grid.steps()];
    out.grid = grid.nodes();
    out.estimate = kde_evaluate(run.terminal_cloud.coord(0), kc);
    out.truth.resize(out.grid.size());
    const double t = plan.grid.horizon();
    double sup = 0.0;
    for (std::size_t g = 0; g < out.grid.size(); ++g) {
        out.truth[g] = models::cond_ou_true_density(params, t, out.terminal_common, out.grid[g]);
        const double e = out.estimate[g] - out.truth[g];
        sup = std::max(sup, e * e);
    }
    out.sup_sq_error = sup;
    return out;
}

error_report density_sup_error(const experiment_plan& plan, const models::cond_ou_params& params,
                               const uniform_grid& grid, const execution& exec) {
    plan.validate();
    params.validate();
    grid.validate();
    const auto values = detail::run_cells(plan.n_values.size(), plan.replications, exec.threads, [&](std::size_t a, std::size_t b) {
        return density_cell(plan, params, grid, a, b).sup_sq_error;
    });
    const auto x = abscissae(plan);
    return build_report("ou-density", x, values, plan.replications, 2.0, plan.burn_in_drop);
}

namespace {

struct interbank_run {
    trajectory_bundle bundle;
    std::vector<double> macro;
};

interbank_run run_interbank(const experiment_plan& plan, const models::interbank_params& params, std::size_t n_index,
                            std::size_t rep) {
    check_cell(plan, n_index, rep);
    const std::size_t n = plan.n_values[n_index];
    const sim_config cfg = base_config(plan, models::interbank_model(params), n, record_mode::terminal_only, {params.x0});
    rng_stream stream(plan.seed, stream_for(experiment_tag::interbank, n_index, rep));
    interbank_run out{simulate_particle_system(cfg, stream), {}};
    out.macro = models::macro_state_path(params, out.bundle.common_draws, plan.grid, params.xbar0);
    return out;
}

}  // namespace

double interbank_cell(const experiment_plan& plan, const models::interbank_params& params, std::size_t n_index,
                      std::size_t rep) {
    const interbank_run run = run_interbank(plan, params, n_index, rep);
    double sup = 0.0;
    for (std::size_t m = 1; m <= plan.grid.steps(); ++m) {
        const double e = run.bundle.mean_path[m] - run.macro[m];
        sup = std::max(sup, e * e);
    }
    return sup;
}

error_report interbank_error(const experiment_plan& plan, const models::interbank_params& params,
                             const execution& exec) {
    plan.validate();
    params.validate();
    const auto values = detail::run_cells(plan.n_values.size(), plan.replications, exec.threads,
                                          [&](std::size_t a, std::size_t b) { return interbank_cell(plan, params, a, b); });
    const auto x = abscissae(plan);
    return build_report("interbank", x, values, plan.replications, 2.0, plan.burn_in_drop);
}

interbank_trace interbank_instrumented(const experiment_plan& plan, const models::interbank_params& params,
                                       std::size_t n_index, std::size_t rep) {
    plan.validate();
    params.validate();
    const interbank_run run = run_interbank(plan, params, n_index, rep);
    const std::size_t n = plan.n_values[n_index];
    const std::size_t steps = plan.grid.steps();
    const double sh = plan.grid.sqrt_step();

    // Step m consumed draws [m (N + 1), m (N + 1) + N) for the banks and one
    // common draw after them; the point-mass start consumes none.
    const rng_stream replay(plan.seed, stream_for(experiment_tag::interbank, n_index, rep));
    std::vector<double> w(n, 0.0);
    interbank_trace tr;
    tr.particle_mean = run.bundle.mean_path;
    tr.macro = run.macro;
    tr.idio_average.assign(steps + 1, 0.0);
    for (std::size_t m = 0; m < steps; ++m) {
        const std::uint64_t base = static_cast<std::uint64_t>(m) * (n + 1);
        for (std::size_t i = 0; i < n; ++i) w[i] += sh * replay.normal_at(base + i);
        tr.idio_average[m + 1] = params.idio_coefficient() * (simd::pairwise_sum(w.data(), n) / static_cast<double>(n));
    }
    return tr;
}

}  // namespace mkv::harness
