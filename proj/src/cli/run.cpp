#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mkv/cli.hpp"
#include "mkv/errors.hpp"
#include "mkv/harness.hpp"
#include "mkv/integrator.hpp"
#include "mkv/kde.hpp"
#include "mkv/models/cond_ou.hpp"
#include "mkv/models/interbank.hpp"
#include "mkv/models/probe_models.hpp"

namespace mkv::cli {

namespace {

namespace fs = std::filesystem;

time_grid read_grid(const json& cfg) {
    return time_grid(get_double(cfg, "grid.T"), static_cast<std::size_t>(get_uint(cfg, "grid.M")));
}

harness::experiment_plan read_plan(const json& cfg) {
    harness::experiment_plan plan;
    plan.n_values = get_sizes(cfg, "plan.n_values");
    plan.replications = static_cast<std::size_t>(get_uint(cfg, "plan.replications"));
    plan.seed = get_uint(cfg, "plan.seed");
    plan.grid = read_grid(cfg);
    plan.wasserstein_p = get_double(cfg, "plan.p");
    plan.burn_in_drop = static_cast<std::size_t>(get_uint(cfg, "plan.burn_in_drop"));
    return plan;
}

models::cond_ou_params read_cond_ou(const json& cfg, std::size_t dim) {
    models::cond_ou_params p;
    p.dim = dim;
    p.sigma = get_double(cfg, "model.sigma");
    p.sigma0 = get_double(cfg, "model.sigma0");
    auto x0 = get_doubles(cfg, "model.x0");
    if (x0.size() == 1 && dim > 1) x0.assign(dim, x0[0]);
    if (x0.size() != dim)
        throw config_error("model.x0", "has " + std::to_string(x0.size()) + " entries, dim is " + std::to_string(dim));
    p.x0 = std::move(x0);
    return p;
}

models::schedule read_schedule(const json& cfg, const char* value_key, const char* csv_key) {
    const std::string path = get_string(cfg, csv_key);
    if (path.empty()) return models::schedule::constant(get_double(cfg, value_key));
    try {
        return models::schedule::from_csv(path);
    } catch (const std::exception& e) {
        throw config_error(csv_key, e.what());
    }
}

models::interbank_params read_interbank(const json& cfg) {
    models::interbank_params p;
    p.mean_reversion_a = get_double(cfg, "model.a");
    const double b = get_double(cfg, "model.b");
    p.liquidity_b = [b](double) { return b; };
    p.sigma = get_double(cfg, "model.sigma");
    p.rho = get_double(cfg, "model.rho");
    p.x0 = get_double(cfg, "model.x0");
    p.xbar0 = get_double(cfg, "model.xbar0");
    const std::string kind = get_string(cfg, "control.kind");
    if (kind == "affine")
        p.control = models::affine_control(read_schedule(cfg, "control.c1", "control.c1_csv"),
                                           read_schedule(cfg, "control.c2", "control.c2_csv"));
    else
        p.control = models::constant_control(get_double(cfg, "control.rate"));
    return p;
}

models::probe_model read_probe(const json& cfg) {
    const std::string kind = get_string(cfg, "model.kind");
    const double x0 = get_double(cfg, "model.x0");
    if (kind == "gbm") return models::gbm_probe(x0, get_double(cfg, "model.vol"));
    if (kind == "linear_ode") return models::linear_ode_probe(x0, get_double(cfg, "model.rate"));
    return models::constant_probe(x0, get_double(cfg, "model.drift"), get_double(cfg, "model.vol"));
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string describe_n(const harness::experiment_plan& plan) {
    return "N=" + std::to_string(plan.n_values.front()) + ".." + std::to_string(plan.n_values.back()) +
           " R=" + std::to_string(plan.replications);
}

harness::error_report run_experiment(const std::string& sub, const json& cfg, const harness::execution& exec,
                                     const fs::path& dir, std::ostream& err) {
    if (sub == "ou-converge") {
        const auto plan = read_plan(cfg);
        const auto params = read_cond_ou(cfg, static_cast<std::size_t>(get_uint(cfg, "model.dim")));
        err << "mkv: ou-converge d=" << params.dim << " " << describe_n(plan) << " threads=" << exec.threads << "\n";
        return harness::ou_strong_error(plan, params, exec);
    }
    if (sub == "ou-density") {
        const auto plan = read_plan(cfg);
        const auto params = read_cond_ou(cfg, 1);
        if (get_uint(cfg, "kde.order") != 5) throw config_error("kde.order", "only order 5 is implemented");
        uniform_grid grid{get_double(cfg, "kde.lo"), get_double(cfg, "kde.hi"),
                          static_cast<std::size_t>(get_uint(cfg, "kde.points"))};
        try {
            grid.validate();
        } catch (const std::invalid_argument& e) {
            throw config_error("kde", e.what());
        }
        err << "mkv: ou-density " << describe_n(plan) << " threads=" << exec.threads << "\n";
        auto report = harness::density_sup_error(plan, params, grid, exec);
        if (get_bool(cfg, "kde.dump_density")) {
            const auto cell = harness::density_cell(plan, params, grid, plan.n_values.size() - 1, 0);
            write_density_csv((dir / "ou-density_estimate.csv").string(), cell.grid, cell.estimate);
            write_density_csv((dir / "ou-density_truth.csv").string(), cell.grid, cell.truth);
        }
        return report;
    }
    if (sub == "interbank") {
        const auto plan = read_plan(cfg);
        const auto params = read_interbank(cfg);
        err << "mkv: interbank " << describe_n(plan) << " threads=" << exec.threads << "\n";
        return harness::interbank_error(plan, params, exec);
    }
    // probe-temporal
    harness::experiment_plan plan;
    plan.n_values = {static_cast<std::size_t>(get_uint(cfg, "plan.paths"))};
    plan.replications = static_cast<std::size_t>(get_uint(cfg, "plan.replications"));
    plan.seed = get_uint(cfg, "plan.seed");
    plan.grid = time_grid(get_double(cfg, "grid.T"), 1);
    plan.wasserstein_p = get_double(cfg, "plan.p");
    const auto h = get_doubles(cfg, "plan.h_values");
    const auto probe = read_probe(cfg);
    err << "mkv: probe-temporal " << probe.model.name << " levels=" << h.size() << " paths=" << plan.n_values.front()
        << " R=" << plan.replications << "\n";
    return harness::temporal_order_probe(probe, h, plan, exec);
}

void run_simulate(const json& cfg, const fs::path& dir, std::ostream& err) {
    sim_config sc;
    const std::string kind = get_string(cfg, "model.kind");
    if (kind == "cond_ou") {
        const auto p = read_cond_ou(cfg, static_cast<std::size_t>(get_uint(cfg, "model.dim")));
        p.validate(true);
        sc.model = models::cond_ou_model(p);
        sc.initial = point_mass(p.x0);
    } else {
        const auto p = read_interbank(cfg);
        sc.model = models::interbank_model(p);
        sc.initial = point_mass({p.x0});
    }
    sc.grid = read_grid(cfg);
    sc.particles = static_cast<std::size_t>(get_uint(cfg, "plan.particles"));
    sc.seed = get_uint(cfg, "plan.seed");
    sc.record = record_mode::full_trajectories;
    const auto rep = get_uint(cfg, "plan.replication");
    if (rep > 0xffffffffULL) throw config_error("plan.replication", "must fit in 32 bits");
    err << "mkv: simulate " << sc.model.name << " N=" << sc.particles << " M=" << sc.grid.steps() << "\n";

    rng_stream stream(sc.seed, derive_stream_id(static_cast<std::uint32_t>(harness::experiment_tag::simulate), 0,
                                                static_cast<std::uint32_t>(rep)));
    const trajectory_bundle bundle = simulate_particle_system(sc, stream);
    write_trajectory_dump(bundle, (dir / "simulate.bin").string());

    const std::size_t d = bundle.dim_state, q = bundle.dim_noise;
    std::string csv = "t";
    for (std::size_t k = 0; k < d; ++k) csv += ",mean_" + std::to_string(k);
    for (std::size_t j = 0; j < q; ++j) csv += ",common_" + std::to_string(j);
    csv += "\n";
    for (std::size_t m = 0; m <= bundle.grid.steps(); ++m) {
        csv += format_double(bundle.grid.node(m));
        for (std::size_t k = 0; k < d; ++k) csv += "," + format_double(bundle.mean_path[m * d + k]);
        for (std::size_t j = 0; j < q; ++j) csv += "," + format_double(bundle.common_path[m * q + j]);
        csv += "\n";
    }
    write_text(dir / "simulate.csv", csv);
}

}  // namespace

int run(const invocation& inv, std::ostream& out, std::ostream& err) {
    try {
        if (inv.threads < 1) throw config_error("--threads", "must be >= 1");
        const json cfg = resolve_config(inv);
        const fs::path dir(inv.out_dir);
        fs::create_directories(dir);
        write_text(dir / "effective_config.json", cfg.dump(2) + "\n");
        if (inv.subcommand == "simulate") {
            run_simulate(cfg, dir, err);
            return exit_ok;
        }
        const harness::execution exec{inv.threads};
        const auto report = run_experiment(inv.subcommand, cfg, exec, dir, err);
        write_text(dir / (inv.subcommand + ".csv"), harness::report_csv(report));
        out << "slope=" << format_double(report.slope) << "\n";
        return exit_ok;
    } catch (const config_error& e) {
        err << "mkv: config error: " << e.what() << "\n";
        return exit_config;
    } catch (const numerical_error& e) {
        err << "mkv: numerical abort: " << e.what() << " (t=" << e.time() << ", particle=" << e.index() << ")\n";
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        err << "mkv: invalid parameters: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        err << "mkv: " << e.what() << "\n";
        return exit_failure;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Particle simulations of McKean-Vlasov equations with common noise", "mkvsim"};
    app.require_subcommand(1);
    invocation inv;
    std::uint64_t seed = 0;
    for (const auto& name : subcommands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config,-c", inv.config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--set", inv.overrides, "Override a config entry: key.path=value")->take_all();
        sub->add_option("--out,-o", inv.out_dir, "Output directory");
        sub->add_option("--threads,-j", inv.threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Seed (overrides config and MKV_SEED)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "mkvsim: " << e.what() << "\n" << app.help();
        return exit_config;
    }
    for (auto* sub : app.get_subcommands()) {
        inv.subcommand = sub->get_name();
        if (sub->count("--seed") > 0) inv.seed = seed;
    }
    return run(inv, out, err);
}

}  // namespace mkv::cli
