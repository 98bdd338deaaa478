#include <cmath>
#include <cstring>
#include <sstream>

#include "doctest.h"
#include "mkv/errors.hpp"
#include "mkv/harness.hpp"

using namespace mkv;
using namespace mkv::harness;

namespace {

models::cond_ou_params ou(double s, double s0, std::size_t d) {
    models::cond_ou_params p;
    p.dim = d;
    p.x0.assign(d, 0.0);
    p.sigma = s;
    p.sigma0 = s0;
    return p;
}

experiment_plan small_plan(std::vector<std::size_t> n, std::size_t r, std::size_t m = 20) {
    experiment_plan p;
    p.n_values = std::move(n);
    p.replications = r;
    p.seed = 1234;
    p.grid = time_grid(1.0, m);
    return p;
}

}  // namespace

TEST_CASE("log-log slope fit") {
    std::vector<std::pair<double, double>> pts;
    for (double x : {1.0, 2.0, 8.0, 100.0, 1e4}) pts.emplace_back(x, 3.0 * std::pow(x, -0.5));
    const auto f = fit_loglog_slope(pts);
    CHECK(std::abs(f.slope + 0.5) < 1e-12);
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));

    const std::vector<std::pair<double, double>> flat{{1, 2}, {3, 2}, {9, 2}};
    CHECK(std::abs(fit_loglog_slope(flat).slope) < 1e-15);
    const std::vector<std::pair<double, double>> two{{1, 2}, {4, 1}};
    CHECK(fit_loglog_slope(two).slope == doctest::Approx(std::log(0.5) / std::log(4.0)).epsilon(1e-15));

    CHECK_THROWS_AS(fit_loglog_slope(std::vector<std::pair<double, double>>{{1, 2}}), domain_error);
    CHECK_THROWS_AS(fit_loglog_slope(std::vector<std::pair<double, double>>{{1, 2}, {0, 1}}), domain_error);
    CHECK_THROWS_AS(fit_loglog_slope(std::vector<std::pair<double, double>>{{1, 2}, {2, -1}}), domain_error);
    CHECK_THROWS_AS(fit_loglog_slope(std::vector<std::pair<double, double>>{{2, 2}, {2, 1}}), domain_error);
}

TEST_CASE("plan validation") {
    CHECK_NOTHROW(small_plan({4, 8}, 2).validate());
    CHECK_THROWS_AS(small_plan({}, 2).validate(), domain_error);
    CHECK_THROWS_AS(small_plan({8, 4}, 2).validate(), domain_error);
    CHECK_THROWS_AS(small_plan({4, 4}, 2).validate(), domain_error);
    CHECK_THROWS_AS(small_plan({0, 4}, 2).validate(), domain_error);
    CHECK_THROWS_AS(small_plan({4, 8}, 1).validate(), domain_error);
    auto p = small_plan({4, 8}, 2);
    p.wasserstein_p = 0.5;
    CHECK_THROWS_AS(p.validate(), domain_error);
    CHECK(powers_of_two(6, 8) == std::vector<std::size_t>{64, 128, 256});
}

TEST_CASE("report aggregation and standard errors") {
    const std::vector<double> x{10.0, 100.0};
    const std::vector<double> v{0.04, 0.06, 0.08, 0.001, 0.002, 0.003};
    const auto r = build_report("t", x, v, 3, 2.0);
    REQUIRE(r.pairs.size() == 2);
    const double m0 = 0.06, sd0 = 0.02;
    CHECK(r.pairs[0].error == doctest::Approx(std::sqrt(m0)).epsilon(1e-15));
    // Delta method for sqrt: sd / sqrt(R) / (2 sqrt(mean)).
    CHECK(r.pairs[0].std_error == doctest::Approx(sd0 / std::sqrt(3.0) / (2.0 * std::sqrt(m0))).epsilon(1e-12));
    CHECK(r.slope == doctest::Approx(std::log(std::sqrt(0.002) / std::sqrt(0.06)) / std::log(10.0)).epsilon(1e-12));
    CHECK(r.slope_fitted);

    const auto dropped = build_report("t", std::vector<double>{1, 2, 4}, std::vector<double>{9, 9, 4, 4, 1, 1}, 2, 2.0, 1);
    CHECK(dropped.slope == doctest::Approx(-1.0).epsilon(1e-12));

    const auto zero = build_report("t", x, std::vector<double>(6, 0.0), 3, 2.0);
    CHECK(!zero.slope_fitted);
    CHECK(std::isnan(zero.slope));
    CHECK_THROWS_AS(build_report("t", x, v, 2, 2.0), shape_error);
}

TEST_CASE("report csv format") {
    error_report r;
    r.experiment_id = "ou-converge";
    r.pairs = {{64, 0.5, 0.01}, {128, 0.25, 0.001}};
    r.slope = -1.0;
    r.intercept = 0.125;
    CHECK(report_csv(r) ==
          "experiment,abscissa,error,stderr\n"
          "ou-converge,64,0.5,0.01\n"
          "ou-converge,128,0.25,0.001\n"
          "# slope=-1\n"
          "# intercept=0.125\n");
}

TEST_CASE("zero noise gives zero strong error") {
    const auto r = ou_strong_error(small_plan({4, 8, 16}, 2), ou(1.0, 0.0, 1), {});
    (void)r;
    auto p = ou(0.0, 0.0, 2);
    const auto plan = small_plan({4, 8, 16}, 2);
    for (std::size_t n = 0; n < 3; ++n)
        for (std::size_t j = 0; j < 2; ++j) CHECK(ou_strong_cell(plan, p, n, j) == 0.0);
}

TEST_CASE("strong error cells rerun bit-exactly and threads do not matter") {
    const auto plan = small_plan({8, 16, 32}, 3);
    const auto p = ou(std::sqrt(0.2), std::sqrt(0.2), 2);
    const auto full = ou_strong_error(plan, p, {1});
    std::vector<double> cells;
    for (std::size_t n = 0; n < 3; ++n)
        for (std::size_t j = 0; j < 3; ++j) cells.push_back(ou_strong_cell(plan, p, n, j));
    const std::vector<double> x{8, 16, 32};
    CHECK(report_csv(build_report("ou-converge", x, cells, 3, 2.0)) == report_csv(full));
    CHECK(report_csv(ou_strong_error(plan, p, {4})) == report_csv(full));
    for (const auto& pt : full.pairs) {
        CHECK(pt.error > 0.0);
        CHECK(pt.std_error >= 0.0);
    }
}

TEST_CASE("strong error recomputed from dumped trajectories") {
    const auto plan = small_plan({5, 9}, 2, 12);
    const auto p = ou(0.6, 0.4, 2);
    const std::size_t n_index = 1, rep = 1;
    sim_config cfg;
    cfg.model = models::cond_ou_model(p);
    cfg.grid = plan.grid;
    cfg.particles = 9;
    cfg.record = record_mode::full_trajectories;
    cfg.initial = point_mass(p.x0);
    rng_stream stream(plan.seed, derive_stream_id(static_cast<std::uint32_t>(experiment_tag::ou_strong), n_index, rep));
    models::cond_ou_exact_reference ref(p);
    const auto run = simulate_coupled_pair(cfg, ref, stream);
    double total = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
        double sup = 0.0;
        for (std::size_t m = 1; m <= 12; ++m) {
            double sq = 0.0;
            for (std::size_t k = 0; k < 2; ++k) {
                const double e = run.particles.path(i, m, k) - run.reference_paths[(i * 13 + m) * 2 + k];
                sq += e * e;
            }
            sup = std::max(sup, sq);
        }
        total += sup;
    }
    CHECK(ou_strong_cell(plan, p, n_index, rep) == doctest::Approx(total / 9.0).epsilon(1e-14));
}

TEST_CASE("strong error decreases with N") {
    const auto plan = small_plan(powers_of_two(6, 10), 6, 100);
    const auto r = ou_strong_error(plan, ou(std::sqrt(0.2), std::sqrt(0.2), 2));
    for (const auto& pt : r.pairs) CHECK(pt.error > 0.0);
    CHECK(r.pairs.back().error < r.pairs.front().error);
    CHECK(r.slope < 0.0);
}

TEST_CASE("doubling replications keeps the error within three standard errors") {
    auto plan = small_plan({256}, 10, 50);
    plan.n_values = {128, 256};
    const auto p = ou(std::sqrt(0.2), std::sqrt(0.2), 2);
    const auto a = ou_strong_error(plan, p);
    plan.replications = 20;
    const auto b = ou_strong_error(plan, p);
    for (std::size_t k = 0; k < 2; ++k) {
        const double pooled = std::hypot(a.pairs[k].std_error, b.pairs[k].std_error);
        CHECK(std::abs(a.pairs[k].error - b.pairs[k].error) < 3.0 * pooled);
    }
}

TEST_CASE("density cell compares against the replication's own common noise") {
    const auto plan = small_plan({64, 128}, 2, 50);
    const auto p = ou(std::sqrt(0.2), std::sqrt(0.2), 1);
    const uniform_grid g{-3, 3, 61};
    const auto cell = density_cell(plan, p, g, 1, 0);
    double sup = 0.0;
    for (std::size_t k = 0; k < cell.grid.size(); ++k) {
        CHECK(cell.truth[k] == models::cond_ou_true_density(p, 1.0, cell.terminal_common, cell.grid[k]));
        sup = std::max(sup, (cell.estimate[k] - cell.truth[k]) * (cell.estimate[k] - cell.truth[k]));
    }
    CHECK(cell.sup_sq_error == sup);
    CHECK_THROWS_AS(density_cell(plan, ou(1, 1, 2), g, 0, 0), shape_error);
    CHECK_THROWS_AS(density_cell(plan, p, g, 2, 0), domain_error);
}

TEST_CASE("density error without common noise still decreases") {
    const auto plan = small_plan(powers_of_two(8, 12), 4, 50);
    const auto r = density_sup_error(plan, ou(std::sqrt(0.2), 0.0, 1), uniform_grid{});
    CHECK(r.slope < 0.0);
}

TEST_CASE("density errors from two seeds agree within three pooled standard errors") {
    auto plan = small_plan({512, 1024}, 10, 50);
    const auto p = ou(std::sqrt(0.2), std::sqrt(0.2), 1);
    const auto a = density_sup_error(plan, p, uniform_grid{});
    plan.seed = 98765;
    const auto b = density_sup_error(plan, p, uniform_grid{});
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(a.pairs[k].error != b.pairs[k].error);
        CHECK(std::abs(a.pairs[k].error - b.pairs[k].error) <
              3.0 * std::hypot(a.pairs[k].std_error, b.pairs[k].std_error));
    }
}

TEST_CASE("interbank without idiosyncratic noise tracks the market state exactly") {
    models::interbank_params p;
    p.rho = 1.0;
    const auto r = interbank_error(small_plan({4, 16, 64}, 3, 100), p);
    for (const auto& pt : r.pairs) CHECK(pt.error == 0.0);
    CHECK(!r.slope_fitted);
}

TEST_CASE("interbank residual equals the averaged idiosyncratic walk") {
    models::interbank_params p;
    for (double rho : {0.0, 0.5, 0.9}) {
        p.rho = rho;
        const auto tr = interbank_instrumented(small_plan({100, 300}, 2, 100), p, 1, 1);
        REQUIRE(tr.particle_mean.size() == 101);
        for (std::size_t m = 0; m <= 100; ++m)
            CHECK(std::abs((tr.particle_mean[m] - tr.macro[m]) - tr.idio_average[m]) < 1e-10);
    }
    const auto plan = small_plan({100, 300}, 2, 100);
    double sup = 0.0;
    p.rho = 0.5;
    const auto tr = interbank_instrumented(plan, p, 0, 1);
    for (std::size_t m = 1; m <= 100; ++m) sup = std::max(sup, std::pow(tr.particle_mean[m] - tr.macro[m], 2));
    CHECK(interbank_cell(plan, p, 0, 1) == sup);
}

TEST_CASE("temporal probes") {
    experiment_plan plan = small_plan({256}, 2);
    std::vector<double> h;
    for (int k = 2; k <= 6; ++k) h.push_back(std::ldexp(1.0, -k));

    const auto lin = temporal_order_probe(models::linear_ode_probe(), h, plan);
    CHECK(lin.slope == doctest::Approx(1.0).epsilon(0.05));
    // Deterministic: error equals |(1 - h)^{1/h} - e^{-1}|.
    for (const auto& pt : lin.pairs)
        CHECK(pt.error == doctest::Approx(std::abs(std::pow(1.0 - pt.abscissa, 1.0 / pt.abscissa) - std::exp(-1.0))).epsilon(1e-10));

    const auto c = temporal_order_probe(models::constant_probe(), h, plan);
    CHECK(!c.slope_fitted);
    for (const auto& pt : c.pairs) CHECK(pt.error < 1e-12);

    const auto gbm = temporal_order_probe(models::gbm_probe(), h, plan, {2});
    CHECK(gbm.slope > 0.3);
    CHECK(gbm.slope < 0.7);
    CHECK(report_csv(gbm) == report_csv(temporal_order_probe(models::gbm_probe(), h, plan, {1})));

    CHECK_THROWS_AS(temporal_order_probe(models::gbm_probe(), std::vector<double>{0.3, 0.1}, plan), domain_error);
    CHECK_THROWS_AS(temporal_order_probe(models::gbm_probe(), std::vector<double>{0.5, 0.2}, plan), domain_error);
    CHECK_THROWS_AS(temporal_order_probe(models::gbm_probe(), std::vector<double>{0.5}, plan), domain_error);
}
