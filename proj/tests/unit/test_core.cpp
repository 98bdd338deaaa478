#include <cmath>
#include <random>

#include "doctest.h"
#include "mkv/empirical_measure.hpp"
#include "mkv/errors.hpp"
#include "mkv/model.hpp"
#include "mkv/noise.hpp"
#include "mkv/sim_config.hpp"
#include "mkv/time_grid.hpp"

using namespace mkv;

TEST_CASE("time grid nodes") {
    const auto g = make_time_grid(1.0, 4);
    REQUIRE(g.nodes().size() == 5);
    const std::vector<double> expect{0.0, 0.25, 0.5, 0.75, 1.0};
    CHECK(g.nodes() == expect);

    CHECK(make_time_grid(1.0, 100).step() == doctest::Approx(0.01).epsilon(1e-15));

    const auto g2 = make_time_grid(2.5, 5);
    CHECK(g2.step() == 0.5);
    CHECK(g2.node(3) == 1.5);
    CHECK(g2.node(5) == 2.5);
    CHECK(g2.sqrt_step() == std::sqrt(0.5));
}

TEST_CASE("time grid rejects bad input") {
    CHECK_THROWS_AS(make_time_grid(0.0, 4), domain_error);
    CHECK_THROWS_AS(make_time_grid(-1.0, 4), domain_error);
    CHECK_THROWS_AS(make_time_grid(NAN, 4), domain_error);
    CHECK_THROWS_AS(make_time_grid(1.0, 0), domain_error);
    const auto e = time_grid::empty();
    CHECK(e.steps() == 0);
    CHECK(e.nodes() == std::vector<double>{0.0});
}

TEST_CASE("time grid invariants hold for random sizes") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> horizon(1e-3, 50.0);
    std::uniform_int_distribution<std::size_t> steps(1, 2000);
    for (int trial = 0; trial < 200; ++trial) {
        const double t = horizon(gen);
        const std::size_t m = steps(gen);
        const auto g = make_time_grid(t, m);
        REQUIRE(g.nodes().size() == m + 1);
        CHECK(g.node(0) == 0.0);
        CHECK(g.node(m) == t);
        for (std::size_t k = 1; k <= m; ++k) REQUIRE(g.node(k) > g.node(k - 1));
    }
}

TEST_CASE("empirical mean") {
    CHECK(empirical_mean(empirical_measure::from_scalars(std::vector<double>{0.0, 2.0})) == std::vector<double>{1.0});
    CHECK(empirical_mean(empirical_measure::from_points({{1.0, 0.0}, {0.0, 1.0}})) == std::vector<double>{0.5, 0.5});

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> v{u(gen), u(gen), u(gen)};
        const std::size_t n = 1 + trial * 37;
        std::vector<std::vector<double>> pts(n, v);
        CHECK(empirical_mean(empirical_measure::from_points(pts)) == v);
    }
}

TEST_CASE("empirical mean matches a long-double reference") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> z(3.0, 2.0);
    for (std::size_t n : {1u, 7u, 31u, 32u, 33u, 100u, 1000u, 4097u}) {
        std::vector<double> x(n);
        long double ref = 0.0L;
        for (auto& v : x) {
            v = z(gen);
            ref += v;
        }
        ref /= static_cast<long double>(n);
        const auto m = empirical_mean(empirical_measure::from_scalars(x));
        CHECK(std::abs(m[0] - static_cast<double>(ref)) < 1e-13);
    }
}

TEST_CASE("moment_p") {
    CHECK(moment_p(empirical_measure::from_scalars(std::vector<double>{3.0, 4.0}), 2.0) ==
          doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));
    CHECK(moment_p(empirical_measure(5, 3), 1.0) == 0.0);
    CHECK(moment_p(empirical_measure(5, 3), 7.5) == 0.0);
    CHECK(moment_p(empirical_measure::from_points({{3.0, 4.0}}), 1.0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_THROWS_AS(moment_p(empirical_measure(2, 1), 0.5), domain_error);
}

TEST_CASE("empirical measure construction errors") {
    const std::vector<double> five{1, 2, 3, 4, 5};
    CHECK_THROWS_AS(empirical_measure::from_rows(five, 2), shape_error);
    const std::vector<double> bad{1.0, NAN};
    CHECK_THROWS_AS(empirical_measure::from_rows(bad, 1), domain_error);
    CHECK_THROWS_AS(empirical_measure::from_points({{1.0, 2.0}, {1.0}}), shape_error);

    const auto mu = empirical_measure::from_points({{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}});
    CHECK(mu.coord(1)[2] == 6.0);
    CHECK(mu.point(1) == std::vector<double>{3.0, 4.0});
    CHECK(mu.rows() == std::vector<double>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("coefficient evaluation is shape checked") {
    model_spec m = zero_model(2, 3);
    const auto cloud = empirical_measure(4, 2);
    const std::vector<double> mean{0.0, 0.0};
    const measure_view mu(cloud, mean);
    const std::vector<double> x{0.0, 0.0};
    CHECK(eval_drift(m, 0.0, x, mu).size() == 2);
    CHECK(eval_idio(m, 0.0, x, mu).size() == 6);
    CHECK(eval_common(m, 0.0, x, mu).size() == 6);

    m.idio_diffusion = [](double, std::span<const double>, const measure_view&) { return std::vector<double>(5, 0.0); };
    CHECK_THROWS_AS(eval_idio(m, 0.0, x, mu), shape_error);

    m.drift = [](double, std::span<const double>, const measure_view&) { return std::vector<double>{1.0, NAN}; };
    try {
        eval_drift(m, 0.25, x, mu, 3);
        FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
        CHECK(e.time() == 0.25);
        CHECK(e.index() == 3);
    }
    const std::vector<double> short_x{0.0};
    CHECK_THROWS_AS(eval_drift(zero_model(2, 3), 0.0, short_x, mu), shape_error);
}

TEST_CASE("model validation") {
    model_spec m = zero_model(1, 1);
    CHECK_NOTHROW(m.validate());
    m.dim_state = 0;
    CHECK_THROWS(m.validate());
    m = zero_model(1, 1);
    m.drift = nullptr;
    CHECK_THROWS(m.validate());
}

TEST_CASE("sample_increments shapes and determinism") {
    rng_stream a(7, 0), b(7, 0);
    const auto na = sample_increments(a, 3, 2);
    const auto nb = sample_increments(b, 3, 2);
    CHECK(na.particles() == 3);
    CHECK(na.dim_noise() == 2);
    CHECK(na.common().size() == 2);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(na.idio(i, j) == nb.idio(i, j));
    CHECK(na.common()[0] == nb.common()[0]);
    CHECK(na.common()[1] == nb.common()[1]);
    CHECK(a.counter() == 8);

    // Draw layout: particle-major, component fastest, then the common vector.
    const rng_stream fresh(7, 0);
    CHECK(na.idio(1, 0) == fresh.normal_at(2));
    CHECK(na.idio(2, 1) == fresh.normal_at(5));
    CHECK(na.common()[1] == fresh.normal_at(7));
}

TEST_CASE("pooled increments are standard normal") {
    rng_stream s(2024, 99);
    double sum = 0.0, sq = 0.0;
    std::size_t count = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const auto z = sample_increments(s, 499, 2);
        for (std::size_t j = 0; j < 2; ++j)
            for (double v : z.idio_column(j)) {
                sum += v;
                sq += v * v;
                ++count;
            }
        for (double v : z.common()) {
            sum += v;
            sq += v * v;
            ++count;
        }
    }
    REQUIRE(count == 1000000);
    const double mean = sum / count;
    const double var = sq / count - mean * mean;
    CHECK(std::abs(mean) < 0.005);
    CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("sim_config validation") {
    sim_config c;
    c.model = zero_model(1, 1);
    CHECK_NOTHROW(c.validate());
    c.particles = 0;
    CHECK_THROWS(c.validate());
    c.particles = 2;
    c.replications = 0;
    CHECK_THROWS(c.validate());
    c.replications = 1;
    c.initial = point_mass({1.0, 2.0});
    rng_stream s(0, 0);
    CHECK_THROWS_AS(c.sample_initial(s), shape_error);
}
