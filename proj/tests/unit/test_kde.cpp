#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mkv/errors.hpp"
#include "mkv/kde.hpp"

using namespace mkv;

namespace {

double trapezoid(double lo, double hi, std::size_t n, auto f) {
    const double dx = (hi - lo) / static_cast<double>(n - 1);
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += (k == 0 || k + 1 == n ? 0.5 : 1.0) * f(lo + dx * k);
    return s * dx;
}

kde_config config(double eta, double lo, double hi, std::size_t points) {
    kde_config c;
    c.eta = eta;
    c.grid = {lo, hi, points};
    return c;
}

}  // namespace

TEST_CASE("order-5 kernel values") {
    CHECK(kernel_order5(0.0) == doctest::Approx(0.7480168).epsilon(1e-7));
    CHECK(kernel_order5(0.0) == doctest::Approx(15.0 / (8.0 * std::sqrt(2.0 * M_PI))).epsilon(1e-15));
    for (double x = 0.0; x < 15.0; x += 0.173) CHECK(kernel_order5(x) == kernel_order5(-x));
    CHECK(kernel_order5(2.0) < 0.0);
}

TEST_CASE("order-5 kernel moments") {
    CHECK(std::abs(trapezoid(-10.0, 10.0, 100001, kernel_order5) - 1.0) < 1e-8);
    for (int j = 1; j <= 5; ++j) {
        const double m = trapezoid(-10.0, 10.0, 100001, [j](double x) { return std::pow(x, j) * kernel_order5(x); });
        CHECK(std::abs(m) < 1e-8);
    }
}

TEST_CASE("bandwidth rule") {
    CHECK(bandwidth(1) == 1.0);
    CHECK(bandwidth(1024) == doctest::Approx(0.58670).epsilon(1e-4));
    CHECK(bandwidth(1024) == doctest::Approx(std::exp2(-10.0 / 13.0)).epsilon(1e-15));
    CHECK(bandwidth(8192) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(bandwidth(0), domain_error);
}

TEST_CASE("kde config validation") {
    CHECK_NOTHROW(config(0.5, -3, 3, 601).validate());
    CHECK_THROWS_AS(config(0.0, -3, 3, 601).validate(), domain_error);
    CHECK_THROWS_AS(config(0.5, 3, -3, 601).validate(), domain_error);
    CHECK_THROWS_AS(config(0.5, -3, 3, 1).validate(), domain_error);
    auto c = config(0.5, -3, 3, 601);
    c.kernel_order = 3;
    CHECK_THROWS_AS(c.validate(), domain_error);
    const std::vector<double> none;
    CHECK_THROWS(kde_evaluate(none, config(0.5, -3, 3, 601)));
}

TEST_CASE("default grid") {
    const uniform_grid g;
    const auto x = g.nodes();
    REQUIRE(x.size() == 601);
    CHECK(x.front() == -3.0);
    CHECK(x.back() == 3.0);
    CHECK(x[300] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("single sample reproduces the kernel") {
    const std::vector<double> s{0.0};
    const auto c = config(1.0, -4.0, 4.0, 161);
    const auto est = kde_evaluate(s, c);
    const auto x = c.grid.nodes();
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(est[k] == doctest::Approx(kernel_order5(x[k])).epsilon(1e-13).scale(1e-16));
}

TEST_CASE("estimate matches direct summation") {
    std::mt19937_64 gen(31);
    std::normal_distribution<double> z(0.2, 0.5);
    std::vector<double> s(777);
    for (auto& v : s) v = z(gen);
    const auto c = config(0.37, -3.0, 3.0, 601);
    const auto est = kde_evaluate(s, c);
    const auto x = c.grid.nodes();
    for (std::size_t k = 0; k < x.size(); k += 7) {
        long double direct = 0.0L;
        for (double v : s) direct += kernel_order5((x[k] - v) / 0.37);
        direct /= s.size() * 0.37L;
        CHECK(est[k] == doctest::Approx(static_cast<double>(direct)).epsilon(1e-12).scale(1e-14));
    }
}

TEST_CASE("duplicating samples leaves the estimate unchanged") {
    std::mt19937_64 gen(32);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> s(100);
    for (auto& v : s) v = z(gen);
    auto doubled = s;
    doubled.insert(doubled.end(), s.begin(), s.end());
    const auto c = config(0.4, -3, 3, 301);
    const auto a = kde_evaluate(s, c), b = kde_evaluate(doubled, c);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-13).scale(1e-15));
}

TEST_CASE("estimate integrates to one") {
    std::mt19937_64 gen(33);
    std::normal_distribution<double> z(0.0, 0.3);
    std::vector<double> s(300);
    for (auto& v : s) v = z(gen);
    const double eta = 0.3;
    const double lo = *std::min_element(s.begin(), s.end()) - 10 * eta;
    const double hi = *std::max_element(s.begin(), s.end()) + 10 * eta;
    const auto c = config(eta, lo, hi, 4001);
    const auto est = kde_evaluate(s, c);
    const double dx = (hi - lo) / 4000.0;
    double integral = 0.0;
    for (std::size_t k = 0; k < est.size(); ++k) integral += (k == 0 || k + 1 == est.size() ? 0.5 : 1.0) * est[k] * dx;
    CHECK(std::abs(integral - 1.0) < 1e-6);
}

TEST_CASE("translation equivariance") {
    std::mt19937_64 gen(34);
    std::normal_distribution<double> z(0.0, 0.5);
    std::vector<double> s(200);
    for (auto& v : s) v = z(gen);
    const auto c = config(0.5, -3, 3, 601);
    const double shift = 0.25;  // 25 grid steps
    auto moved = s;
    for (auto& v : moved) v += shift;
    const auto a = kde_evaluate(s, c), b = kde_evaluate(moved, c);
    for (std::size_t k = 0; k + 25 < a.size(); ++k) CHECK(b[k + 25] == doctest::Approx(a[k]).epsilon(1e-10).scale(1e-12));
}

TEST_CASE("density csv") {
    std::ostringstream out;
    const std::vector<double> x{-1.0, 0.5}, v{0.25, -1e-3};
    write_density_csv(out, x, v);
    CHECK(out.str() == "x,value\n-1,0.25\n0.5,-0.001\n");
    CHECK_THROWS(write_density_csv(out, x, std::vector<double>{1.0}));
}
