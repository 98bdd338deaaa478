#include "mkv/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mkv/errors.hpp"
#include "mkv/simd/kernels.hpp"

namespace mkv {

wasserstein_order::wasserstein_order(double p) : p_(p) {
    if (!(p >= 1.0 && p <= 16.0))
        throw domain_error("Wasserstein order must lie in [1, 16], got " + std::to_string(p));
}

namespace {

void check_sizes(const empirical_measure& x, const empirical_measure& y) {
    if (x.size() != y.size())
        throw shape_error("clouds of different sizes: " + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()));
    if (x.dim() != y.dim()) throw shape_error("clouds of different dimensions");
}

double pair_cost(const empirical_measure& x, std::size_t i, const empirical_measure& y, std::size_t j,
                 double p) {
    double sq = 0.0;
    for (std::size_t k = 0; k < x.dim(); ++k) {
        const double d = x.at(i, k) - y.at(j, k);
        sq += d * d;
    }
    return p == 2.0 ? sq : std::pow(std::sqrt(sq), p);
}

double finish(std::vector<double>& costs, double p) {
    const double mean = simd::pairwise_sum(costs.data(), costs.size()) / static_cast<double>(costs.size());
    return std::pow(mean, 1.0 / p);
}

}  // namespace

double wp_1d(const empirical_measure& x, const empirical_measure& y, wasserstein_order order) {
    check_sizes(x, y);
    if (x.dim() != 1) throw shape_error("wp_1d needs one-dimensional clouds");
    std::vector<double> xs(x.coord(0).begin(), x.coord(0).end());
    std::vector<double> ys(y.coord(0).begin(), y.coord(0).end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double p = order.value();
    std::vector<double> costs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) costs[i] = std::pow(std::fabs(xs[i] - ys[i]), p);
    return finish(costs, p);
}

double wp_pairing_bound(const empirical_measure& x, const empirical_measure& y, wasserstein_order order) {
    check_sizes(x, y);
    const double p = order.value();
    std::vector<double> costs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) costs[i] = pair_cost(x, i, y, i, p);
    return finish(costs, p);
}

double wp_assignment(const empirical_measure& x, const empirical_measure& y, wasserstein_order order,
                     std::size_t max_size) {
    check_sizes(x, y);
    const std::size_t n = x.size();
    if (n > max_size)
        throw domain_error("exact assignment refused for N=" + std::to_string(n) + " above cap " +
                           std::to_string(max_size));
    const double p = order.value();
    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = pair_cost(x, i, y, j, p);
    const auto match = solve_assignment(cost, n);
    std::vector<double> costs(n);
    for (std::size_t i = 0; i < n; ++i) costs[i] = cost[i * n + match[i]];
    return finish(costs, p);
}

std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n) {
    if (cost.size() != n * n) throw shape_error("assignment cost matrix is not n x n");
    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based arrays; column 0 is the virtual start of each augmenting path.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        row_of[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = row_of[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (row_of[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> match(n);
    for (std::size_t j = 1; j <= n; ++j) match[row_of[j] - 1] = j - 1;
    return match;
}

}  // namespace mkv
