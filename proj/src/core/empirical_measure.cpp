#include "mkv/empirical_measure.hpp"

#include <cmath>
#include <string>

#include "mkv/errors.hpp"
#include "mkv/simd/kernels.hpp"

namespace mkv {

empirical_measure::empirical_measure(std::size_t count, std::size_t dim)
    : count_(count), dim_(dim), coords_(count * dim, 0.0) {
    if (count == 0) throw shape_error("empirical measure needs at least one point");
    if (dim == 0) throw shape_error("empirical measure needs dimension >= 1");
}

empirical_measure empirical_measure::from_rows(std::span<const double> rows, std::size_t dim) {
    if (dim == 0 || rows.size() % dim != 0)
        throw shape_error("row data of size " + std::to_string(rows.size()) +
                          " is not a multiple of dimension " + std::to_string(dim));
    empirical_measure mu(rows.size() / dim, dim);
    for (std::size_t i = 0; i < mu.count_; ++i)
        for (std::size_t k = 0; k < dim; ++k) mu.at(i, k) = rows[i * dim + k];
    if (!mu.all_finite()) throw domain_error("empirical measure with non-finite entry");
    return mu;
}

empirical_measure empirical_measure::from_points(const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw shape_error("empirical measure needs at least one point");
    const std::size_t dim = points.front().size();
    std::vector<double> rows;
    rows.reserve(points.size() * dim);
    for (const auto& p : points) {
        if (p.size() != dim) throw shape_error("points of mixed dimension");
        rows.insert(rows.end(), p.begin(), p.end());
    }
    return from_rows(rows, dim);
}

std::vector<double> empirical_measure::point(std::size_t i) const {
    std::vector<double> p(dim_);
    for (std::size_t k = 0; k < dim_; ++k) p[k] = at(i, k);
    return p;
}

std::vector<double> empirical_measure::rows() const {
    std::vector<double> r(count_ * dim_);
    for (std::size_t i = 0; i < count_; ++i)
        for (std::size_t k = 0; k < dim_; ++k) r[i * dim_ + k] = at(i, k);
    return r;
}

bool empirical_measure::all_finite() const noexcept {
    for (double v : coords_)
        if (!std::isfinite(v)) return false;
    return true;
}

std::vector<double> empirical_mean(const empirical_measure& mu) {
    std::vector<double> m(mu.dim());
    const double n = static_cast<double>(mu.size());
    for (std::size_t k = 0; k < mu.dim(); ++k) {
        const auto c = mu.coord(k);
        const double shift = c[0];
        m[k] = shift + simd::pairwise_sum(c.data(), c.size(), shift) / n;
    }
    return m;
}

double moment_p(const empirical_measure& mu, double p) {
    if (!(p >= 1.0)) throw domain_error("moment order must be >= 1, got " + std::to_string(p));
    std::vector<double> terms(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double sq = 0.0;
        for (std::size_t k = 0; k < mu.dim(); ++k) sq += mu.at(i, k) * mu.at(i, k);
        terms[i] = std::pow(std::sqrt(sq), p);
    }
    const double mean = simd::pairwise_sum(terms.data(), terms.size()) / static_cast<double>(mu.size());
    return std::pow(mean, 1.0 / p);
}

}  // namespace mkv
