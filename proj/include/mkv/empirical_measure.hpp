#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mkv {

// Uniformly weighted cloud of N points in R^d. Storage is coordinate-major:
// coordinate k of all particles is contiguous, which is what the step kernels
// stream over.
class empirical_measure {
public:
    // N points at the origin.
    empirical_measure(std::size_t count, std::size_t dim);

    // From row-major N x d data. Throws shape_error / domain_error on bad
    // sizes or non-finite entries.
    static empirical_measure from_rows(std::span<const double> rows, std::size_t dim);
    static empirical_measure from_points(const std::vector<std::vector<double>>& points);
    static empirical_measure from_scalars(std::span<const double> values) { return from_rows(values, 1); }

    std::size_t size() const noexcept { return count_; }
    std::size_t dim() const noexcept { return dim_; }

    std::span<const double> coord(std::size_t k) const {
        return {coords_.data() + k * count_, count_};
    }
    std::span<double> coord(std::size_t k) { return {coords_.data() + k * count_, count_}; }

    double at(std::size_t i, std::size_t k) const { return coords_[k * count_ + i]; }
    double& at(std::size_t i, std::size_t k) { return coords_[k * count_ + i]; }
    std::vector<double> point(std::size_t i) const;
    // Row-major copy (N x d).
    std::vector<double> rows() const;

    bool all_finite() const noexcept;

    friend bool operator==(const empirical_measure&, const empirical_measure&) = default;

private:
    std::size_t count_;
    std::size_t dim_;
    std::vector<double> coords_;
};

// Coordinatewise mean with the fixed-order pairwise sum, shifted by the first
// point; a cloud of identical points returns that point exactly.
std::vector<double> empirical_mean(const empirical_measure& mu);

// ((1/N) sum_i |x_i|^p)^(1/p), Euclidean norm. Throws domain_error for p < 1.
double moment_p(const empirical_measure& mu, double p);

}  // namespace mkv
