#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mkv/empirical_measure.hpp"

namespace mkv {

// Order p of the Wasserstein distance, restricted to [1, 16] so |x|^p stays finite.
class wasserstein_order {
public:
    explicit wasserstein_order(double p);
    double value() const noexcept { return p_; }

private:
    double p_;
};

inline constexpr std::size_t default_assignment_cap = 12;

// Exact W_p between two 1-D clouds of equal size via sorted (monotone) pairing.
double wp_1d(const empirical_measure& x, const empirical_measure& y, wasserstein_order p);

// Exact W_p between equal-size clouds in any dimension by solving the optimal
// assignment. Refuses N above max_size.
double wp_assignment(const empirical_measure& x, const empirical_measure& y, wasserstein_order p,
                     std::size_t max_size = default_assignment_cap);

// Index-wise coupling x_i <-> y_i; an upper bound on W_p.
double wp_pairing_bound(const empirical_measure& x, const empirical_measure& y, wasserstein_order p);

// Minimum-cost perfect matching on a dense n x n row-major cost matrix
// (Hungarian method with potentials). Returns the column assigned to each row.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n);

}  // namespace mkv
