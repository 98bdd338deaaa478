#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mkv {

struct uniform_grid {
    double lo = -3.0;
    double hi = 3.0;
    std::size_t points = 601;

    void validate() const;
    std::vector<double> nodes() const;
};

// Gaussian-based kernel of order 5: (15 - 10x^2 + x^4) phi(x) / 8.
double kernel_order5(double x) noexcept;

// eta = N^{-1 / (2(l+1)+1)}; N^{-1/13} for the order-5 kernel.
double bandwidth(std::size_t n, int order = 5);

struct kde_config {
    int kernel_order = 5;
    double eta = 1.0;
    uniform_grid grid;

    void validate() const;
};

// Order-5 kernel density estimate on the config grid. Values may be negative.
std::vector<double> kde_evaluate(std::span<const double> samples, const kde_config& config);

// Two-column CSV "x,value".
void write_density_csv(std::ostream& out, std::span<const double> x, std::span<const double> values);
void write_density_csv(const std::string& path, std::span<const double> x, std::span<const double> values);

}  // namespace mkv
