#include "mkv/kde.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "mkv/errors.hpp"
#include "mkv/simd/kernels.hpp"

namespace mkv {

void uniform_grid::validate() const {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw domain_error("grid needs finite lo < hi");
    if (points < 2) throw domain_error("grid needs at least 2 points");
}

std::vector<double> uniform_grid::nodes() const {
    validate();
    std::vector<double> x(points);
    const double span = hi - lo;
    for (std::size_t g = 0; g < points; ++g)
        x[g] = lo + span * static_cast<double>(g) / static_cast<double>(points - 1);
    x.back() = hi;
    return x;
}

double kernel_order5(double x) noexcept {
    const double x2 = x * x;
    return (15.0 - 10.0 * x2 + x2 * x2) / 8.0 * std::exp(-0.5 * x2) / std::sqrt(2.0 * std::numbers::pi);
}

double bandwidth(std::size_t n, int order) {
    if (n == 0) throw domain_error("bandwidth needs N >= 1");
    if (order < 1) throw domain_error("kernel order must be positive");
    return std::pow(static_cast<double>(n), -1.0 / (2.0 * (order + 1) + 1.0));
}

void kde_config::validate() const {
    if (kernel_order != 5) throw domain_error("only the order-5 Gaussian-based kernel is implemented");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw domain_error("bandwidth must be positive");
    grid.validate();
}

std::vector<double> kde_evaluate(std::span<const double> samples, const kde_config& config) {
    config.validate();
    if (samples.empty()) throw domain_error("kde_evaluate needs at least one sample");
    const auto x = config.grid.nodes();
    std::vector<double> out(x.size());
    simd::active_kernels().kde_accumulate(samples.data(), samples.size(), x.data(), x.size(),
                                          1.0 / config.eta, out.data());
    const double norm = 1.0 / (static_cast<double>(samples.size()) * config.eta);
    for (double& v : out) v *= norm;
    return out;
}

void write_density_csv(std::ostream& out, std::span<const double> x, std::span<const double> values) {
    if (x.size() != values.size()) throw shape_error("density grid and values differ in length");
    out << "x,value\n";
    char buf[64];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x[i], values[i]);
        out << buf;
    }
}

void write_density_csv(const std::string& path, std::span<const double> x, std::span<const double> values) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_density_csv(out, x, values);
}

}  // namespace mkv
