#include <cmath>
#include <limits>

#include "mkv/errors.hpp"
#include "mkv/harness.hpp"

namespace mkv::harness {

loglog_fit fit_loglog_slope(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 2) throw domain_error("slope fit needs at least two points");
    double sx = 0.0, sy = 0.0;
    for (const auto& [a, v] : pairs) {
        if (!(a > 0.0) || !(v > 0.0) || !std::isfinite(a) || !std::isfinite(v))
            throw domain_error("slope fit needs positive finite abscissae and values");
        sx += std::log(a);
        sy += std::log(v);
    }
    const double n = static_cast<double>(pairs.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [a, v] : pairs) {
        const double dx = std::log(a) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(v) - my);
    }
    if (!(sxx > 0.0)) throw domain_error("slope fit needs at least two distinct abscissae");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace mkv::harness
