#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "mkv/errors.hpp"
#include "mkv/harness.hpp"
#include "mkv/simd/kernels.hpp"

namespace mkv::harness {

error_report build_report(std::string id, std::span<const double> abscissa, std::span<const double> values,
                          std::size_t replications, double p, std::size_t drop) {
    if (values.size() != abscissa.size() * replications) throw shape_error("report values do not match the plan");
    error_report rep;
    rep.experiment_id = std::move(id);
    const double r = static_cast<double>(replications);
    for (std::size_t n = 0; n < abscissa.size(); ++n) {
        const double* e = values.data() + n * replications;
        const double mean = simd::pairwise_sum(e, replications) / r;
        double var = 0.0;
        for (std::size_t j = 0; j < replications; ++j) var += (e[j] - mean) * (e[j] - mean);
        var = replications > 1 ? var / (r - 1.0) : 0.0;
        const double err = std::pow(mean, 1.0 / p);
        // d/dm m^{1/p} = m^{1/p - 1} / p
        const double se = mean > 0.0 ? std::sqrt(var / r) * err / (p * mean) : 0.0;
        rep.pairs.push_back({abscissa[n], err, se});
    }

    std::vector<std::pair<double, double>> fit;
    for (std::size_t n = drop; n < rep.pairs.size(); ++n) fit.emplace_back(rep.pairs[n].abscissa, rep.pairs[n].error);
    bool ok = fit.size() >= 2;
    double largest = 0.0;
    for (const auto& [a, v] : fit) {
        ok = ok && v > 0.0;
        largest = std::max(largest, v);
    }
    if (ok && largest > 1e-12) {
        const auto f = fit_loglog_slope(fit);
        rep.slope = f.slope;
        rep.intercept = f.intercept;
    } else {
        rep.slope = std::numeric_limits<double>::quiet_NaN();
        rep.intercept = std::numeric_limits<double>::quiet_NaN();
        rep.slope_fitted = false;
    }
    return rep;
}

void write_report_csv(const error_report& rep, std::ostream& out) {
    char buf[256];
    out << "experiment,abscissa,error,stderr\n";
    for (const auto& pt : rep.pairs) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", rep.experiment_id.c_str(), pt.abscissa,
                      pt.error, pt.std_error);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "# slope=%.17g\n# intercept=%.17g\n", rep.slope, rep.intercept);
    out << buf;
}

std::string report_csv(const error_report& rep) {
    std::ostringstream s;
    write_report_csv(rep, s);
    return s.str();
}

}  // namespace mkv::harness
