#include "mkv/models/probe_models.hpp"

#include <cmath>

namespace mkv::models {

namespace {

model_spec scalar_model(std::string name, simd::affine_coeffs c) {
    model_spec m;
    m.name = std::move(name);
    m.dim_state = 1;
    m.dim_noise = 1;
    m.dependence = measure_dependence::none;
    m.drift = [c](double, std::span<const double> x, const measure_view&) {
        return std::vector<double>{c.drift_x * x[0] + c.drift_const};
    };
    m.idio_diffusion = [c](double, std::span<const double> x, const measure_view&) {
        return std::vector<double>{c.idio_x * x[0] + c.idio_const};
    };
    m.common_diffusion = [](double, std::span<const double>, const measure_view&) { return std::vector<double>{0.0}; };
    m.affine = [c](double) { return c; };
    return m;
}

}  // namespace

probe_model gbm_probe(double x0, double vol) {
    simd::affine_coeffs c;
    c.idio_x = vol;
    probe_model p{scalar_model("gbm", c), {x0}, nullptr, false};
    p.exact = [vol](double t, std::span<const double> x, std::span<const double> w, std::span<const double>) {
        return std::vector<double>{x[0] * std::exp(vol * w[0] - 0.5 * vol * vol * t)};
    };
    return p;
}

probe_model linear_ode_probe(double x0, double rate) {
    simd::affine_coeffs c;
    c.drift_x = -rate;
    probe_model p{scalar_model("linear_ode", c), {x0}, nullptr, false};
    p.exact = [rate](double t, std::span<const double> x, std::span<const double>, std::span<const double>) {
        return std::vector<double>{x[0] * std::exp(-rate * t)};
    };
    return p;
}

probe_model constant_probe(double x0, double drift, double vol) {
    simd::affine_coeffs c;
    c.drift_const = drift;
    c.idio_const = vol;
    probe_model p{scalar_model("constant", c), {x0}, nullptr, true};
    p.exact = [drift, vol](double t, std::span<const double> x, std::span<const double> w, std::span<const double>) {
        return std::vector<double>{x[0] + drift * t + vol * w[0]};
    };
    return p;
}

}  // namespace mkv::models
