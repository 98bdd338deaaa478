#include "mkv/models/cond_ou.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "mkv/errors.hpp"

namespace mkv::models {

void cond_ou_params::validate(bool allow_degenerate) const {
    if (dim == 0) throw domain_error("cond_ou: dim must be >= 1");
    if (x0.size() != dim) throw shape_error("cond_ou: x0 has " + std::to_string(x0.size()) + " entries, dim is " + std::to_string(dim));
    for (double v : x0)
        if (!std::isfinite(v)) throw domain_error("cond_ou: x0 must be finite");
    if (!std::isfinite(sigma) || !std::isfinite(sigma0)) throw domain_error("cond_ou: sigmas must be finite");
    if (allow_degenerate ? sigma < 0.0 : !(sigma > 0.0)) throw domain_error("cond_ou: sigma must be positive");
    if (sigma0 < 0.0) throw domain_error("cond_ou: sigma0 must be nonnegative");
}

model_spec cond_ou_model(const cond_ou_params& p) {
    p.validate(true);
    const std::size_t d = p.dim;
    model_spec m;
    m.name = "cond_ou";
    m.dim_state = d;
    m.dim_noise = d;
    m.dependence = measure_dependence::mean;
    m.drift = [d](double, std::span<const double> x, const measure_view& mu) {
        std::vector<double> b(d);
        for (std::size_t k = 0; k < d; ++k) b[k] = -(x[k] - mu.mean()[k]);
        return b;
    };
    auto diagonal = [d](double s) {
        return [d, s](double, std::span<const double>, const measure_view&) {
            std::vector<double> a(d * d, 0.0);
            for (std::size_t k = 0; k < d; ++k) a[k * d + k] = s;
            return a;
        };
    };
    m.idio_diffusion = diagonal(p.sigma);
    m.common_diffusion = diagonal(p.sigma0);
    m.affine = [s = p.sigma, s0 = p.sigma0](double) {
        simd::affine_coeffs c;
        c.drift_x = -1.0;
        c.drift_mean = 1.0;
        c.idio_const = s;
        c.common_const = s0;
        return c;
    };
    m.holder_rho = 1.0;
    m.lipschitz_L = 2.0;
    return m;
}

std::vector<double> cond_ou_exact_path(const cond_ou_params& p, std::span<const double> idio,
                                       std::span<const double> common, const time_grid& grid) {
    p.validate(true);
    const std::size_t d = p.dim;
    const std::size_t steps = grid.steps();
    if (idio.size() != steps * d || common.size() != steps * d)
        throw shape_error("cond_ou_exact_path: increments must be M x d = " + std::to_string(steps) + " x " +
                          std::to_string(d));
    const double decay = std::exp(-grid.step());
    const double sh = grid.sqrt_step();
    std::vector<double> path((steps + 1) * d);
    std::vector<double> integral(d, 0.0), w0(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) path[k] = p.x0[k];
    for (std::size_t m = 0; m < steps; ++m) {
        const double damp = std::exp(-grid.node(m + 1));
        for (std::size_t k = 0; k < d; ++k) {
            integral[k] = decay * (integral[k] + sh * idio[m * d + k]);
            w0[k] += sh * common[m * d + k];
            path[(m + 1) * d + k] = damp * p.x0[k] + p.sigma * integral[k] + p.sigma0 * w0[k];
        }
    }
    return path;
}

double cond_ou_conditional_variance(double sigma, double t) {
    return sigma * sigma * (-std::expm1(-2.0 * t)) / 2.0;
}

double cond_ou_true_density(const cond_ou_params& p, double t, double w0, double x) {
    if (p.dim != 1) throw shape_error("cond_ou_true_density is defined for d = 1");
    if (!(t > 0.0)) throw domain_error("cond_ou_true_density needs t > 0");
    if (!(p.sigma > 0.0)) throw domain_error("cond_ou_true_density needs sigma > 0");
    const double mean = std::exp(-t) * p.x0[0] + p.sigma0 * w0;
    const double var = cond_ou_conditional_variance(p.sigma, t);
    const double z = x - mean;
    return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

cond_ou_exact_reference::cond_ou_exact_reference(cond_ou_params params) : params_(std::move(params)) {
    params_.validate(true);
    static std::atomic<bool> warned{false};
    for (double v : params_.x0)
        if (v != 0.0) {
            if (!warned.exchange(true)) std::clog << "mkv: cond_ou closed form is exact only for x0 = 0\n";
            break;
        }
}

void cond_ou_exact_reference::reset(const empirical_measure& initial, const time_grid& grid) {
    if (initial.dim() != params_.dim) throw shape_error("cond_ou reference: dimension mismatch");
    grid_ = &grid;
    decay_ = std::exp(-grid.step());
    integral_.assign(initial.size() * params_.dim, 0.0);
    common_.assign(params_.dim, 0.0);
    state_ = empirical_measure(initial.size(), params_.dim);
    for (std::size_t k = 0; k < params_.dim; ++k)
        for (double& v : state_.coord(k)) v = params_.x0[k];
}

void cond_ou_exact_reference::advance(std::size_t m, const noise_increments& noise) {
    if (!grid_) throw domain_error("cond_ou reference used before reset");
    const std::size_t n = state_.size();
    const std::size_t d = params_.dim;
    if (noise.particles() != n || noise.dim_noise() != d) throw shape_error("cond_ou reference: noise shape mismatch");
    const double sh = grid_->sqrt_step();
    const double damp = std::exp(-grid_->node(m + 1));
    for (std::size_t k = 0; k < d; ++k) {
        common_[k] += sh * noise.common()[k];
        const double start = damp * params_.x0[k];
        const double shared = params_.sigma0 * common_[k];
        const auto z = noise.idio_column(k);
        auto x = state_.coord(k);
        double* in = integral_.data() + k * n;
        for (std::size_t i = 0; i < n; ++i) {
            in[i] = decay_ * (in[i] + sh * z[i]);
            x[i] = (start + params_.sigma * in[i]) + shared;
        }
    }
}

}  // namespace mkv::models
