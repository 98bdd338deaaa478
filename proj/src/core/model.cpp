#include "mkv/model.hpp"

#include <cmath>

#include "mkv/errors.hpp"

namespace mkv {

void model_spec::validate() const {
    if (dim_state == 0 || dim_noise == 0) throw shape_error("model " + name + ": zero dimension");
    if (!drift || !idio_diffusion || !common_diffusion)
        throw domain_error("model " + name + ": missing coefficient function");
    if (!(holder_rho > 0.0 && holder_rho <= 1.0))
        throw domain_error("model " + name + ": Hoelder exponent must lie in (0, 1]");
    if (lipschitz_L && *lipschitz_L < 0.0)
        throw domain_error("model " + name + ": Lipschitz constant must be nonnegative");
    if (affine && dim_noise != dim_state)
        throw shape_error("model " + name + ": affine fast path requires q == d");
}

namespace {

std::vector<double> checked(const model_spec& m, const char* what, std::vector<double> v,
                            std::size_t expected, double t, long particle) {
    if (v.size() != expected)
        throw shape_error("model " + m.name + ": " + what + " returned " + std::to_string(v.size()) +
                          " entries, expected " + std::to_string(expected));
    for (double e : v)
        if (!std::isfinite(e))
            throw numerical_error("model " + m.name + ": non-finite " + what + " at t=" +
                                      std::to_string(t) + ", particle " + std::to_string(particle),
                                  t, particle);
    return v;
}

void check_point(const model_spec& m, std::span<const double> x, const measure_view& mu) {
    if (x.size() != m.dim_state || mu.cloud().dim() != m.dim_state)
        throw shape_error("model " + m.name + ": state has dimension " + std::to_string(x.size()) +
                          ", expected " + std::to_string(m.dim_state));
}

}  // namespace

std::vector<double> eval_drift(const model_spec& m, double t, std::span<const double> x,
                               const measure_view& mu, long particle) {
    check_point(m, x, mu);
    return checked(m, "drift", m.drift(t, x, mu), m.dim_state, t, particle);
}

std::vector<double> eval_idio(const model_spec& m, double t, std::span<const double> x,
                              const measure_view& mu, long particle) {
    check_point(m, x, mu);
    return checked(m, "idiosyncratic diffusion", m.idio_diffusion(t, x, mu),
                   m.dim_state * m.dim_noise, t, particle);
}

std::vector<double> eval_common(const model_spec& m, double t, std::span<const double> x,
                                const measure_view& mu, long particle) {
    check_point(m, x, mu);
    return checked(m, "common diffusion", m.common_diffusion(t, x, mu),
                   m.dim_state * m.dim_noise, t, particle);
}

model_spec zero_model(std::size_t d, std::size_t q) {
    model_spec m;
    m.name = "zero";
    m.dim_state = d;
    m.dim_noise = q;
    m.drift = [d](double, std::span<const double>, const measure_view&) { return std::vector<double>(d, 0.0); };
    auto zero_matrix = [d, q](double, std::span<const double>, const measure_view&) {
        return std::vector<double>(d * q, 0.0);
    };
    m.idio_diffusion = zero_matrix;
    m.common_diffusion = zero_matrix;
    m.dependence = measure_dependence::none;
    return m;
}

}  // namespace mkv

#include "mkv/sim_config.hpp"

namespace mkv {

initial_sampler point_mass(std::vector<double> x0) {
    return [x0 = std::move(x0)](rng_stream&, std::size_t count, std::size_t dim) {
        if (x0.size() != dim)
            throw shape_error("initial point has dimension " + std::to_string(x0.size()) +
                              ", model expects " + std::to_string(dim));
        empirical_measure mu(count, dim);
        for (std::size_t k = 0; k < dim; ++k)
            for (double& v : mu.coord(k)) v = x0[k];
        return mu;
    };
}

void sim_config::validate() const {
    model.validate();
    if (particles < 1) throw domain_error("particles_N must be >= 1");
    if (replications < 1) throw domain_error("replications_R must be >= 1");
}

empirical_measure sim_config::sample_initial(rng_stream& stream) const {
    empirical_measure mu = initial ? initial(stream, particles, model.dim_state)
                                   : empirical_measure(particles, model.dim_state);
    if (mu.size() != particles || mu.dim() != model.dim_state)
        throw shape_error("initial sampler returned a cloud of the wrong shape");
    if (!mu.all_finite()) throw domain_error("initial sampler returned non-finite points");
    return mu;
}

}  // namespace mkv
