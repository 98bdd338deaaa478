#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mkv/empirical_measure.hpp"
#include "mkv/simd/kernels.hpp"

namespace mkv {

// How a model reads its measure argument. Models that only need the mean get
// it precomputed once per step instead of rescanning the cloud per particle.
enum class measure_dependence { none, mean, full };

// The measure argument handed to coefficient functions: the pre-step cloud plus
// its mean, computed once per step.
class measure_view {
public:
    measure_view(const empirical_measure& cloud, std::span<const double> mean)
        : cloud_(&cloud), mean_(mean) {}

    const empirical_measure& cloud() const noexcept { return *cloud_; }
    std::span<const double> mean() const noexcept { return mean_; }

private:
    const empirical_measure* cloud_;
    std::span<const double> mean_;
};

// drift: d entries. Diffusions: d x q entries, row-major.
using coefficient_fn =
    std::function<std::vector<double>(double t, std::span<const double> x, const measure_view& mu)>;

// Optional closed-form description used by the vectorised stepper. Only valid
// for q == d with diagonal diffusions; coordinate k of the drift reads only
// coordinate k of the state and of the mean.
using affine_fn = std::function<simd::affine_coeffs(double t)>;

struct model_spec {
    std::string name;
    std::size_t dim_state = 1;
    std::size_t dim_noise = 1;
    coefficient_fn drift;
    coefficient_fn idio_diffusion;
    coefficient_fn common_diffusion;
    measure_dependence dependence = measure_dependence::full;
    std::optional<affine_fn> affine;

    // Regularity metadata; never used in computations.
    double holder_rho = 1.0;
    std::optional<double> lipschitz_L;

    // Throws shape_error / domain_error if the declaration is inconsistent.
    void validate() const;
};

// Checked coefficient evaluation: output length and finiteness are verified
// against the declared (d, q). Non-finite values raise numerical_error with
// (t, particle); wrong shapes raise shape_error.
std::vector<double> eval_drift(const model_spec& m, double t, std::span<const double> x,
                               const measure_view& mu, long particle = -1);
std::vector<double> eval_idio(const model_spec& m, double t, std::span<const double> x,
                              const measure_view& mu, long particle = -1);
std::vector<double> eval_common(const model_spec& m, double t, std::span<const double> x,
                                const measure_view& mu, long particle = -1);

// Model with every coefficient identically zero.
model_spec zero_model(std::size_t dim_state, std::size_t dim_noise);

}  // namespace mkv
