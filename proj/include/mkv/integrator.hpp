#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mkv/empirical_measure.hpp"
#include "mkv/model.hpp"
#include "mkv/noise.hpp"
#include "mkv/rng.hpp"
#include "mkv/sim_config.hpp"
#include "mkv/simd/kernels.hpp"
#include "mkv/time_grid.hpp"

namespace mkv {

struct particle_state {
    std::size_t step = 0;
    empirical_measure cloud;
};

struct step_options {
    // Use the model's affine description when it has one.
    bool use_affine = true;
    // Kernel table for the affine path; nullptr selects the process default.
    const simd::kernel_table* kernels = nullptr;
    // Generic path only: called per particle with the common draw it consumed.
    std::function<void(std::size_t particle, std::span<const double> common_draw)> on_common;
};

// One Euler step of the interacting particle system. Every coefficient is
// evaluated on the pre-step cloud and its empirical measure.
particle_state euler_particle_step(const particle_state& state, const model_spec& model,
                                   const time_grid& grid, const noise_increments& noise,
                                   const step_options& opts = {});

struct trajectory_bundle {
    time_grid grid = time_grid::empty();
    std::size_t particles = 0;
    std::size_t dim_state = 0;
    std::size_t dim_noise = 0;
    // N x (M+1) x d, row-major; empty unless record_mode::full_trajectories.
    std::vector<double> particle_paths;
    empirical_measure initial_cloud{1, 1};
    empirical_measure terminal_cloud{1, 1};
    // (M+1) x q cumulative common Brownian motion W0 at the nodes.
    std::vector<double> common_path;
    // M x q common draws Z0 in step order.
    std::vector<double> common_draws;
    // (M+1) x d empirical mean at each node.
    std::vector<double> mean_path;

    bool has_paths() const noexcept { return !particle_paths.empty(); }
    double path(std::size_t i, std::size_t m, std::size_t k) const {
        return particle_paths[(i * (grid.steps() + 1) + m) * dim_state + k];
    }
};

trajectory_bundle simulate_particle_system(const sim_config& config, rng_stream& stream,
                                           const step_options& opts = {});

// Process driven by exactly the increments the particle system consumes.
class coupled_reference {
public:
    virtual ~coupled_reference() = default;
    virtual void reset(const empirical_measure& initial, const time_grid& grid) = 0;
    // Moves from t_m to t_{m+1} with the step-m noise.
    virtual void advance(std::size_t m, const noise_increments& noise) = 0;
    virtual const empirical_measure& state() const = 0;
};

// The particle scheme of a given model used as its own reference.
class scheme_reference final : public coupled_reference {
public:
    explicit scheme_reference(model_spec model, step_options opts = {})
        : model_(std::move(model)), opts_(std::move(opts)) {}

    void reset(const empirical_measure& initial, const time_grid& grid) override;
    void advance(std::size_t m, const noise_increments& noise) override;
    const empirical_measure& state() const override { return state_.cloud; }

private:
    model_spec model_;
    step_options opts_;
    const time_grid* grid_ = nullptr;
    particle_state state_{0, empirical_measure(1, 1)};
};

struct coupled_run {
    trajectory_bundle particles;
    // N x (M+1) x d, row-major; only for record_mode::full_trajectories.
    std::vector<double> reference_paths;
    // Per particle: max over m = 1..M of |X_m - ref_m|^2.
    std::vector<double> sup_sq_error;
};

coupled_run simulate_coupled_pair(const sim_config& config, coupled_reference& reference,
                                  rng_stream& stream, const step_options& opts = {});

// Binary dump: "MKV1", then d, q, N, M as uint32 and T as float64, all
// little-endian; then particle paths N x (M+1) x d row-major and the common path
// (M+1) x q, both float64.
void write_trajectory_dump(const trajectory_bundle& bundle, std::ostream& out);
void write_trajectory_dump(const trajectory_bundle& bundle, const std::string& path);

struct trajectory_dump {
    std::uint32_t dim_state = 0;
    std::uint32_t dim_noise = 0;
    std::uint32_t particles = 0;
    std::uint32_t steps = 0;
    double horizon = 0.0;
    std::vector<double> particle_paths;
    std::vector<double> common_path;
};

trajectory_dump read_trajectory_dump(std::istream& in);

}  // namespace mkv
