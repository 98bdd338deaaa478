#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mkv/kde.hpp"
#include "mkv/models/cond_ou.hpp"
#include "mkv/models/interbank.hpp"
#include "mkv/models/probe_models.hpp"
#include "mkv/time_grid.hpp"

namespace mkv::harness {

// Stream-id tags; one per experiment family so their draws never overlap.
enum class experiment_tag : std::uint32_t {
    ou_strong = 1,
    ou_density = 2,
    interbank = 3,
    temporal = 4,
    simulate = 5,
};

struct experiment_plan {
    std::vector<std::size_t> n_values;
    std::size_t replications = 30;
    std::uint64_t seed = 0;
    time_grid grid{1.0, 100};
    // Exponent of the strong error (ou-converge, probe-temporal).
    double wasserstein_p = 2.0;
    // Number of smallest-N points left out of the slope fit.
    std::size_t burn_in_drop = 0;

    void validate() const;
};

// {2^lo, ..., 2^hi}
std::vector<std::size_t> powers_of_two(int lo, int hi);

struct execution {
    int threads = 1;
};

struct error_point {
    double abscissa;
    double error;
    double std_error;
};

struct error_report {
    std::string experiment_id;
    std::vector<error_point> pairs;
    double slope = 0.0;
    double intercept = 0.0;
    // False when the fit was skipped (errors at rounding level or nonpositive).
    bool slope_fitted = true;
};

struct loglog_fit {
    double slope;
    double intercept;
};

// Least squares of log(value) on log(abscissa). Needs >= 2 pairs, all positive.
loglog_fit fit_loglog_slope(std::span<const std::pair<double, double>> pairs);

// Aggregates per-replication values e_{n,j} into error = (mean_j e)^{1/p} with a
// delta-method standard error, then fits the slope over all points except the
// first `drop`.
error_report build_report(std::string id, std::span<const double> abscissa,
                          std::span<const double> values, std::size_t replications, double p,
                          std::size_t drop = 0);

// CSV: header "experiment,abscissa,error,stderr", one row per pair, then
// "# slope=<v>" and "# intercept=<v>". Numbers use %.17g so reruns are byte-stable.
void write_report_csv(const error_report& report, std::ostream& out);
std::string report_csv(const error_report& report);

// Strong error of the particle method against the closed-form solution on the
// same Brownian paths:
//   eps_N^p = (1/R) sum_j (1/N) sum_i max_{1<=m<=M} |X^{i,N,j}_m - X^{i,j}_m|^p.
error_report ou_strong_error(const experiment_plan& plan, const models::cond_ou_params& params,
                             const execution& exec = {});
// Inner term (1/N) sum_i max_m |.|^p of one (N, replication) cell.
double ou_strong_cell(const experiment_plan& plan, const models::cond_ou_params& params,
                      std::size_t n_index, std::size_t replication);

struct density_cell_result {
    double sup_sq_error;
    double terminal_common;
    std::vector<double> grid;
    std::vector<double> estimate;
    std::vector<double> truth;
};

// Sup-norm error of the order-5 KDE at time T against the conditional density
// given the replication's own W0_T:  E_N^2 = (1/R) sum_j max_x |est - truth|^2.
error_report density_sup_error(const experiment_plan& plan, const models::cond_ou_params& params,
                               const uniform_grid& grid, const execution& exec = {});
density_cell_result density_cell(const experiment_plan& plan, const models::cond_ou_params& params,
                                 const uniform_grid& grid, std::size_t n_index, std::size_t replication);

// Mean-field error of the interbank particle mean against the Euler path of
// the limiting market state on the same common draws:
//   E_N^2 = (1/R) sum_j max_{1<=m<=M} |mean_m - Xbar_m|^2.
error_report interbank_error(const experiment_plan& plan, const models::interbank_params& params,
                             const execution& exec = {});
double interbank_cell(const experiment_plan& plan, const models::interbank_params& params,
                      std::size_t n_index, std::size_t replication);

struct interbank_trace {
    std::vector<double> particle_mean;  // M + 1
    std::vector<double> macro;          // M + 1
    // sigma sqrt(1 - rho^2) (1/N) sum_i W^i_{t_m}, rebuilt from the stream.
    std::vector<double> idio_average;   // M + 1
};

// One replication with the idiosyncratic Brownian average reconstructed from
// the counter-based stream, for checking the residual identity.
interbank_trace interbank_instrumented(const experiment_plan& plan, const models::interbank_params& params,
                                       std::size_t n_index, std::size_t replication);

// Strong terminal error against the explicit solution for each h, with all
// coarse grids driven by sums of the finest grid's increments. Uses
// plan.n_values.front() independent paths per replication and plan.grid's
// horizon; every T/h must be an integer dividing the finest step count.
error_report temporal_order_probe(const models::probe_model& probe, std::span<const double> h_values,
                                  const experiment_plan& plan, const execution& exec = {});

}  // namespace mkv::harness
