#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scc/cubic_solver.hpp"
#include "scc/curvature.hpp"
#include "scc/linalg.hpp"
#include "scc/problems.hpp"

namespace scc {

struct RunConfig {
    // cubic parameter: fixed value, or the starting value in adaptive mode
    double rho = 1.0;
    bool adaptive = false;
    double eta = 0.1;       // acceptance threshold, accept iff ratio >= eta
    double rho_inc = 2.0;   // multiplier on poor agreement
    double rho_dec = 0.5;   // multiplier on strong agreement (ratio >= 0.75)
    double rho_min = 1e-8;

    int64_t max_iters = 100;
    double grad_tol = 1e-8;  // 0 disables the tolerance stop in practice
    double eig_tol = 1e-6;

    InitStrategy init = InitStrategy::scaled_identity(1.0);
    uint64_t seed = 0;
    Vector x0;  // empty = origin

    std::optional<double> max_step_norm;
    double curvature_ridge = 0.0;

    bool record_mu = true;        // per-row mu_rho needs a true Hessian eig
    bool record_iterates = false;
    double min_step_ms = 0.0;     // pacing floor, for threaded-mode experiments

    void validate() const;
};

struct IterRecord {
    int64_t t = 0;
    double f = 0.0;
    double grad_norm = 0.0;
    double mu_rho = 0.0;  // NaN when not recorded
    double rho = 0.0;
    int64_t tau_obs = 0;  // staleness of the curvature used this step
    bool accepted = true;
    double accept_ratio = 0.0;  // NaN in fixed mode
    double step_norm = 0.0;
    double sigma = 0.0;
    int64_t charged_time = 0;  // cumulative logical cost after this step
    int64_t wall_grad_ns = 0;
    int64_t wall_hess_ns = 0;
    int64_t wall_decomp_ns = 0;
    int64_t wall_step_ns = 0;
    int64_t wall_elapsed_ns = 0;  // cumulative real time since run start
};

enum class RunStatus { reached_tolerance, max_iters, aborted_non_finite, aborted_worker };

const char* to_string(RunStatus status);

struct RunTrace {
    std::vector<IterRecord> rows;
    RunStatus status = RunStatus::max_iters;
    std::string message;
    Vector final_x;
    double final_f = 0.0;
    int64_t first_update_step = -1;  // step that consumed the first client update
    double delta0_measured = 0.0;    // ||H0 - hessian(x0)||_2

    int64_t final_charged_time() const {
        return rows.empty() ? 0 : rows.back().charged_time;
    }
    std::vector<Vector> iterates;  // filled when record_iterates is set
};

/// Split-client driver: fresh gradients every step, curvature swapped in
/// whenever the client delivers. Charges one time unit per step.
RunTrace run_split_client(const ObjectiveOracle& oracle, const RunConfig& cfg,
                          CurvatureClient& client);

/// Recomputes and factorizes the exact Hessian every step; charges
/// (sim_tau + 1) units per step.
RunTrace run_vanilla(const ObjectiveOracle& oracle, const RunConfig& cfg,
                     int64_t sim_tau);

/// Refreshes curvature every `period` steps; charges 1 per step plus sim_tau
/// at each refresh.
RunTrace run_lazy(const ObjectiveOracle& oracle, const RunConfig& cfg, int64_t period,
                  int64_t sim_tau);

struct AdaptiveDecision {
    bool accept = false;
    double rho_next = 0.0;
    double ratio = 0.0;
};

/// Acceptance test and multiplicative rho update. Accept iff
/// ratio >= eta; shrink rho when ratio >= 0.75, grow when ratio < eta.
AdaptiveDecision adaptive_rho_step(double f_current, double f_new,
                                   const CubicSolution& proposed, double rho,
                                   const RunConfig& cfg);

}  // namespace scc
