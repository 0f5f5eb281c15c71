#include "scc/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "scc/analysis.hpp"
#include "scc/errors.hpp"

namespace scc {

namespace {

using Clock = std::chrono::steady_clock;

int64_t elapsed_ns(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start)
        .count();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void RunConfig::validate() const {
    if (!(rho > 0.0)) throw InvalidParamsError("RunConfig: rho must be positive");
    if (adaptive) {
        if (!(eta > 0.0 && eta < 1.0)) throw InvalidParamsError("RunConfig: eta in (0,1)");
        if (!(rho_inc > 1.0)) throw InvalidParamsError("RunConfig: rho_inc > 1");
        if (!(rho_dec > 0.0 && rho_dec < 1.0)) {
            throw InvalidParamsError("RunConfig: rho_dec in (0,1)");
        }
        if (!(rho_min > 0.0)) throw InvalidParamsError("RunConfig: rho_min > 0");
    }
    if (max_iters < 1) throw InvalidParamsError("RunConfig: max_iters >= 1");
    if (grad_tol < 0.0 || eig_tol < 0.0) {
        throw InvalidParamsError("RunConfig: tolerances must be nonnegative");
    }
    if (max_step_norm && !(*max_step_norm > 0.0)) {
        throw InvalidParamsError("RunConfig: max_step_norm must be positive");
    }
}

const char* to_string(RunStatus status) {
    switch (status) {
        case RunStatus::reached_tolerance: return "reached_tolerance";
        case RunStatus::max_iters: return "max_iters";
        case RunStatus::aborted_non_finite: return "aborted_non_finite";
        case RunStatus::aborted_worker: return "aborted_worker";
    }
    return "unknown";
}

AdaptiveDecision adaptive_rho_step(double f_current, double f_new,
                                   const CubicSolution& proposed, double rho,
                                   const RunConfig& cfg) {
    AdaptiveDecision decision;
    if (!std::isfinite(f_new) || !(proposed.model_decrease > 0.0)) {
        decision.accept = false;
        decision.ratio = -std::numeric_limits<double>::infinity();
        decision.rho_next = std::max(cfg.rho_min, rho * cfg.rho_inc);
        return decision;
    }
    decision.ratio = (f_current - f_new) / proposed.model_decrease;
    decision.accept = decision.ratio >= cfg.eta;
    if (decision.ratio >= 0.75) {
        decision.rho_next = rho * cfg.rho_dec;
    } else if (decision.ratio < cfg.eta) {
        decision.rho_next = rho * cfg.rho_inc;
    } else {
        decision.rho_next = rho;
    }
    decision.rho_next = std::max(decision.rho_next, cfg.rho_min);
    return decision;
}

namespace {

// One driver core serves all three schedules; they differ only in the
// curvature client and in how much logical time a delivered update costs.
RunTrace run_core(const ObjectiveOracle& oracle, const RunConfig& cfg,
                  CurvatureClient& client, int64_t tau_charge_on_delivery) {
    cfg.validate();
    const int d = oracle.dim();

    RunTrace trace;
    Vector x = cfg.x0.size() == 0 ? Vector(Vector::Zero(d)) : cfg.x0;
    if (x.size() != d) throw DimensionError("run: x0 dimension mismatch");

    auto [h0, delta0] = init_h0(cfg.init, oracle, x);
    trace.delta0_measured = delta0;

    CurvatureUpdate current;
    current.factorization = factorize_curvature(h0, cfg.curvature_ridge);
    current.source_iter = 0;
    current.ready_iter = 0;
    current.kind = CurvatureKind::surrogate;
    current.delta_claimed = delta0;

    if (cfg.record_iterates) trace.iterates.push_back(x);

    double rho = cfg.rho;
    double warm_sigma = -1.0;  // <0 means cold
    int64_t charged = 0;
    bool refresh_requested = false;
    std::optional<double> cached_f;
    const bool measure_wall = !client.deterministic();
    const auto run_start = Clock::now();

    for (int64_t t = 0; t < cfg.max_iters; ++t) {
        const auto step_start = Clock::now();
        IterRecord row;
        row.t = t;

        auto t0 = Clock::now();
        Vector g = oracle.gradient(x);
        row.wall_grad_ns = measure_wall ? elapsed_ns(t0) : 0;
        if (!g.allFinite()) {
            trace.status = RunStatus::aborted_non_finite;
            trace.message = "gradient became non-finite";
            break;
        }
        row.grad_norm = g.norm();
        row.f = cached_f ? *cached_f : oracle.value(x);
        cached_f.reset();
        row.rho = rho;
        row.mu_rho = cfg.record_mu ? mu_rho(oracle, x, rho) : kNaN;

        // cheap stationarity certificate: fresh gradient + the eigenvalue
        // floor of the curvature currently in hand
        if (row.grad_norm <= cfg.grad_tol &&
            current.factorization->lambda_min() >= -cfg.eig_tol) {
            charged += 1;
            row.tau_obs = t - current.source_iter;
            row.accepted = false;
            row.accept_ratio = kNaN;
            row.charged_time = charged;
            row.wall_elapsed_ns = elapsed_ns(run_start);
            trace.rows.push_back(row);
            if (cfg.record_iterates) trace.iterates.push_back(x);
            trace.status = RunStatus::reached_tolerance;
            cached_f = row.f;
            break;
        }

        bool delivered = false;
        try {
            PollResult poll = client.poll(t, x, g);
            row.wall_hess_ns = measure_wall ? poll.hess_ns : 0;
            row.wall_decomp_ns = measure_wall ? poll.decomp_ns : 0;
            if (poll.update) {
                current = std::move(*poll.update);
                delivered = true;
                refresh_requested = false;
                if (trace.first_update_step < 0) trace.first_update_step = t;
            }
        } catch (const WorkerError& e) {
            trace.status = RunStatus::aborted_worker;
            trace.message = e.what();
            break;
        }
        row.tau_obs = t - current.source_iter;

        CubicModel model(g, current.factorization, rho);
        CubicSolveOptions opts;
        if (warm_sigma >= 0.0) opts.warm_start_sigma = warm_sigma;
        opts.max_step_norm = cfg.max_step_norm;
        t0 = Clock::now();
        CubicSolution sol = solve_cubic(model, opts);
        row.wall_step_ns = measure_wall ? elapsed_ns(t0) : 0;
        warm_sigma = sol.sigma_star;

        // liveness: a vanishing step against a meaningful gradient and stale
        // curvature means the matrix in hand is unusable; ask for a refresh,
        // at most once per delivery so in-flight work is not perpetually
        // discarded
        if (sol.r < 1e-14 && row.grad_norm > cfg.grad_tol && row.tau_obs > 0 &&
            !refresh_requested) {
            client.request_refresh();
            refresh_requested = true;
        }

        row.step_norm = sol.r;
        row.sigma = sol.sigma_star;
        row.accepted = true;
        row.accept_ratio = kNaN;

        if (cfg.adaptive) {
            double f_new = oracle.value(x + sol.s);
            AdaptiveDecision decision = adaptive_rho_step(row.f, f_new, sol, rho, cfg);
            row.accepted = decision.accept;
            row.accept_ratio = decision.ratio;
            rho = decision.rho_next;
            if (decision.accept) cached_f = f_new;
        }

        bool finite_step = true;
        if (row.accepted) {
            Vector x_next = x + sol.s;
            if (x_next.allFinite()) {
                x = std::move(x_next);
            } else {
                finite_step = false;
            }
        } else {
            cached_f = row.f;  // x unchanged
        }

        charged += 1 + (delivered ? tau_charge_on_delivery : 0);
        row.charged_time = charged;

        if (cfg.min_step_ms > 0.0) {
            auto deadline =
                step_start + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double, std::milli>(cfg.min_step_ms));
            std::this_thread::sleep_until(deadline);
        }
        row.wall_elapsed_ns = elapsed_ns(run_start);
        trace.rows.push_back(row);
        if (cfg.record_iterates) trace.iterates.push_back(x);

        if (!finite_step) {
            trace.status = RunStatus::aborted_non_finite;
            trace.message = "iterate became non-finite";
            break;
        }
    }

    client.stop();
    trace.final_x = x;
    trace.final_f = cached_f ? *cached_f : oracle.value(x);
    return trace;
}

}  // namespace

RunTrace run_split_client(const ObjectiveOracle& oracle, const RunConfig& cfg,
                          CurvatureClient& client) {
    return run_core(oracle, cfg, client, 0);
}

RunTrace run_vanilla(const ObjectiveOracle& oracle, const RunConfig& cfg,
                     int64_t sim_tau) {
    if (sim_tau < 0) throw InvalidParamsError("run_vanilla: sim_tau >= 0");
    OraclePtr alias(&oracle, [](const ObjectiveOracle*) {});
    SimulatedProvider fresh(alias, DelaySchedule::fixed(0), cfg.curvature_ridge);
    return run_core(oracle, cfg, fresh, sim_tau);
}

RunTrace run_lazy(const ObjectiveOracle& oracle, const RunConfig& cfg, int64_t period,
                  int64_t sim_tau) {
    if (sim_tau < 0) throw InvalidParamsError("run_lazy: sim_tau >= 0");
    OraclePtr alias(&oracle, [](const ObjectiveOracle*) {});
    LazyProvider lazy(alias, period, cfg.curvature_ridge);
    return run_core(oracle, cfg, lazy, sim_tau);
}

}  // namespace scc
