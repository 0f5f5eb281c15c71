#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scc/linalg.hpp"
#include "scc/problems.hpp"

namespace scc {

/// Parameter record for the convergence-bound evaluators.
struct BoundParams {
    double rho = 1.0;
    double lipschitz = 1.0;  // L
    double tau = 0.0;        // delay bound
    double tau0 = 0.0;       // steps served by H0
    double delta0 = 0.0;     // initial curvature error
    double delta = 0.0;      // steady-state curvature error
    double f0_gap = 1.0;     // F0 = f(x0) - f*
    int64_t horizon = 1;     // T
};

/// One verified inequality: satisfied iff lhs <= rhs * (1 + 1e-9).
struct TheoryReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    double margin = 0.0;  // rhs - lhs
    std::string context;

    static TheoryReport make(double lhs, double rhs, std::string context = {});
};

/// Stationarity measure
///   mu_rho(x) = max( ||grad f(x)||^{3/2}, max(0, -lambda_min(hess f(x)))^3 / rho^{3/2} ).
/// Zero iff the point is second-order stationary.
double mu_rho(const ObjectiveOracle& oracle, const Vector& x, double rho);

/// Fixed-rho convergence bound on the averaged stationarity measure:
///   1008 * [ sqrt(rho) F0 / T + 292 tau0 delta0^3 / (rho^{3/2} T)
///            + 292 (T - tau0) delta^3 / (rho^{3/2} T) ].
/// Requires rho >= max(L, 20 tau L); throws InvalidParamsError otherwise.
double theorem1_bound_fixed(const BoundParams& params);

/// Bound under the optimizing choice of rho:
///   1008 * [ ((1 + sqrt(20 tau)) sqrt(L) F0 + 43 tau0^{1/4} (F0 delta0)^{3/4}) / T
///            + 43 ((T - tau0)/T) (F0 delta)^{3/4} / T^{3/4} ].
double theorem1_bound_optimized(const BoundParams& params);

/// One-step progress inequality: with x+ the cubic-model minimizer built
/// from (g, H, M),
///   f(x) - f(x+) >= mu_M(x+)/(1008 sqrt M) + M r^3/72
///                   - 4 ||grad f(x) - g||^{3/2} / sqrt M
///                   - 73 ||hess f(x) - H||^3 / M^2.
TheoryReport check_one_step(const ObjectiveOracle& oracle, const Vector& x,
                            const Vector& g_used, const SymMatrix& h_used, double m_reg);

/// Function-progress inequality:
///   f(x) - f(x+) >= (M/36) r^3 - 3 ||grad err||^{3/2}/sqrt M - 72 ||hess err||^3/M^2.
TheoryReport check_lemma_cubicfunc(const ObjectiveOracle& oracle, const Vector& x,
                                   const Vector& g_used, const SymMatrix& h_used,
                                   double m_reg);

/// Gradient and eigenvalue inequalities at x+; the report carries the tighter
/// of the two margins and is satisfied only when both hold:
///   ||grad f(x+)||^{3/2}/sqrt M <= 3 M r^3 + 2||grad err||^{3/2}/sqrt M + ||hess err||^3/M^2
///   max(0, -lambda_min(hess f(x+)))^3/M^2 <= 14 M r^3 + 4||hess err||^3/M^2.
TheoryReport check_lemma_grad_and_eig(const ObjectiveOracle& oracle, const Vector& x,
                                      const Vector& g_used, const SymMatrix& h_used,
                                      double m_reg);

/// Windowed-sum bound. For the 0-indexed sequence r_0..r_{m-1} with r_i = 0
/// for i < 0:
///   lhs  = sum_{k=1}^{m-1} ( sum_{i=k-tau}^{k-1} r_i )^3
///   rhs  = C * sum over every windowed index, i.e. sum_{k=0}^{m-2} r_k^3,
/// evaluated for both the stated constant C = tau^3/3 and the proof-derived
/// C = (tau+1)^3/3. The returned report binds the derived form; the stated
/// form rides along in `stated_form`.
struct SumBoundReport {
    TheoryReport derived_form;
    TheoryReport stated_form;
};
SumBoundReport check_lemma_sum_bound(const std::vector<double>& r, int tau);

/// Logical wall-clock models and their ratios.
struct WallClockModel {
    double t_async = 0.0;
    double t_vanilla = 0.0;
    double t_lazy = 0.0;
    double speedup_vanilla = 1.0;      // t_vanilla / t_async
    double speedup_lazy = 1.0;         // t_lazy / t_async
    double lazy_ratio_lower_bound = 0; // 2 sqrt(tau) / (1 + sqrt(tau))
};
WallClockModel wallclock_models(int64_t horizon, double tau, int64_t period);

}  // namespace scc
