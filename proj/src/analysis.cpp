#include "scc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "scc/cubic_solver.hpp"
#include "scc/errors.hpp"

namespace scc {

TheoryReport TheoryReport::make(double lhs, double rhs, std::string context) {
    TheoryReport report;
    report.lhs = lhs;
    report.rhs = rhs;
    report.satisfied = lhs <= rhs * (1.0 + 1e-9);
    report.margin = rhs - lhs;
    report.context = std::move(context);
    return report;
}

double mu_rho(const ObjectiveOracle& oracle, const Vector& x, double rho) {
    if (!(rho > 0.0)) throw InvalidParamsError("mu_rho: rho must be positive");
    double gnorm = oracle.gradient(x).norm();
    double lam_min = sym_eig(oracle.hessian(x)).lambda_min();
    double neg = std::max(0.0, -lam_min);
    return std::max(std::pow(gnorm, 1.5), neg * neg * neg / std::pow(rho, 1.5));
}

double theorem1_bound_fixed(const BoundParams& p) {
    double threshold = std::max(p.lipschitz, 20.0 * p.tau * p.lipschitz);
    if (p.rho < threshold * (1.0 - 1e-12)) {
        throw InvalidParamsError("theorem1_bound_fixed: rho below max(L, 20 tau L)");
    }
    if (p.horizon < 1) throw InvalidParamsError("theorem1_bound_fixed: T >= 1");
    double t = static_cast<double>(p.horizon);
    double rho32 = std::pow(p.rho, 1.5);
    double d0 = p.delta0 * p.delta0 * p.delta0;
    double dd = p.delta * p.delta * p.delta;
    return 1008.0 * (std::sqrt(p.rho) * p.f0_gap / t + 292.0 * p.tau0 * d0 / (rho32 * t) +
                     292.0 * (t - p.tau0) * dd / (rho32 * t));
}

double theorem1_bound_optimized(const BoundParams& p) {
    if (p.horizon < 1) throw InvalidParamsError("theorem1_bound_optimized: T >= 1");
    double t = static_cast<double>(p.horizon);
    double main_term = (1.0 + std::sqrt(20.0 * p.tau)) * std::sqrt(p.lipschitz) * p.f0_gap;
    double init_term = 43.0 * std::pow(p.tau0, 0.25) * std::pow(p.f0_gap * p.delta0, 0.75);
    double tail_term = 43.0 * ((t - p.tau0) / t) *
                       std::pow(p.f0_gap * p.delta, 0.75) / std::pow(t, 0.75);
    return 1008.0 * ((main_term + init_term) / t + tail_term);
}

namespace {

struct OneStepData {
    Vector x_plus;
    double r;            // step norm
    double f_decrease;   // f(x) - f(x+)
    double grad_err_32;  // ||grad f(x) - g||^{3/2}
    double hess_err_3;   // ||hess f(x) - H||^3
};

OneStepData evaluate_one_step(const ObjectiveOracle& oracle, const Vector& x,
                              const Vector& g_used, const SymMatrix& h_used,
                              double m_reg) {
    if (!(m_reg >= oracle.lipschitz_hessian_bound())) {
        throw InvalidParamsError("one-step check: M must be >= the Lipschitz bound");
    }
    auto f = std::make_shared<SpectralFactorization>(sym_eig(h_used));
    CubicModel model(g_used, f, m_reg);
    CubicSolution sol = solve_cubic(model);

    OneStepData data;
    data.x_plus = x + sol.s;
    data.r = sol.r;
    data.f_decrease = oracle.value(x) - oracle.value(data.x_plus);
    double grad_err = (oracle.gradient(x) - g_used).norm();
    data.grad_err_32 = std::pow(grad_err, 1.5);
    double hess_err = spectral_norm_diff(oracle.hessian(x), h_used);
    data.hess_err_3 = hess_err * hess_err * hess_err;
    return data;
}

double mu_at(const ObjectiveOracle& oracle, const Vector& x, double m_reg) {
    return mu_rho(oracle, x, m_reg);
}

}  // namespace

TheoryReport check_one_step(const ObjectiveOracle& oracle, const Vector& x,
                            const Vector& g_used, const SymMatrix& h_used,
                            double m_reg) {
    OneStepData d = evaluate_one_step(oracle, x, g_used, h_used, m_reg);
    double sqrt_m = std::sqrt(m_reg);
    double bound = mu_at(oracle, d.x_plus, m_reg) / (1008.0 * sqrt_m) +
                   m_reg * d.r * d.r * d.r / 72.0 - 4.0 * d.grad_err_32 / sqrt_m -
                   73.0 * d.hess_err_3 / (m_reg * m_reg);
    return TheoryReport::make(bound, d.f_decrease, "one_step");
}

TheoryReport check_lemma_cubicfunc(const ObjectiveOracle& oracle, const Vector& x,
                                   const Vector& g_used, const SymMatrix& h_used,
                                   double m_reg) {
    OneStepData d = evaluate_one_step(oracle, x, g_used, h_used, m_reg);
    double bound = m_reg / 36.0 * d.r * d.r * d.r -
                   3.0 * d.grad_err_32 / std::sqrt(m_reg) -
                   72.0 * d.hess_err_3 / (m_reg * m_reg);
    return TheoryReport::make(bound, d.f_decrease, "cubicfunc");
}

TheoryReport check_lemma_grad_and_eig(const ObjectiveOracle& oracle, const Vector& x,
                                      const Vector& g_used, const SymMatrix& h_used,
                                      double m_reg) {
    OneStepData d = evaluate_one_step(oracle, x, g_used, h_used, m_reg);
    double sqrt_m = std::sqrt(m_reg);
    double m2 = m_reg * m_reg;
    double r3 = d.r * d.r * d.r;

    double grad_lhs = std::pow(oracle.gradient(d.x_plus).norm(), 1.5) / sqrt_m;
    double grad_rhs = 3.0 * m_reg * r3 + 2.0 * d.grad_err_32 / sqrt_m + d.hess_err_3 / m2;
    TheoryReport grad_part = TheoryReport::make(grad_lhs, grad_rhs, "grad_of_r");

    double lam_min = sym_eig(oracle.hessian(d.x_plus)).lambda_min();
    double neg = std::max(0.0, -lam_min);
    double eig_lhs = neg * neg * neg / m2;
    double eig_rhs = 14.0 * m_reg * r3 + 4.0 * d.hess_err_3 / m2;
    TheoryReport eig_part = TheoryReport::make(eig_lhs, eig_rhs, "eig_of_r");

    TheoryReport combined = grad_part.margin <= eig_part.margin ? grad_part : eig_part;
    combined.satisfied = grad_part.satisfied && eig_part.satisfied;
    combined.context = "grad_and_eig";
    return combined;
}

SumBoundReport check_lemma_sum_bound(const std::vector<double>& r, int tau) {
    if (tau < 1) throw InvalidParamsError("sum_bound: tau >= 1");
    const int m = static_cast<int>(r.size());
    for (double v : r) {
        if (v < 0.0) throw InvalidParamsError("sum_bound: sequence must be nonnegative");
    }

    auto at = [&](int i) { return (i >= 0 && i < m) ? r[static_cast<size_t>(i)] : 0.0; };

    double lhs = 0.0;
    for (int k = 1; k <= m - 1; ++k) {
        double window = 0.0;
        for (int i = k - tau; i <= k - 1; ++i) window += at(i);
        lhs += window * window * window;
    }

    // every index the windows range over: 0 .. m-2
    double cubes = 0.0;
    for (int k = 0; k <= m - 2; ++k) cubes += r[static_cast<size_t>(k)] *
                                               r[static_cast<size_t>(k)] *
                                               r[static_cast<size_t>(k)];

    double t = static_cast<double>(tau);
    SumBoundReport report;
    report.stated_form = TheoryReport::make(lhs, t * t * t / 3.0 * cubes, "sum_bound_stated");
    double tp1 = t + 1.0;
    report.derived_form =
        TheoryReport::make(lhs, tp1 * tp1 * tp1 / 3.0 * cubes, "sum_bound_derived");
    return report;
}

WallClockModel wallclock_models(int64_t horizon, double tau, int64_t period) {
    if (horizon < 1) throw InvalidParamsError("wallclock_models: T >= 1");
    if (period < 1) throw InvalidParamsError("wallclock_models: p >= 1");
    if (tau < 0.0) throw InvalidParamsError("wallclock_models: tau >= 0");
    WallClockModel model;
    double t = static_cast<double>(horizon);
    model.t_async = t;
    model.t_vanilla = t * (tau + 1.0);
    model.t_lazy = t + t / static_cast<double>(period) * tau;
    model.speedup_vanilla = model.t_vanilla / model.t_async;
    model.speedup_lazy = model.t_lazy / model.t_async;
    double sq = std::sqrt(tau);
    model.lazy_ratio_lower_bound = 2.0 * sq / (1.0 + sq);
    return model;
}

}  // namespace scc
