#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "scc/linalg.hpp"

namespace scc {

/// Cubic-regularized second-order model
///   m(s) = g^T s + s^T H s / 2 + rho ||s||^3 / 6
/// with H held through its spectral factorization so one decomposition
/// serves every shifted solve of the scalar search.
struct CubicModel {
    Vector g;
    std::shared_ptr<const SpectralFactorization> factorization;
    double rho;

    CubicModel(Vector g_, std::shared_ptr<const SpectralFactorization> f, double rho_);

    const SpectralFactorization& f() const { return *factorization; }
    int dim() const { return factorization->dim(); }
};

/// Certified global minimizer of the cubic model.
///
/// Optimality is equivalent to the pair of conditions
///   (H + sigma* I) s = -g   with sigma* = rho ||s|| / 2,  and
///   H + sigma* I >= 0,
/// which the invariant fields below witness numerically.
struct CubicSolution {
    Vector s;
    double sigma_star = 0.0;
    double r = 0.0;               // ||s||
    double model_decrease = 0.0;  // m(0) - m(s) >= 0
    double kkt_residual = 0.0;    // ||(H + sigma* I) s + g||
    int iterations_used = 0;      // scalar phi evaluations
    bool hard_case = false;
    bool step_capped = false;     // max_step_norm engaged (trust-region fallback)
};

struct CubicSolveOptions {
    std::optional<double> warm_start_sigma;
    std::optional<double> max_step_norm;
    int max_scalar_iters = 200;
    double root_tol = 1e-10;  // |phi(sigma)| <= root_tol * (1 + sigma)
};

/// phi(sigma) = sigma - (rho/2) ||s(sigma)|| with s(sigma) = -(H + sigma I)^{-1} g.
/// Strictly increasing where defined; its root gives the optimal shift.
double secular_phi(const CubicModel& model, double sigma);

/// Returns [sigma_lo, sigma_hi] with phi(sigma_hi) >= 0 and sigma_lo nudged
/// just past max(0, -lambda_min). A collapsed bracket (lo == hi) signals that
/// phi(sigma_lo) >= 0 already, i.e. the hard/boundary case.
std::pair<double, double> bracket_sigma(const CubicModel& model,
                                        std::optional<double> warm_start = std::nullopt);

/// Global minimizer of the cubic model via safeguarded Newton-bisection on
/// phi, with explicit hard-case handling through the minimal eigenspace.
CubicSolution solve_cubic(const CubicModel& model, const CubicSolveOptions& opts = {});

/// m(s) for an arbitrary step.
double model_value(const CubicModel& model, const Vector& s);

}  // namespace scc
