#include "scc/cubic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scc/errors.hpp"

namespace scc {

namespace {

// All scalar work happens in the eigenbasis: one O(d^2) transform of g buys
// O(d) evaluations of phi and its derivative at any shift.
struct ScalarWorkspace {
    const Vector& lam;
    Vector ghat;
    double rho;
    int evals = 0;

    ScalarWorkspace(const CubicModel& model)
        : lam(model.f().eigenvalues),
          ghat(model.f().eigenvectors.transpose() * model.g),
          rho(model.rho) {}

    // ||s(sigma)|| with scaling so the component squares cannot overflow
    double step_norm(double sigma) {
        double max_abs = 0.0;
        for (int i = 0; i < lam.size(); ++i) {
            max_abs = std::max(max_abs, std::abs(ghat(i) / (lam(i) + sigma)));
        }
        if (max_abs == 0.0) return 0.0;
        double sum = 0.0;
        for (int i = 0; i < lam.size(); ++i) {
            double c = ghat(i) / (lam(i) + sigma) / max_abs;
            sum += c * c;
        }
        return max_abs * std::sqrt(sum);
    }

    double phi(double sigma) {
        ++evals;
        return sigma - 0.5 * rho * step_norm(sigma);
    }

    // phi'(sigma) = 1 + (rho/2) sum ghat_i^2/(lam_i+sigma)^3 / ||s(sigma)||
    double phi_derivative(double sigma) {
        double max_abs = 0.0;
        for (int i = 0; i < lam.size(); ++i) {
            max_abs = std::max(max_abs, std::abs(ghat(i) / (lam(i) + sigma)));
        }
        if (max_abs == 0.0) return 1.0;
        double norm_sum = 0.0;
        double weighted_sum = 0.0;
        for (int i = 0; i < lam.size(); ++i) {
            double shifted = lam(i) + sigma;
            double c = ghat(i) / shifted / max_abs;
            norm_sum += c * c;
            weighted_sum += c * c / shifted;
        }
        // (rho/2) max^2 weighted / (max sqrt(norm_sum)) = (rho/2) max weighted / sqrt(norm_sum)
        return 1.0 + 0.5 * rho * max_abs * weighted_sum / std::sqrt(norm_sum);
    }
};

double sigma_floor_of(const Vector& lam) { return std::max(0.0, -lam(0)); }

double eps_shift_of(const Vector& lam) { return 1e-12 * (1.0 + std::abs(lam(0))); }

// Deterministic orientation: flip so the first non-negligible component of
// the bottom eigenvector is positive.
Vector oriented_bottom_eigenvector(const SpectralFactorization& f) {
    Vector v = f.eigenvectors.col(0);
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) {
            if (v(i) < 0.0) v = -v;
            break;
        }
    }
    return v;
}

}  // namespace

CubicModel::CubicModel(Vector g_, std::shared_ptr<const SpectralFactorization> f,
                       double rho_)
    : g(std::move(g_)), factorization(std::move(f)), rho(rho_) {
    if (!factorization) throw InvalidParamsError("CubicModel: missing factorization");
    if (g.size() != factorization->dim()) {
        throw DimensionError("CubicModel: gradient dimension mismatch");
    }
    if (!g.allFinite()) throw NonFiniteError("CubicModel: gradient contains NaN/Inf");
    if (!(rho > 0.0)) throw InvalidParamsError("CubicModel: rho must be positive");
}

double secular_phi(const CubicModel& model, double sigma) {
    const Vector& lam = model.f().eigenvalues;
    if (lam(0) + sigma <= 1e-14 * (1.0 + std::abs(lam(0)))) {
        throw SingularShiftError("secular_phi: shift inside the singular region");
    }
    ScalarWorkspace ws(model);
    return ws.phi(sigma);
}

std::pair<double, double> bracket_sigma(const CubicModel& model,
                                        std::optional<double> warm_start) {
    ScalarWorkspace ws(model);
    const Vector& lam = model.f().eigenvalues;
    double sigma_lo = sigma_floor_of(lam) + eps_shift_of(lam);
    if (ws.phi(sigma_lo) >= 0.0) {
        return {sigma_lo, sigma_lo};  // collapsed: hard/boundary case
    }
    double sigma_hi = std::max({sigma_lo, warm_start.value_or(0.0), 1.0});
    while (ws.phi(sigma_hi) < 0.0) {
        sigma_hi *= 2.0;
        if (!std::isfinite(sigma_hi) || sigma_hi > 1e300) {
            throw NonFiniteError("bracket_sigma: shift overflow while doubling");
        }
    }
    return {sigma_lo, sigma_hi};
}

CubicSolution solve_cubic(const CubicModel& model, const CubicSolveOptions& opts) {
    const SpectralFactorization& f = model.f();
    const Vector& lam = f.eigenvalues;
    const double rho = model.rho;
    const int d = model.dim();

    ScalarWorkspace ws(model);

    CubicSolution sol;
    Vector shat;            // solution in the eigenbasis
    Vector interior_shat;   // hard case: component off the bottom eigenspace
    double interior_norm = 0.0;

    const double sigma_floor = sigma_floor_of(lam);
    const double eps_shift = eps_shift_of(lam);
    const double sigma_lo_init = sigma_floor + eps_shift;

    if (model.g.norm() == 0.0 && lam(0) >= 0.0) {
        sol.s = Vector::Zero(d);
        shat = Vector::Zero(d);
    } else if (ws.phi(sigma_lo_init) > 0.0) {
        // Hard or boundary case: the interior solution at the leftmost
        // feasible shift is too short, so the shift pins to -lambda_min and
        // the step gains a component along the bottom eigenspace.
        sol.hard_case = true;
        sol.sigma_star = sigma_floor;
        double target_r = 2.0 * sol.sigma_star / rho;

        shat.resize(d);
        double drop_tol = std::max(eps_shift, 1e-10 * (1.0 + std::abs(lam(0))));
        for (int i = 0; i < d; ++i) {
            double shifted = lam(i) + sol.sigma_star;
            shat(i) = shifted > drop_tol ? -ws.ghat(i) / shifted : 0.0;
        }
        interior_shat = shat;
        interior_norm = shat.norm();
        sol.s = f.eigenvectors * shat;
        if (interior_norm < target_r) {
            double alpha =
                std::sqrt(target_r * target_r - interior_norm * interior_norm);
            Vector v = oriented_bottom_eigenvector(f);
            sol.s += alpha * v;
            shat += alpha * (f.eigenvectors.transpose() * v);
        }
    } else {
        // Easy case: phi has its root strictly right of sigma_lo. Newton with
        // a bisection safeguard on the bracket.
        double lo = sigma_lo_init;
        double hi = std::max({lo, opts.warm_start_sigma.value_or(0.0), 1.0});
        while (ws.phi(hi) < 0.0) {
            lo = hi;  // phi(hi) < 0 tightens the lower end
            hi *= 2.0;
            if (!std::isfinite(hi) || hi > 1e300) {
                throw NonFiniteError("solve_cubic: shift overflow while bracketing");
            }
        }

        constexpr double kUlps = 4.0 * std::numeric_limits<double>::epsilon();
        double sigma = opts.warm_start_sigma
                           ? std::clamp(*opts.warm_start_sigma, lo, hi)
                           : 0.5 * (lo + hi);
        bool converged = false;
        bool stagnated = false;
        while (ws.evals < opts.max_scalar_iters) {
            double val = ws.phi(sigma);
            if (std::isfinite(val) && std::abs(val) <= opts.root_tol * (1.0 + sigma)) {
                converged = true;
                break;
            }
            if (val < 0.0) {
                lo = sigma;
            } else {
                hi = sigma;
            }
            if (hi - lo <= kUlps * (1.0 + hi)) {
                stagnated = true;
                break;
            }
            double newton = sigma - val / ws.phi_derivative(sigma);
            sigma = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
        }

        if (converged) {
            sol.sigma_star = sigma;
            shat.resize(d);
            for (int i = 0; i < d; ++i) shat(i) = -ws.ghat(i) / (lam(i) + sigma);
            sol.s = f.eigenvectors * shat;
        } else if (stagnated) {
            // The bracket is one ulp wide but phi is too steep to meet the
            // tolerance: the root hugs the singularity. Interpolate between
            // the exact solves at the two bracket ends so the step norm lands
            // on 2 hi / rho; both ends solve shifted systems one ulp apart,
            // so the interpolant's KKT residual stays at roundoff scale.
            Vector shat_hi(d), shat_lo(d);
            for (int i = 0; i < d; ++i) {
                shat_hi(i) = -ws.ghat(i) / (lam(i) + hi);
                shat_lo(i) = -ws.ghat(i) / (lam(i) + lo);
            }
            double target_r = 2.0 * hi / rho;
            Vector dir = shat_lo - shat_hi;
            double a = dir.squaredNorm();
            double beta = 0.0;
            if (a > 0.0) {
                double b = 2.0 * shat_hi.dot(dir);
                double c0 = shat_hi.squaredNorm() - target_r * target_r;
                beta = (-b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c0))) / (2.0 * a);
                beta = std::clamp(beta, 0.0, 1.0);
            }
            shat = shat_hi + beta * dir;
            sol.s = f.eigenvectors * shat;
            sol.sigma_star = 0.5 * rho * shat.norm();
        } else {
            throw MaxIterError("solve_cubic: scalar iteration budget exhausted");
        }
    }

    if (opts.max_step_norm && sol.s.norm() > *opts.max_step_norm) {
        // Trust-region fallback for stale curvature: pull the step back onto
        // the cap radius. The capped step keeps (H + sigma I)s = -g with
        // sigma >= rho r / 2, trading the shift identity for the cap.
        double cap = *opts.max_step_norm;
        sol.step_capped = true;
        if (sol.hard_case && interior_norm <= cap) {
            // shrink only the free eigenspace component
            double alpha = std::sqrt(std::max(0.0, cap * cap - interior_norm * interior_norm));
            Vector v = oriented_bottom_eigenvector(f);
            shat = interior_shat + alpha * (f.eigenvectors.transpose() * v);
            sol.s = f.eigenvectors * interior_shat + alpha * v;
        } else {
            double lo = sigma_lo_init;
            double hi = std::max(sol.sigma_star, lo);
            while (ws.step_norm(hi) > cap) {
                lo = hi;
                hi *= 2.0;
                if (!std::isfinite(hi) || hi > 1e300) {
                    throw NonFiniteError("solve_cubic: cap search overflow");
                }
            }
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                if (ws.step_norm(mid) > cap) {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if (hi - lo <= 1e-12 * (1.0 + hi)) break;
            }
            sol.sigma_star = hi;
            sol.hard_case = false;
            for (int i = 0; i < d; ++i) shat(i) = -ws.ghat(i) / (lam(i) + sol.sigma_star);
            sol.s = f.eigenvectors * shat;
        }
    }

    sol.r = sol.s.norm();
    sol.iterations_used = ws.evals;

    double lin = ws.ghat.dot(shat);
    double quad = 0.0;
    for (int i = 0; i < d; ++i) quad += lam(i) * shat(i) * shat(i);
    double mval = lin + 0.5 * quad + rho / 6.0 * sol.r * sol.r * sol.r;
    sol.model_decrease = std::max(0.0, -mval);

    double kkt_sq = 0.0;
    for (int i = 0; i < d; ++i) {
        double resid = (lam(i) + sol.sigma_star) * shat(i) + ws.ghat(i);
        kkt_sq += resid * resid;
    }
    sol.kkt_residual = std::sqrt(kkt_sq);
    return sol;
}

double model_value(const CubicModel& model, const Vector& s) {
    if (!s.allFinite()) throw NonFiniteError("model_value: step contains NaN/Inf");
    if (s.size() != model.dim()) throw DimensionError("model_value: dimension mismatch");
    const SpectralFactorization& f = model.f();
    Vector shat = f.eigenvectors.transpose() * s;
    double quad = 0.0;
    for (int i = 0; i < model.dim(); ++i) quad += f.eigenvalues(i) * shat(i) * shat(i);
    double r = s.norm();
    return model.g.dot(s) + 0.5 * quad + model.rho / 6.0 * r * r * r;
}

}  // namespace scc
