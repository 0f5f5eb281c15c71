#pragma once

// Shared test-only helpers: finite-difference oracles, random model
// generators, and a brute-force minimizer for the cubic model. These stay
// independent of the library solve paths they are used to check.

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "scc/cubic_solver.hpp"
#include "scc/linalg.hpp"
#include "scc/problems.hpp"
#include "scc/rng.hpp"

namespace scc::test {

/// Central-difference gradient of f.
inline Vector fd_gradient(const ObjectiveOracle& oracle, const Vector& x, double h = 1e-5) {
    int d = oracle.dim();
    Vector g(d);
    for (int i = 0; i < d; ++i) {
        Vector e = Vector::Zero(d);
        double step = h * (1.0 + std::abs(x(i)));
        e(i) = step;
        g(i) = (oracle.value(x + e) - oracle.value(x - e)) / (2.0 * step);
    }
    return g;
}

/// Central-difference Hessian from gradient evaluations.
inline Matrix fd_hessian(const ObjectiveOracle& oracle, const Vector& x, double h = 1e-5) {
    int d = oracle.dim();
    Matrix hess(d, d);
    for (int i = 0; i < d; ++i) {
        Vector e = Vector::Zero(d);
        double step = h * (1.0 + std::abs(x(i)));
        e(i) = step;
        hess.col(i) = (oracle.gradient(x + e) - oracle.gradient(x - e)) / (2.0 * step);
    }
    return 0.5 * (hess + hess.transpose());
}

inline Vector random_vector(Rng& rng, int d, double scale = 1.0) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = scale * rng.gaussian();
    return v;
}

inline SymMatrix random_symmetric(Rng& rng, int d, double scale = 1.0) {
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = scale * rng.gaussian();
    return SymMatrix(a);
}

/// Gradient of the cubic model m(s) = g^T s + s^T H s / 2 + rho ||s||^3 / 6.
inline Vector cubic_model_gradient(const Vector& g, const Matrix& h, double rho, const Vector& s) {
    return g + h * s + 0.5 * rho * s.norm() * s;
}

/// Multistart projected-gradient descent on the cubic model. Independent of
/// the spectral solve path; used as the global-optimality oracle at small d.
inline double brute_force_cubic_min(const Vector& g, const SymMatrix& h, double rho, Rng& rng,
                                    int starts = 60, int iters = 400) {
    int d = static_cast<int>(g.size());
    double hnorm = h.mat().cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm bound
    double radius = 2.0 * (std::sqrt(2.0 * g.norm() / rho) + 2.0 * hnorm / rho) + 1.0;

    auto value = [&](const Vector& s) {
        double r = s.norm();
        return g.dot(s) + 0.5 * s.dot(h.mat() * s) + rho / 6.0 * r * r * r;
    };

    double best = 0.0;  // s = 0 is always feasible
    for (int k = 0; k < starts; ++k) {
        Vector s = random_vector(rng, d, radius * rng.uniform01());
        double fs = value(s);
        for (int it = 0; it < iters; ++it) {
            Vector grad = cubic_model_gradient(g, h.mat(), rho, s);
            if (grad.norm() < 1e-12) break;
            double step = 1.0;
            bool moved = false;
            for (int bt = 0; bt < 40; ++bt) {
                Vector cand = s - step * grad;
                double fc = value(cand);
                if (fc < fs - 1e-4 * step * grad.squaredNorm()) {
                    s = cand;
                    fs = fc;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        best = std::min(best, fs);
    }
    return best;
}

struct RandomCubicModel {
    Vector g;
    SymMatrix h;
    double rho;

    RandomCubicModel(Vector g_, SymMatrix h_, double rho_)
        : g(std::move(g_)), h(std::move(h_)), rho(rho_) {}
};

/// Random cubic model with indefinite curvature allowed. Occasionally zeroes
/// the gradient component along the minimal eigenvector to exercise the hard
/// case.
inline RandomCubicModel random_cubic_model(Rng& rng, int d_max = 20) {
    int d = static_cast<int>(rng.uniform_int(1, d_max));
    SymMatrix h = random_symmetric(rng, d, std::pow(10.0, rng.uniform(-1.0, 1.0)));
    Vector g = random_vector(rng, d, std::pow(10.0, rng.uniform(-2.0, 1.0)));
    double rho = std::pow(10.0, rng.uniform(-1.0, 2.0));
    if (rng.uniform01() < 0.15) {
        // project g away from the bottom eigenspace
        SpectralFactorization f = sym_eig(h);
        Vector coeffs = f.eigenvectors.transpose() * g;
        coeffs(0) = 0.0;
        g = f.eigenvectors * coeffs;
    }
    if (rng.uniform01() < 0.05) g.setZero();
    return RandomCubicModel(std::move(g), std::move(h), rho);
}

}  // namespace scc::test
