#include "scc/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "scc/rng.hpp"

namespace scc {

SymMatrix::SymMatrix(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw DimensionError("SymMatrix requires a square matrix of dim >= 1");
    }
    mat_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::identity(int dim) { return SymMatrix(Matrix::Identity(dim, dim)); }

SymMatrix SymMatrix::zero(int dim) { return SymMatrix(Matrix::Zero(dim, dim)); }

SymMatrix SymMatrix::from_diagonal(const Vector& d) {
    return SymMatrix(Matrix(d.asDiagonal()));
}

SpectralFactorization sym_eig(const SymMatrix& a) {
    if (!a.mat().allFinite()) {
        throw NonFiniteError("sym_eig: matrix contains NaN or Inf");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat());
    if (solver.info() != Eigen::Success) {
        throw NonFiniteError("sym_eig: eigendecomposition failed to converge");
    }
    return SpectralFactorization{solver.eigenvalues(), solver.eigenvectors()};
}

Vector shifted_solve(const SpectralFactorization& f, double sigma, const Vector& g) {
    if (g.size() != f.dim()) {
        throw DimensionError("shifted_solve: rhs dimension mismatch");
    }
    double lam_min = f.lambda_min();
    if (lam_min + sigma <= 1e-14 * (1.0 + std::abs(lam_min))) {
        throw SingularShiftError("shifted_solve: shift does not clear lambda_min");
    }
    Vector coeffs = f.eigenvectors.transpose() * g;
    coeffs.array() /= (f.eigenvalues.array() + sigma);
    return f.eigenvectors * coeffs;
}

double spectral_norm(const SymMatrix& a) {
    SpectralFactorization f = sym_eig(a);
    return std::max(std::abs(f.lambda_min()), std::abs(f.lambda_max()));
}

double spectral_norm_diff(const SymMatrix& a, const SymMatrix& b) {
    return spectral_norm(SymMatrix(a.mat() - b.mat()));
}

namespace {

// Draws a random unit vector orthogonal to the columns collected so far.
// Returns false if the basis already spans the whole space.
bool fresh_direction(Rng& rng, const std::vector<Vector>& basis, int dim, Vector& out) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v(i) = rng.gaussian();
        for (const Vector& q : basis) v -= q.dot(v) * q;
        for (const Vector& q : basis) v -= q.dot(v) * q;
        double nrm = v.norm();
        if (nrm > 1e-8) {
            out = v / nrm;
            return true;
        }
    }
    return false;
}

}  // namespace

double min_eig_estimate(const MatVec& apply_a, int dim, int iters, uint64_t seed) {
    if (dim < 1 || iters < 1) {
        throw InvalidParamsError("min_eig_estimate: dim and iters must be positive");
    }
    Rng rng(seed);

    std::vector<Vector> basis;
    std::vector<double> alphas;
    std::vector<double> betas;  // betas[j] couples column j to j+1; 0 marks a restart

    Vector v;
    if (!fresh_direction(rng, basis, dim, v)) {
        throw NonFiniteError("min_eig_estimate: could not draw a start vector");
    }
    double beta_prev = 0.0;
    Vector v_prev = Vector::Zero(dim);

    int budget = std::min(iters, dim);
    for (int j = 0; j < budget; ++j) {
        basis.push_back(v);
        Vector w = apply_a(v);
        if (!w.allFinite()) {
            throw NonFiniteError("min_eig_estimate: operator produced NaN/Inf");
        }
        double alpha = v.dot(w);
        alphas.push_back(alpha);
        w -= alpha * v;
        if (beta_prev != 0.0) w -= beta_prev * v_prev;
        // full reorthogonalization, applied twice
        for (const Vector& q : basis) w -= q.dot(w) * q;
        for (const Vector& q : basis) w -= q.dot(w) * q;

        if (j + 1 == budget) break;

        double beta = w.norm();
        if (beta <= 1e-13 * (1.0 + std::abs(alpha))) {
            // invariant subspace found; restart in the orthogonal complement
            if (!fresh_direction(rng, basis, dim, v)) break;
            betas.push_back(0.0);
            beta_prev = 0.0;
            v_prev = Vector::Zero(dim);
        } else {
            betas.push_back(beta);
            v_prev = basis.back();
            v = w / beta;
            beta_prev = beta;
        }
    }

    int k = static_cast<int>(alphas.size());
    Matrix tri = Matrix::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        tri(i, i) = alphas[static_cast<size_t>(i)];
        if (i + 1 < k) {
            double b = betas[static_cast<size_t>(i)];
            tri(i, i + 1) = b;
            tri(i + 1, i) = b;
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> small(tri);
    return small.eigenvalues()(0);
}

}  // namespace scc
