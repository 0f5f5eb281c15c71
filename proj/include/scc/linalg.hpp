#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "scc/errors.hpp"

namespace scc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense symmetric matrix. Construction symmetrizes via (A + A^T)/2 so that
/// quasi-Newton accumulation drift never produces an asymmetric operand.
class SymMatrix {
public:
    explicit SymMatrix(const Matrix& a);

    static SymMatrix identity(int dim);
    static SymMatrix zero(int dim);
    static SymMatrix from_diagonal(const Vector& d);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& mat() const { return mat_; }
    double operator()(int i, int j) const { return mat_(i, j); }

private:
    Matrix mat_;
};

/// Eigendecomposition A = Q diag(lambda) Q^T with eigenvalues ascending.
/// One factorization serves every shifted solve (A + sigma I) u = g.
struct SpectralFactorization {
    Vector eigenvalues;   // ascending
    Matrix eigenvectors;  // orthogonal, columns match eigenvalues

    int dim() const { return static_cast<int>(eigenvalues.size()); }
    double lambda_min() const { return eigenvalues(0); }
    double lambda_max() const { return eigenvalues(dim() - 1); }
};

/// Full symmetric eigendecomposition.
/// Throws NonFiniteError if the matrix contains NaN or Inf.
SpectralFactorization sym_eig(const SymMatrix& a);

/// Solves (A + sigma I) u = g through the factorization.
/// Throws SingularShiftError when min(lambda) + sigma <= 1e-14 * (1 + |lambda_min|).
Vector shifted_solve(const SpectralFactorization& f, double sigma, const Vector& g);

/// Largest-magnitude eigenvalue, i.e. the spectral norm.
double spectral_norm(const SymMatrix& a);

/// Spectral norm of the difference of two symmetric matrices.
double spectral_norm_diff(const SymMatrix& a, const SymMatrix& b);

using MatVec = std::function<Vector(const Vector&)>;

/// Lower estimate of the smallest eigenvalue by Lanczos with full
/// reorthogonalization. Deterministic given the seed; breakdowns restart
/// with a fresh random direction and are never surfaced to the caller.
/// With iters >= dim the estimate is exact up to roundoff.
double min_eig_estimate(const MatVec& apply_a, int dim, int iters, uint64_t seed);

}  // namespace scc
