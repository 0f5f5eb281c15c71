#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include "scc/linalg.hpp"

namespace scc {

/// Binary classification dataset with dense feature storage. Labels are
/// strictly {-1, +1}; features must be finite.
struct Dataset {
    Matrix features;  // n x d
    Vector labels;    // n, entries in {-1, +1}
    std::string name;

    int n() const { return static_cast<int>(features.rows()); }
    int d() const { return static_cast<int>(features.cols()); }

    /// Throws if any invariant is violated.
    void validate() const;
};

/// Smooth objective with analytic derivatives and a certified upper bound on
/// the Hessian Lipschitz constant. Implementations are immutable and safe to
/// call from any thread.
class ObjectiveOracle {
public:
    virtual ~ObjectiveOracle() = default;

    virtual int dim() const = 0;
    virtual double value(const Vector& x) const = 0;
    virtual Vector gradient(const Vector& x) const = 0;
    virtual SymMatrix hessian(const Vector& x) const = 0;
    virtual Vector hessian_vector(const Vector& x, const Vector& v) const {
        return hessian(x).mat() * v;
    }
    virtual double lipschitz_hessian_bound() const = 0;
    virtual std::string name() const = 0;
};

using OraclePtr = std::shared_ptr<const ObjectiveOracle>;

/// l2-regularized logistic regression:
///   f(x) = (1/n) sum_i log(1 + exp(-y_i a_i^T x)) + (l2/2) ||x||^2.
/// The Lipschitz bound is (1/(6 sqrt 3)) (1/n) sum_i ||a_i||^3 plus nothing
/// from the quadratic regularizer.
OraclePtr make_logistic_oracle(Dataset data, double l2);

/// Gaussian features, labels from a random hyperplane with 5% sign flips.
/// Fully deterministic given the seed.
Dataset gen_synthetic(int n, int d, uint64_t seed);

/// Parses LIBSVM sparse text: `<label> <idx>:<val> ...` per line, 1-based
/// strictly increasing indices, '#' comments stripped, blank lines skipped.
/// Labels map: value > 0 becomes +1, else -1. d = largest index observed.
Dataset parse_libsvm(std::istream& in, const std::string& name = "libsvm");
Dataset parse_libsvm_file(const std::string& path);

/// Writes a dataset in LIBSVM text form (nonzero entries only, %.17g values).
void write_libsvm(std::ostream& out, const Dataset& data);

/// Quadratic f(x) = x^T A x / 2 + b^T x; Hessian constant, L = 0.
OraclePtr make_quadratic_oracle(SymMatrix a, Vector b);

/// Chained Rosenbrock. Lipschitz bound documented for the ball ||x|| <= 10.
OraclePtr make_rosenbrock_oracle(int d);

/// f(x) = sum_i x_i^3 / 6; Hessian diag(x), L = 1 in spectral norm globally.
OraclePtr make_sum_of_cubics_oracle(int d);

}  // namespace scc
