#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "scc/cubic_solver.hpp"
#include "scc/problems.hpp"
#include "scc/rng.hpp"
#include "test_support.hpp"

using namespace scc;

namespace {

std::shared_ptr<const SpectralFactorization> factorize(const SymMatrix& h) {
    return std::make_shared<SpectralFactorization>(sym_eig(h));
}

CubicModel make_model(const Matrix& h, const Vector& g, double rho) {
    return CubicModel(g, factorize(SymMatrix(h)), rho);
}

void check_solution_invariants(const CubicModel& model, const CubicSolution& sol) {
    double lam_min = model.f().lambda_min();
    CHECK(std::abs(sol.sigma_star - 0.5 * model.rho * sol.r) <=
          1e-8 * (1.0 + sol.sigma_star));
    CHECK(lam_min + sol.sigma_star >= -1e-10 * (1.0 + std::abs(lam_min)));
    CHECK(sol.kkt_residual <= 1e-8 * (1.0 + model.g.norm()));
    CHECK(sol.model_decrease >= 0.0);
    CHECK(std::abs(sol.r - sol.s.norm()) <= 1e-12 * (1.0 + sol.r));
}

}  // namespace

TEST_CASE("secular_phi frozen values") {
    Vector g(2);
    g << 3.0, 4.0;
    CubicModel model = make_model(Matrix::Identity(2, 2), g, 2.0);
    CHECK(secular_phi(model, 0.0) == doctest::Approx(-5.0).epsilon(1e-12));

    double root = (-1.0 + std::sqrt(21.0)) / 2.0;  // sigma (1 + sigma) = 5
    CHECK(secular_phi(model, root) == doctest::Approx(0.0).epsilon(1e-9));

    CubicModel trivial = make_model(Matrix::Identity(2, 2), Vector::Zero(2), 1.0);
    CHECK(secular_phi(trivial, 0.0) == 0.0);
}

TEST_CASE("secular_phi rejects singular shifts") {
    Vector d(2);
    d << -1.0, 3.0;
    Vector g = Vector::Ones(2);
    CubicModel model = make_model(Matrix(d.asDiagonal()), g, 1.0);
    CHECK_THROWS_AS(secular_phi(model, 1.0), SingularShiftError);
}

TEST_CASE("bracket_sigma frozen examples") {
    Vector g(2);
    g << 3.0, 4.0;
    CubicModel model = make_model(Matrix::Identity(2, 2), g, 2.0);
    auto [lo, hi] = bracket_sigma(model);
    double root = (-1.0 + std::sqrt(21.0)) / 2.0;
    CHECK(lo <= 1e-10);
    CHECK(hi >= root);
    CHECK(secular_phi(model, hi) >= 0.0);

    CubicModel trivial = make_model(Matrix::Identity(3, 3), Vector::Zero(3), 1.0);
    auto [lo2, hi2] = bracket_sigma(trivial);
    CHECK(lo2 == hi2);  // collapsed: the root is sigma* = 0

    Vector d(2);
    d << -1.0, 3.0;
    CubicModel indef = make_model(Matrix(d.asDiagonal()), Vector::Ones(2), 1.0);
    auto [lo3, hi3] = bracket_sigma(indef);
    CHECK(lo3 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(secular_phi(indef, hi3) >= 0.0);
}

TEST_CASE("solve_cubic trivial and scalar closed forms") {
    {
        CubicModel model = make_model(Matrix::Identity(2, 2), Vector::Zero(2), 3.0);
        CubicSolution sol = solve_cubic(model);
        CHECK(sol.s.norm() == 0.0);
        CHECK(sol.sigma_star == 0.0);
        check_solution_invariants(model, sol);
    }
    {
        // d = 1: g = 1, H = 0, rho = 2  =>  s = -1, sigma* = 1
        CubicModel model = make_model(Matrix::Zero(1, 1), Vector::Ones(1), 2.0);
        CubicSolution sol = solve_cubic(model);
        CHECK(sol.s(0) == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(sol.sigma_star == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(sol.r == doctest::Approx(1.0).epsilon(1e-9));
        check_solution_invariants(model, sol);
    }
    {
        // d = 1 hard case: g = 0, H = -1, rho = 1  =>  |s| = 2, value -2/3;
        // the sign tie-break picks the positive eigenvector direction
        CubicModel model = make_model(-Matrix::Identity(1, 1), Vector::Zero(1), 1.0);
        CubicSolution sol = solve_cubic(model);
        CHECK(sol.hard_case);
        CHECK(sol.s(0) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(sol.sigma_star == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(model_value(model, sol.s) == doctest::Approx(-2.0 / 3.0).epsilon(1e-9));
        check_solution_invariants(model, sol);
    }
}

TEST_CASE("solve_cubic crafted 2d hard case") {
    // g orthogonal to the bottom eigenspace of diag(-2, 1)
    Matrix h(2, 2);
    h << -2.0, 0.0, 0.0, 1.0;
    Vector g(2);
    g << 0.0, 3.0;
    CubicModel model = make_model(h, g, 1.0);
    CubicSolution sol = solve_cubic(model);
    CHECK(sol.hard_case);
    CHECK(sol.sigma_star == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(sol.r == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(sol.s(0) == doctest::Approx(std::sqrt(15.0)).epsilon(1e-9));
    CHECK(sol.s(1) == doctest::Approx(-1.0).epsilon(1e-9));
    check_solution_invariants(model, sol);

    // global optimality against the multistart oracle
    Rng rng(5);
    double best = test::brute_force_cubic_min(g, SymMatrix(h), 1.0, rng);
    CHECK(model_value(model, sol.s) <= best + 1e-6);
}

TEST_CASE("model_value direct arithmetic") {
    Vector g(2);
    g << 1.0, 0.0;
    CubicModel model = make_model(Matrix::Identity(2, 2), g, 6.0);
    Vector s(2);
    s << 1.0, 0.0;
    CHECK(model_value(model, s) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(model_value(model, Vector::Zero(2)) == 0.0);
}

TEST_CASE("solve_cubic matches brute force on random d <= 3 models") {
    Rng rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        test::RandomCubicModel draw = test::random_cubic_model(rng, 3);
        CubicModel model(draw.g, factorize(draw.h), draw.rho);
        CubicSolution sol = solve_cubic(model);
        check_solution_invariants(model, sol);
        double best = test::brute_force_cubic_min(draw.g, draw.h, draw.rho, rng);
        CHECK(model_value(model, sol.s) <= best + 1e-6);
    }
}

TEST_CASE("solve_cubic random d = 8 models against the oracle") {
    Rng rng(202);
    for (int trial = 0; trial < 10; ++trial) {
        Vector g = test::random_vector(rng, 8, 1.0);
        SymMatrix h = test::random_symmetric(rng, 8, 1.0);
        CubicModel model(g, factorize(h), 2.0);
        CubicSolution sol = solve_cubic(model);
        check_solution_invariants(model, sol);
        double best = test::brute_force_cubic_min(g, h, 2.0, rng, 80, 500);
        CHECK(model_value(model, sol.s) <= best + 1e-6);
    }
}

TEST_CASE("solution invariants on a randomized sweep") {
    Rng rng(303);
    for (int trial = 0; trial < 200; ++trial) {
        test::RandomCubicModel draw = test::random_cubic_model(rng);
        CubicModel model(draw.g, factorize(draw.h), draw.rho);
        CubicSolution sol = solve_cubic(model);
        check_solution_invariants(model, sol);
    }
}

TEST_CASE("phi is nondecreasing across sampled brackets") {
    Rng rng(17);
    for (int trial = 0; trial < 15; ++trial) {
        test::RandomCubicModel draw = test::random_cubic_model(rng, 6);
        if (draw.g.norm() == 0.0) continue;
        CubicModel model(draw.g, factorize(draw.h), draw.rho);
        auto [lo, hi] = bracket_sigma(model);
        if (lo == hi) continue;
        CHECK(secular_phi(model, lo) <= 0.0);
        CHECK(secular_phi(model, hi) >= 0.0);
        double prev = secular_phi(model, lo);
        for (int k = 1; k <= 10; ++k) {
            double sigma = lo + (hi - lo) * k / 10.0;
            double cur = secular_phi(model, sigma);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("warm start never loses by much and usually wins") {
    // re-solve the models of a short logistic run both cold and warm-started
    OraclePtr oracle = make_logistic_oracle(gen_synthetic(80, 10, 4), 1e-3);
    Vector x = Vector::Zero(10);
    double rho = std::max(1.0, oracle->lipschitz_hessian_bound());
    int warm_not_worse = 0;
    int steps = 40;
    std::optional<double> warm;
    for (int t = 0; t < steps; ++t) {
        auto f = factorize(oracle->hessian(x));
        CubicModel model(oracle->gradient(x), f, rho);
        CubicSolveOptions warm_opts;
        warm_opts.warm_start_sigma = warm;
        CubicSolution with_warm = solve_cubic(model, warm_opts);
        CubicSolution cold = solve_cubic(model);
        if (with_warm.iterations_used <= cold.iterations_used) ++warm_not_worse;
        warm = with_warm.sigma_star;
        x += with_warm.s;
    }
    CHECK(warm_not_worse >= static_cast<int>(0.9 * steps));
}

TEST_CASE("max_step_norm caps the step") {
    Vector g(3);
    g << 4.0, -2.0, 1.0;
    CubicModel model = make_model(Matrix::Identity(3, 3), g, 0.05);
    CubicSolution uncapped = solve_cubic(model);
    REQUIRE(uncapped.r > 1.0);

    CubicSolveOptions opts;
    opts.max_step_norm = 1.0;
    CubicSolution capped = solve_cubic(model, opts);
    CHECK(capped.step_capped);
    CHECK(capped.r == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(capped.sigma_star >= 0.5 * model.rho * capped.r - 1e-9);
    CHECK(capped.kkt_residual <= 1e-8 * (1.0 + g.norm()));
}

TEST_CASE("non-finite gradient is rejected at model construction") {
    Vector g(2);
    g << std::nan(""), 1.0;
    auto f = factorize(SymMatrix::identity(2));
    CHECK_THROWS_AS(CubicModel(g, f, 1.0), NonFiniteError);
    CHECK_THROWS_AS(CubicModel(Vector::Ones(2), f, 0.0), InvalidParamsError);
}

TEST_CASE("near-hard-case instances stay certified") {
    // shrink the gradient component on the bottom eigenspace toward zero
    Matrix h(2, 2);
    h << -1.0, 0.0, 0.0, 2.0;
    for (double c : {1e-2, 1e-6, 1e-10, 1e-14, 0.0}) {
        Vector g(2);
        g << c, 1.0;
        CubicModel model = make_model(h, g, 3.0);
        CubicSolution sol = solve_cubic(model);
        check_solution_invariants(model, sol);
    }
}
