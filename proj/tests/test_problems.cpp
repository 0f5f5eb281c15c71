#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "scc/problems.hpp"
#include "scc/rng.hpp"
#include "test_support.hpp"

using namespace scc;

TEST_CASE("logistic value at the origin is log 2") {
    Dataset data = gen_synthetic(40, 6, 3);
    OraclePtr oracle = make_logistic_oracle(data, 0.0);
    Vector x = Vector::Zero(6);
    CHECK(oracle->value(x) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("logistic single sample matches the scalar closed form") {
    Dataset data;
    data.features = Matrix::Zero(1, 2);
    data.features(0, 0) = 1.0;
    data.labels = Vector::Ones(1);
    data.name = "single";
    OraclePtr oracle = make_logistic_oracle(data, 0.0);

    double t = 0.3;
    Vector x(2);
    x << t, 0.0;
    CHECK(oracle->value(x) == doctest::Approx(std::log(1.0 + std::exp(-t))).epsilon(1e-12));

    Vector g_fd = test::fd_gradient(*oracle, x);
    Vector g = oracle->gradient(x);
    CHECK((g - g_fd).norm() <= 1e-8 * (1.0 + g.norm()));
}

TEST_CASE("logistic with zero features reduces to the regularizer Hessian") {
    Dataset data;
    data.features = Matrix::Zero(3, 2);
    data.labels = Vector::Ones(3);
    data.name = "zeros";
    OraclePtr oracle = make_logistic_oracle(data, 1.0);
    Vector x(2);
    x << 0.4, -0.2;
    SymMatrix h = oracle->hessian(x);
    CHECK((h.mat() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("logistic Lipschitz bound formula") {
    Dataset data = gen_synthetic(30, 4, 9);
    OraclePtr oracle = make_logistic_oracle(data, 1e-3);
    double expected = 0.0;
    for (int i = 0; i < data.n(); ++i) {
        double nrm = data.features.row(i).norm();
        expected += nrm * nrm * nrm;
    }
    expected /= 6.0 * std::sqrt(3.0) * data.n();
    CHECK(oracle->lipschitz_hessian_bound() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("finite-difference calculus checks across oracles") {
    Rng rng(17);
    std::vector<OraclePtr> oracles = {
        make_logistic_oracle(gen_synthetic(50, 6, 21), 1e-3),
        make_quadratic_oracle(test::random_symmetric(rng, 5), test::random_vector(rng, 5)),
        make_rosenbrock_oracle(4),
        make_sum_of_cubics_oracle(5),
    };
    for (const OraclePtr& oracle : oracles) {
        for (int trial = 0; trial < 20; ++trial) {
            Vector x = test::random_vector(rng, oracle->dim(), 0.7);
            Vector g = oracle->gradient(x);
            Vector g_fd = test::fd_gradient(*oracle, x);
            CHECK((g - g_fd).norm() <= 1e-5 * (1.0 + g.norm()));

            Matrix h = oracle->hessian(x).mat();
            Matrix h_fd = test::fd_hessian(*oracle, x);
            CHECK((h - h_fd).cwiseAbs().maxCoeff() <=
                  1e-4 * (1.0 + h.cwiseAbs().maxCoeff()));

            Vector v = test::random_vector(rng, oracle->dim());
            CHECK((oracle->hessian_vector(x, v) - h * v).norm() <= 1e-10 * (1.0 + v.norm()));
        }
    }
}

TEST_CASE("logistic Hessian Lipschitz bound holds on random pairs") {
    OraclePtr oracle = make_logistic_oracle(gen_synthetic(60, 8, 5), 1e-3);
    double lips = oracle->lipschitz_hessian_bound();
    Rng rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        Vector x = test::random_vector(rng, 8, 1.0);
        Vector y = x + test::random_vector(rng, 8, 0.3);
        double dist = (x - y).norm();
        double diff = spectral_norm_diff(oracle->hessian(x), oracle->hessian(y));
        CHECK(diff <= lips * dist * (1.0 + 1e-9) + 1e-12);
    }
}

TEST_CASE("gen_synthetic is deterministic and minimally sized") {
    Dataset a = gen_synthetic(20, 3, 42);
    Dataset b = gen_synthetic(20, 3, 42);
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);

    Dataset big = gen_synthetic(500, 50, 1);
    CHECK(std::abs(big.labels.mean()) <= 0.5);

    Dataset tiny = gen_synthetic(1, 1, 0);
    CHECK(tiny.n() == 1);
    CHECK(tiny.d() == 1);
    tiny.validate();
}

TEST_CASE("parse_libsvm on the canonical example") {
    std::istringstream in("+1 1:0.5 3:2\n-1 2:1");
    Dataset data = parse_libsvm(in);
    CHECK(data.n() == 2);
    CHECK(data.d() == 3);
    CHECK(data.features(0, 0) == 0.5);
    CHECK(data.features(0, 1) == 0.0);
    CHECK(data.features(0, 2) == 2.0);
    CHECK(data.features(1, 0) == 0.0);
    CHECK(data.features(1, 1) == 1.0);
    CHECK(data.features(1, 2) == 0.0);
    CHECK(data.labels(0) == 1.0);
    CHECK(data.labels(1) == -1.0);
}

TEST_CASE("parse_libsvm error paths") {
    {
        std::istringstream in("");
        CHECK_THROWS_AS(parse_libsvm(in), ParseError);
    }
    {
        std::istringstream in("1 2:1 1:1");
        CHECK_THROWS_AS(parse_libsvm(in), ParseError);
    }
    {
        std::istringstream in("abc 1:1");
        CHECK_THROWS_AS(parse_libsvm(in), ParseError);
    }
    {
        std::istringstream in("1 0:1");
        CHECK_THROWS_AS(parse_libsvm(in), ParseError);
    }
    {
        std::istringstream in("1 1:not_a_number");
        CHECK_THROWS_AS(parse_libsvm(in), ParseError);
    }
}

TEST_CASE("parse_libsvm skips comments and blank lines; 0 labels map to -1") {
    std::istringstream in("# header comment\n\n+1 2:3.5   # trailing comment\n0 1:1\n");
    Dataset data = parse_libsvm(in);
    CHECK(data.n() == 2);
    CHECK(data.d() == 2);
    CHECK(data.labels(0) == 1.0);
    CHECK(data.labels(1) == -1.0);
    CHECK(data.features(0, 1) == 3.5);
}

TEST_CASE("libsvm write/parse round-trip") {
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        int n = static_cast<int>(rng.uniform_int(1, 12));
        int d = static_cast<int>(rng.uniform_int(1, 9));
        Dataset data;
        data.features.resize(n, d);
        data.labels.resize(n);
        data.name = "roundtrip";
        for (int i = 0; i < n; ++i) {
            data.labels(i) = rng.uniform01() < 0.5 ? -1.0 : 1.0;
            for (int j = 0; j < d; ++j) {
                data.features(i, j) = rng.uniform01() < 0.4 ? 0.0 : rng.gaussian();
            }
        }
        // the writer emits column d only for rows that use it; pin the width
        data.features(0, d - 1) = 1.0;

        std::ostringstream out;
        write_libsvm(out, data);
        std::istringstream in(out.str());
        Dataset back = parse_libsvm(in);
        REQUIRE(back.n() == data.n());
        REQUIRE(back.d() == data.d());
        CHECK(back.features == data.features);
        CHECK(back.labels == data.labels);
    }
}

TEST_CASE("test oracle frozen values") {
    OraclePtr quad = make_quadratic_oracle(SymMatrix::identity(3), Vector::Zero(3));
    Vector x(3);
    x << 0.3, -0.7, 2.0;
    CHECK((quad->gradient(x) - x).norm() <= 1e-15);
    CHECK((quad->hessian(x).mat() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(quad->lipschitz_hessian_bound() == 0.0);

    OraclePtr cubes = make_sum_of_cubics_oracle(2);
    Vector y(2);
    y << 1.0, 2.0;
    Vector g = cubes->gradient(y);
    CHECK(g(0) == doctest::Approx(0.5));
    CHECK(g(1) == doctest::Approx(2.0));
    Matrix h = cubes->hessian(y).mat();
    CHECK(h(0, 0) == doctest::Approx(1.0));
    CHECK(h(1, 1) == doctest::Approx(2.0));
    CHECK(h(0, 1) == 0.0);
    CHECK(cubes->lipschitz_hessian_bound() == 1.0);

    OraclePtr rosen = make_rosenbrock_oracle(2);
    Vector minimizer = Vector::Ones(2);
    CHECK(rosen->gradient(minimizer).norm() == doctest::Approx(0.0));
    CHECK(rosen->value(minimizer) == doctest::Approx(0.0));
}

TEST_CASE("sum_of_cubics Lipschitz property on random pairs") {
    OraclePtr cubes = make_sum_of_cubics_oracle(4);
    Rng rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        Vector x = test::random_vector(rng, 4, 2.0);
        Vector y = x + test::random_vector(rng, 4, 0.5);
        double diff = spectral_norm_diff(cubes->hessian(x), cubes->hessian(y));
        CHECK(diff <= 1.0 * (x - y).norm() * (1.0 + 1e-12));
    }
}

TEST_CASE("dataset invariants are enforced") {
    Dataset bad;
    bad.features = Matrix::Ones(2, 2);
    bad.labels = Vector::Ones(2);
    bad.labels(1) = 0.5;
    CHECK_THROWS_AS(bad.validate(), InvalidParamsError);

    Dataset nan_data;
    nan_data.features = Matrix::Ones(1, 1);
    nan_data.features(0, 0) = std::nan("");
    nan_data.labels = Vector::Ones(1);
    CHECK_THROWS_AS(nan_data.validate(), NonFiniteError);
}
