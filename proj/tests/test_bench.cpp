#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scc/bench.hpp"
#include "scc/matrix_io.hpp"
#include "test_support.hpp"

using namespace scc;

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("matrix container round-trips bit-exactly") {
    {
        std::stringstream buf;
        write_matrix(buf, SymMatrix::identity(3));
        SymMatrix back = read_matrix(buf);
        CHECK((back.mat() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    }
    {
        Rng rng(12);
        SymMatrix m = test::random_symmetric(rng, 10);
        std::stringstream buf;
        write_matrix(buf, m);
        SymMatrix back = read_matrix(buf);
        CHECK((back.mat() - m.mat()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("matrix container rejects corruption") {
    {
        std::stringstream buf;
        write_matrix(buf, SymMatrix::identity(4));
        std::string bytes = buf.str();
        std::istringstream truncated(bytes.substr(0, bytes.size() - 9));
        CHECK_THROWS_AS(read_matrix(truncated), FormatError);
    }
    {
        std::istringstream bad_magic("SCCM2\n3\n");
        CHECK_THROWS_AS(read_matrix(bad_magic), FormatError);
    }
    {
        std::istringstream bad_dim("SCCM1\nnope\n");
        CHECK_THROWS_AS(read_matrix(bad_dim), FormatError);
    }
}

TEST_CASE("config parsing accepts the documented grammar") {
    std::istringstream in(
        "# comparison on synthetic data\n"
        "problem = synthetic\n"
        "n = 40\n"
        "d = 5\n"
        "data_seed = 3\n"
        "l2 = 0.01\n"
        "output_dir = cfg_out\n"
        "repetitions = 2\n"
        "\n"
        "[method fast]\n"
        "driver = async\n"
        "provider = simulated\n"
        "tau = 7\n"
        "rho = 2.5\n"
        "max_iters = 12\n"
        "init = identity:0.5\n"
        "\n"
        "[method base]\n"
        "driver = vanilla\n"
        "tau = 7\n"
        "adaptive = true\n"
        "eta = 0.2\n");
    ExperimentConfig cfg = parse_experiment_config(in);
    CHECK(cfg.problem.kind == ProblemSpec::Kind::synthetic);
    CHECK(cfg.problem.n == 40);
    CHECK(cfg.problem.l2 == 0.01);
    CHECK(cfg.output_dir == "cfg_out");
    CHECK(cfg.repetitions == 2);
    REQUIRE(cfg.methods.size() == 2);
    CHECK(cfg.methods[0].name == "fast");
    CHECK(cfg.methods[0].tau == 7);
    CHECK(cfg.methods[0].run.max_iters == 12);
    CHECK(cfg.methods[0].run.init.kind == InitStrategy::Kind::scaled_identity);
    CHECK(cfg.methods[0].run.init.mu == 0.5);
    CHECK(cfg.methods[1].driver == MethodSpec::Driver::vanilla);
    CHECK(cfg.methods[1].run.adaptive);
    CHECK(cfg.methods[1].run.eta == 0.2);
}

TEST_CASE("config parsing rejects malformed input") {
    {
        std::istringstream in("problem = synthetic\n");
        CHECK_THROWS_AS(parse_experiment_config(in), ConfigError);  // no methods
    }
    {
        std::istringstream in("unknown_key = 1\n[method m]\ndriver = vanilla\n");
        CHECK_THROWS_AS(parse_experiment_config(in), ConfigError);
    }
    {
        std::istringstream in("[method m]\nbad key line\n");
        CHECK_THROWS_AS(parse_experiment_config(in), ConfigError);
    }
    {
        std::istringstream in(
            "problem = libsvm\npath = /no/such/file.libsvm\n[method m]\ndriver = vanilla\n");
        CHECK_THROWS_AS(parse_experiment_config(in), ConfigError);
    }
}

TEST_CASE("trace CSV schema is pinned") {
    CHECK(std::string(kTraceCsvHeader) ==
          "t,f,grad_norm,mu_rho,rho,tau_obs,accepted,r_ratio,step_norm,sigma,"
          "charged_time,wall_grad_ns,wall_hess_ns,wall_decomp_ns,wall_step_ns");
}

TEST_CASE("run_experiment writes traces and a summary, reproducibly") {
    TempDir dir_a("scc_bench_test_a");
    TempDir dir_b("scc_bench_test_b");

    auto make_cfg = [](const std::string& out) {
        std::istringstream in(
            "problem = synthetic\n"
            "n = 30\n"
            "d = 4\n"
            "data_seed = 5\n"
            "output_dir = " + out + "\n"
            "[method v]\n"
            "driver = vanilla\n"
            "tau = 3\n"
            "rho = 4.0\n"
            "max_iters = 15\n"
            "grad_tol = 0\n"
            "[method a]\n"
            "driver = async\n"
            "provider = simulated\n"
            "tau = 3\n"
            "rho = 4.0\n"
            "max_iters = 15\n"
            "grad_tol = 0\n");
        return parse_experiment_config(in);
    };

    std::ostringstream log;
    CHECK(run_experiment(make_cfg(dir_a.path.string()), log) == 0);
    CHECK(run_experiment(make_cfg(dir_b.path.string()), log) == 0);

    for (const char* name : {"v_rep0.csv", "a_rep0.csv", "summary.csv"}) {
        CAPTURE(name);
        REQUIRE(fs::exists(dir_a.path / name));
        std::string a = slurp((dir_a.path / name).string());
        std::string b = slurp((dir_b.path / name).string());
        CHECK(a == b);  // simulated mode is bit-reproducible
    }

    std::string trace = slurp((dir_a.path / "v_rep0.csv").string());
    std::istringstream lines(trace);
    std::string header;
    std::getline(lines, header);
    CHECK(header == kTraceCsvHeader);
    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 15);
}

TEST_CASE("SCC_OUTPUT_DIR overrides the configured directory") {
    TempDir dir("scc_bench_env_dir");
    setenv("SCC_OUTPUT_DIR", dir.path.c_str(), 1);
    std::string resolved = resolve_output_dir("ignored_dir");
    unsetenv("SCC_OUTPUT_DIR");
    CHECK(resolved == dir.path.string());
}

TEST_CASE("profile smoke test at tiny dimension") {
    TempDir dir("scc_bench_profile");
    std::ostringstream log;
    int code = run_profile({1, 3}, 20, 1, dir.path.string(), log);
    CHECK(code == 0);
    std::string csv = slurp((dir.path / "profile.csv").string());
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "d,t_grad_ns,t_hess_ns,t_decomp_ns,t_step_ns");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 2);
    CHECK(run_profile({}, 20, 1, dir.path.string(), log) == 2);
}

TEST_CASE("verification campaigns pass on small budgets") {
    CampaignResult kkt = solver_kkt_campaign(150, 7);
    CHECK(kkt.trials == 150);
    CHECK(kkt.violations == 0);

    auto lemmas = lemma_campaign(40, 7);
    REQUIRE(lemmas.size() == 3);
    for (const CampaignResult& result : lemmas) {
        CHECK(result.trials == 40);
        CHECK(result.violations == 0);
    }
}

TEST_CASE("run_verify usage errors") {
    TempDir dir("scc_bench_verify");
    std::ostringstream log;
    CHECK(run_verify("solver_kkt", 0, 1, dir.path.string(), log) == 2);
    CHECK(run_verify("bogus_suite", 10, 1, dir.path.string(), log) == 2);
}

TEST_CASE("build_oracle covers the test problem kinds") {
    ProblemSpec spec;
    spec.kind = ProblemSpec::Kind::test;
    spec.test_kind = "quadratic";
    spec.test_dim = 3;
    CHECK(build_oracle(spec)->dim() == 3);
    spec.test_kind = "rosenbrock";
    CHECK(build_oracle(spec)->name() == "rosenbrock");
    spec.test_kind = "sum_of_cubics";
    CHECK(build_oracle(spec)->name() == "sum_of_cubics");
    spec.test_kind = "mystery";
    CHECK_THROWS_AS(build_oracle(spec), ConfigError);
}
