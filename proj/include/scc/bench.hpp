#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scc/optimizer.hpp"
#include "scc/problems.hpp"

namespace scc {

class ConfigError : public Error {
public:
    using Error::Error;
};

/// What to optimize. Exactly one of the three problem kinds is active.
struct ProblemSpec {
    enum class Kind { synthetic, libsvm, test };
    Kind kind = Kind::synthetic;

    // synthetic
    int n = 500;
    int d = 50;
    uint64_t data_seed = 1;

    // libsvm
    std::string path;

    // test
    std::string test_kind = "quadratic";  // quadratic | rosenbrock | sum_of_cubics
    int test_dim = 10;

    double l2 = 1e-3;  // logistic regularization
};

struct MethodSpec {
    std::string name;

    enum class Driver { async, vanilla, lazy };
    Driver driver = Driver::async;

    enum class Provider { simulated, threaded, lbfgs };
    Provider provider = Provider::simulated;  // async only

    int64_t tau = 0;  // simulated fixed delay; accounting cost for vanilla/lazy
    std::optional<int64_t> tau_min, tau_max;  // random schedule when both set
    uint64_t schedule_seed = 0;
    int64_t period = 1;        // lazy
    int lbfgs_memory = 10;
    double worker_sleep_ms = 0.0;  // threaded

    double rho = 1.0;
    std::optional<double> rho_times_L;  // overrides rho with value * L(oracle)

    RunConfig run;
};

struct ExperimentConfig {
    ProblemSpec problem;
    std::vector<MethodSpec> methods;
    std::string output_dir = "out";
    int repetitions = 1;
};

/// Parses the flat key-value config text (grammar in the README). Throws
/// ConfigError on unknown keys, malformed values, or missing dataset paths.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::string& path);

OraclePtr build_oracle(const ProblemSpec& problem);

/// The run CSV schema shared by every driver trace.
extern const char* const kTraceCsvHeader;

void write_trace_csv(std::ostream& out, const RunTrace& trace);

/// Executes every method x repetition, writes one trace CSV per run plus
/// summary.csv with time-to-threshold per run. Returns a process exit code:
/// 0 ok, 3 when a run threw (already-written traces are kept).
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);

/// Times gradient, Hessian, factorization, and the cubic step (given the
/// factorization) on logistic synthetic data, median of five repeats per
/// dimension. Writes CSV: d,t_grad_ns,t_hess_ns,t_decomp_ns,t_step_ns.
int run_profile(const std::vector<int>& dims, int n, uint64_t seed,
                const std::string& output_dir, std::ostream& log);

// --------------------------------------------------------------------------
// Verification campaigns (cmd_verify). Each returns the number of trials
// executed and records the first falsifying instance, if any.

struct CampaignResult {
    std::string name;
    int64_t trials = 0;
    int64_t violations = 0;
    std::string first_violation;

    bool ok() const { return violations == 0; }
};

/// Random cubic models (d <= 20, indefinite allowed): every CubicSolution
/// invariant is checked — shift identity, positive semidefinite shifted
/// curvature, KKT residual, nonnegative decrease.
CampaignResult solver_kkt_campaign(int64_t trials, uint64_t seed);

/// Randomized sweep of the one-step and per-lemma инequalities on
/// sum-of-cubics and logistic oracles with injected gradient/Hessian error.
std::vector<CampaignResult> lemma_campaign(int64_t trials, uint64_t seed);

/// Random windowed-sum sequences; binds the derived (tau+1)^3/3 form.
CampaignResult sum_bound_campaign(int64_t trials, uint64_t seed);

/// Prefix-averaged stationarity vs the fixed-rho bound on delayed logistic
/// runs with tau in {0, 5, 20}.
CampaignResult theorem1_campaign(uint64_t seed);

/// Dispatches a suite by name: lemmas | theorem1 | solver_kkt | all.
/// Returns exit code 0 (clean), 4 (violation; falsifier dumped to a file in
/// output_dir), or 2 (usage).
int run_verify(const std::string& suite, int64_t trials, uint64_t seed,
               const std::string& output_dir, std::ostream& log);

/// Applies the SCC_OUTPUT_DIR override and creates the directory.
std::string resolve_output_dir(const std::string& configured);

}  // namespace scc
