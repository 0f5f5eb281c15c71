// scc-bench: benchmark and verification harness for the split-client cubic
// regularization library.
//
//   scc-bench run <config>                      method comparison, CSV traces
//   scc-bench profile --dims 50,100,200,400     per-phase timing vs dimension
//   scc-bench verify --suite all --trials 1000  randomized theory checks

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "scc/bench.hpp"

int main(int argc, char** argv) {
    CLI::App app{"split-client cubic regularization benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run_cmd = app.add_subcommand("run", "run a method-comparison experiment");
    run_cmd->add_option("config", config_path, "experiment config file")->required();

    std::vector<int> dims{50, 100, 200, 400};
    int profile_n = 1000;
    uint64_t profile_seed = 1;
    std::string profile_out = "out";
    CLI::App* profile_cmd =
        app.add_subcommand("profile", "time gradient/Hessian/decomposition/step phases");
    profile_cmd->add_option("--dims", dims, "dimensions to profile")->delimiter(',');
    profile_cmd->add_option("--n", profile_n, "number of samples");
    profile_cmd->add_option("--seed", profile_seed, "data seed");
    profile_cmd->add_option("--output-dir", profile_out, "output directory");

    std::string suite = "all";
    int64_t trials = 1000;
    uint64_t verify_seed = 7;
    std::string verify_out = "out";
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "randomized verification of the theory checkers");
    verify_cmd->add_option("--suite", suite, "lemmas | theorem1 | solver_kkt | all");
    verify_cmd->add_option("--trials", trials, "trials per campaign");
    verify_cmd->add_option("--seed", verify_seed, "campaign seed");
    verify_cmd->add_option("--output-dir", verify_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            scc::ExperimentConfig cfg;
            try {
                cfg = scc::load_experiment_config(config_path);
            } catch (const scc::Error& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return 2;
            }
            return scc::run_experiment(cfg, std::cout);
        }
        if (profile_cmd->parsed()) {
            if (profile_n < 1) {
                std::cerr << "profile: --n must be >= 1\n";
                return 2;
            }
            int code = scc::run_profile(dims, profile_n, profile_seed, profile_out,
                                        std::cout);
            if (code == 2) std::cerr << "profile: --dims must be nonempty\n";
            return code;
        }
        if (verify_cmd->parsed()) {
            return scc::run_verify(suite, trials, verify_seed, verify_out, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
