#include "scc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "scc/analysis.hpp"
#include "scc/cubic_solver.hpp"
#include "scc/curvature.hpp"
#include "scc/matrix_io.hpp"
#include "scc/rng.hpp"

namespace scc {

namespace {

using Clock = std::chrono::steady_clock;

int64_t elapsed_ns(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start)
        .count();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + value);
    }
}

int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for '" + key + "': " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("bad boolean value for '" + key + "': " + value);
}

InitStrategy parse_init(const std::string& value) {
    if (value == "zero") return InitStrategy::zero();
    if (value == "diagonal") return InitStrategy::diagonal();
    size_t colon = value.find(':');
    std::string head = colon == std::string::npos ? value : value.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : value.substr(colon + 1);
    if (head == "identity") {
        return InitStrategy::scaled_identity(arg.empty() ? 1.0
                                                         : parse_double("init", arg));
    }
    if (head == "lbfgs_warmup") {
        return InitStrategy::lbfgs_warmup(arg.empty() ? 5
                                                      : static_cast<int>(parse_int("init", arg)));
    }
    if (head == "recycled") {
        if (arg.empty()) throw ConfigError("init = recycled:<path> needs a path");
        return InitStrategy::recycled(arg);
    }
    throw ConfigError("unknown init strategy: " + value);
}

void apply_problem_key(ProblemSpec& problem, const std::string& key,
                       const std::string& value) {
    if (key == "problem") {
        if (value == "synthetic") problem.kind = ProblemSpec::Kind::synthetic;
        else if (value == "libsvm") problem.kind = ProblemSpec::Kind::libsvm;
        else if (value == "test") problem.kind = ProblemSpec::Kind::test;
        else throw ConfigError("unknown problem kind: " + value);
    } else if (key == "n") {
        problem.n = static_cast<int>(parse_int(key, value));
    } else if (key == "d") {
        problem.d = static_cast<int>(parse_int(key, value));
    } else if (key == "data_seed") {
        problem.data_seed = static_cast<uint64_t>(parse_int(key, value));
    } else if (key == "path") {
        problem.path = value;
    } else if (key == "kind") {
        problem.test_kind = value;
    } else if (key == "test_dim") {
        problem.test_dim = static_cast<int>(parse_int(key, value));
    } else if (key == "l2") {
        problem.l2 = parse_double(key, value);
    } else {
        throw ConfigError("unknown problem key: " + key);
    }
}

void apply_method_key(MethodSpec& method, const std::string& key,
                      const std::string& value) {
    if (key == "driver") {
        if (value == "async") method.driver = MethodSpec::Driver::async;
        else if (value == "vanilla") method.driver = MethodSpec::Driver::vanilla;
        else if (value == "lazy") method.driver = MethodSpec::Driver::lazy;
        else throw ConfigError("unknown driver: " + value);
    } else if (key == "provider") {
        if (value == "simulated") method.provider = MethodSpec::Provider::simulated;
        else if (value == "threaded") method.provider = MethodSpec::Provider::threaded;
        else if (value == "lbfgs") method.provider = MethodSpec::Provider::lbfgs;
        else throw ConfigError("unknown provider: " + value);
    } else if (key == "tau") {
        method.tau = parse_int(key, value);
    } else if (key == "tau_min") {
        method.tau_min = parse_int(key, value);
    } else if (key == "tau_max") {
        method.tau_max = parse_int(key, value);
    } else if (key == "schedule_seed") {
        method.schedule_seed = static_cast<uint64_t>(parse_int(key, value));
    } else if (key == "period") {
        method.period = parse_int(key, value);
    } else if (key == "lbfgs_memory") {
        method.lbfgs_memory = static_cast<int>(parse_int(key, value));
    } else if (key == "worker_sleep_ms") {
        method.worker_sleep_ms = parse_double(key, value);
    } else if (key == "rho") {
        method.rho = parse_double(key, value);
    } else if (key == "rho_times_L") {
        method.rho_times_L = parse_double(key, value);
    } else if (key == "adaptive") {
        method.run.adaptive = parse_bool(key, value);
    } else if (key == "eta") {
        method.run.eta = parse_double(key, value);
    } else if (key == "rho_inc") {
        method.run.rho_inc = parse_double(key, value);
    } else if (key == "rho_dec") {
        method.run.rho_dec = parse_double(key, value);
    } else if (key == "rho_min") {
        method.run.rho_min = parse_double(key, value);
    } else if (key == "max_iters") {
        method.run.max_iters = parse_int(key, value);
    } else if (key == "grad_tol") {
        method.run.grad_tol = parse_double(key, value);
    } else if (key == "eig_tol") {
        method.run.eig_tol = parse_double(key, value);
    } else if (key == "init") {
        method.run.init = parse_init(value);
    } else if (key == "seed") {
        method.run.seed = static_cast<uint64_t>(parse_int(key, value));
    } else if (key == "max_step_norm") {
        double v = parse_double(key, value);
        method.run.max_step_norm = v > 0.0 ? std::optional<double>(v) : std::nullopt;
    } else if (key == "curvature_ridge") {
        method.run.curvature_ridge = parse_double(key, value);
    } else if (key == "record_mu") {
        method.run.record_mu = parse_bool(key, value);
    } else if (key == "min_step_ms") {
        method.run.min_step_ms = parse_double(key, value);
    } else {
        throw ConfigError("unknown method key: " + key);
    }
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in) {
    ExperimentConfig cfg;
    MethodSpec* current = nullptr;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            }
            std::istringstream header(line.substr(1, line.size() - 2));
            std::string tag, name;
            header >> tag >> name;
            if (tag != "method" || name.empty()) {
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": expected [method <name>]");
            }
            cfg.methods.emplace_back();
            current = &cfg.methods.back();
            current->name = name;
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        }

        if (current) {
            apply_method_key(*current, key, value);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "repetitions") {
            cfg.repetitions = static_cast<int>(parse_int(key, value));
        } else {
            apply_problem_key(cfg.problem, key, value);
        }
    }
    if (cfg.methods.empty()) throw ConfigError("config declares no methods");
    if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (cfg.problem.kind == ProblemSpec::Kind::libsvm) {
        if (cfg.problem.path.empty()) throw ConfigError("libsvm problem needs path = ...");
        if (!std::filesystem::exists(cfg.problem.path)) {
            throw ConfigError("dataset path does not exist: " + cfg.problem.path);
        }
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    return parse_experiment_config(in);
}

OraclePtr build_oracle(const ProblemSpec& problem) {
    switch (problem.kind) {
        case ProblemSpec::Kind::synthetic:
            return make_logistic_oracle(
                gen_synthetic(problem.n, problem.d, problem.data_seed), problem.l2);
        case ProblemSpec::Kind::libsvm:
            return make_logistic_oracle(parse_libsvm_file(problem.path), problem.l2);
        case ProblemSpec::Kind::test: {
            if (problem.test_kind == "quadratic") {
                return make_quadratic_oracle(SymMatrix::identity(problem.test_dim),
                                             -Vector::Ones(problem.test_dim));
            }
            if (problem.test_kind == "rosenbrock") {
                return make_rosenbrock_oracle(problem.test_dim);
            }
            if (problem.test_kind == "sum_of_cubics") {
                return make_sum_of_cubics_oracle(problem.test_dim);
            }
            throw ConfigError("unknown test kind: " + problem.test_kind);
        }
    }
    throw ConfigError("unreachable problem kind");
}

const char* const kTraceCsvHeader =
    "t,f,grad_norm,mu_rho,rho,tau_obs,accepted,r_ratio,step_norm,sigma,charged_time,"
    "wall_grad_ns,wall_hess_ns,wall_decomp_ns,wall_step_ns";

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
    out << kTraceCsvHeader << '\n';
    for (const IterRecord& row : trace.rows) {
        out << row.t << ',' << format_double(row.f) << ',' << format_double(row.grad_norm)
            << ',' << format_double(row.mu_rho) << ',' << format_double(row.rho) << ','
            << row.tau_obs << ',' << (row.accepted ? 1 : 0) << ','
            << format_double(row.accept_ratio) << ',' << format_double(row.step_norm)
            << ',' << format_double(row.sigma) << ',' << row.charged_time << ','
            << row.wall_grad_ns << ',' << row.wall_hess_ns << ',' << row.wall_decomp_ns
            << ',' << row.wall_step_ns << '\n';
    }
}

std::string resolve_output_dir(const std::string& configured) {
    std::string dir = configured;
    if (const char* env = std::getenv("SCC_OUTPUT_DIR"); env && *env) dir = env;
    std::filesystem::create_directories(dir);
    return dir;
}

namespace {

RunTrace execute_method(const OraclePtr& oracle, const MethodSpec& method,
                        const RunConfig& run_cfg) {
    switch (method.driver) {
        case MethodSpec::Driver::vanilla:
            return run_vanilla(*oracle, run_cfg, method.tau);
        case MethodSpec::Driver::lazy:
            return run_lazy(*oracle, run_cfg, method.period, method.tau);
        case MethodSpec::Driver::async: {
            DelaySchedule schedule =
                method.tau_min && method.tau_max
                    ? DelaySchedule::uniform(*method.tau_min, *method.tau_max,
                                             method.schedule_seed)
                    : DelaySchedule::fixed(method.tau);
            switch (method.provider) {
                case MethodSpec::Provider::simulated: {
                    SimulatedProvider provider(oracle, schedule, run_cfg.curvature_ridge);
                    return run_split_client(*oracle, run_cfg, provider);
                }
                case MethodSpec::Provider::lbfgs: {
                    LbfgsProvider provider(oracle, schedule, method.lbfgs_memory,
                                           run_cfg.curvature_ridge);
                    return run_split_client(*oracle, run_cfg, provider);
                }
                case MethodSpec::Provider::threaded: {
                    ThreadedProvider::Options opts;
                    opts.ridge = run_cfg.curvature_ridge;
                    opts.extra_sleep_ms = method.worker_sleep_ms;
                    ThreadedProvider provider(oracle, opts);
                    return run_split_client(*oracle, run_cfg, provider);
                }
            }
            break;
        }
    }
    throw ConfigError("unreachable driver kind");
}

double estimate_f_star(const OraclePtr& oracle) {
    RunConfig cfg;
    cfg.adaptive = true;
    cfg.rho = 1.0;
    cfg.max_iters = 1000;
    cfg.grad_tol = 1e-10;
    cfg.record_mu = false;
    RunTrace trace = run_vanilla(*oracle, cfg, 0);
    return trace.final_f;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    std::string out_dir = resolve_output_dir(cfg.output_dir);
    OraclePtr oracle = build_oracle(cfg.problem);

    double f_star = estimate_f_star(oracle);
    double threshold = f_star + 1e-6 * (1.0 + std::abs(f_star));
    log << "# f_star estimate " << format_double(f_star) << ", loss threshold "
        << format_double(threshold) << "\n";

    std::ofstream summary(out_dir + "/summary.csv");
    summary << "method,rep,status,iters,final_f,final_grad_norm,threshold,reached,"
               "time_to_threshold,time_unit\n";

    int exit_code = 0;
    for (const MethodSpec& method : cfg.methods) {
        for (int rep = 0; rep < cfg.repetitions; ++rep) {
            RunConfig run_cfg = method.run;
            run_cfg.seed = method.run.seed + static_cast<uint64_t>(rep);
            if (method.rho_times_L) {
                run_cfg.rho = *method.rho_times_L * oracle->lipschitz_hessian_bound();
            } else {
                run_cfg.rho = method.rho;
            }

            RunTrace trace;
            try {
                trace = execute_method(oracle, method, run_cfg);
            } catch (const std::exception& e) {
                log << "run failure in method '" << method.name << "' rep " << rep << ": "
                    << e.what() << "\n";
                exit_code = 3;
                continue;
            }

            std::string csv_path =
                out_dir + "/" + method.name + "_rep" + std::to_string(rep) + ".csv";
            std::ofstream csv(csv_path);
            write_trace_csv(csv, trace);

            const bool wall_mode = method.driver == MethodSpec::Driver::async &&
                                   method.provider == MethodSpec::Provider::threaded;
            int64_t time_to_threshold = -1;
            for (const IterRecord& row : trace.rows) {
                if (row.f <= threshold) {
                    time_to_threshold = wall_mode ? row.wall_elapsed_ns : row.charged_time;
                    break;
                }
            }
            summary << method.name << ',' << rep << ',' << to_string(trace.status) << ','
                    << trace.rows.size() << ',' << format_double(trace.final_f) << ','
                    << format_double(trace.rows.empty() ? 0.0
                                                        : trace.rows.back().grad_norm)
                    << ',' << format_double(threshold) << ','
                    << (time_to_threshold >= 0 ? 1 : 0) << ',' << time_to_threshold << ','
                    << (wall_mode ? "wall_ns" : "charged") << '\n';
            log << "method " << method.name << " rep " << rep << ": "
                << to_string(trace.status) << " after " << trace.rows.size()
                << " iterations, final f = " << format_double(trace.final_f) << "\n";
        }
    }
    return exit_code;
}

int run_profile(const std::vector<int>& dims, int n, uint64_t seed,
                const std::string& output_dir, std::ostream& log) {
    if (dims.empty()) return 2;
    std::string out_dir = resolve_output_dir(output_dir);
    std::ofstream csv(out_dir + "/profile.csv");
    csv << "d,t_grad_ns,t_hess_ns,t_decomp_ns,t_step_ns\n";

    for (int d : dims) {
        OraclePtr oracle = make_logistic_oracle(gen_synthetic(n, d, seed), 1e-3);
        Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
        Vector x(d);
        for (int i = 0; i < d; ++i) x(i) = 0.1 * rng.gaussian();

        std::vector<int64_t> grad_ns, hess_ns, decomp_ns, step_ns;
        for (int rep = 0; rep < 5; ++rep) {
            auto t0 = Clock::now();
            Vector g = oracle->gradient(x);
            grad_ns.push_back(elapsed_ns(t0));

            t0 = Clock::now();
            SymMatrix h = oracle->hessian(x);
            hess_ns.push_back(elapsed_ns(t0));

            t0 = Clock::now();
            auto f = std::make_shared<SpectralFactorization>(sym_eig(h));
            decomp_ns.push_back(elapsed_ns(t0));

            CubicModel model(g, f, std::max(1.0, oracle->lipschitz_hessian_bound()));
            t0 = Clock::now();
            CubicSolution sol = solve_cubic(model);
            step_ns.push_back(elapsed_ns(t0));
            (void)sol;
        }
        auto median = [](std::vector<int64_t>& v) {
            std::sort(v.begin(), v.end());
            return v[v.size() / 2];
        };
        int64_t g_med = median(grad_ns), h_med = median(hess_ns),
                d_med = median(decomp_ns), s_med = median(step_ns);
        csv << d << ',' << g_med << ',' << h_med << ',' << d_med << ',' << s_med << '\n';
        log << "d=" << d << " grad=" << g_med << "ns hess=" << h_med
            << "ns decomp=" << d_med << "ns step=" << s_med << "ns\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Verification campaigns

namespace {

struct ModelDraw {
    Vector g;
    SymMatrix h;
    double rho;

    ModelDraw(Vector g_, SymMatrix h_, double rho_)
        : g(std::move(g_)), h(std::move(h_)), rho(rho_) {}
};

Vector draw_vector(Rng& rng, int d, double scale) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = scale * rng.gaussian();
    return v;
}

SymMatrix draw_symmetric(Rng& rng, int d, double scale) {
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = scale * rng.gaussian();
    return SymMatrix(a);
}

ModelDraw draw_model(Rng& rng, int d_max) {
    int d = static_cast<int>(rng.uniform_int(1, d_max));
    SymMatrix h = draw_symmetric(rng, d, std::pow(10.0, rng.uniform(-1.0, 1.0)));
    Vector g = draw_vector(rng, d, std::pow(10.0, rng.uniform(-2.0, 1.0)));
    double rho = std::pow(10.0, rng.uniform(-1.0, 2.0));
    if (rng.uniform01() < 0.15) {
        SpectralFactorization f = sym_eig(h);
        Vector coeffs = f.eigenvectors.transpose() * g;
        coeffs(0) = 0.0;
        g = f.eigenvectors * coeffs;
    }
    if (rng.uniform01() < 0.05) g.setZero();
    return ModelDraw(std::move(g), std::move(h), rho);
}

std::string dump_model(const ModelDraw& draw, const CubicSolution& sol,
                       const std::string& reason) {
    std::ostringstream out;
    out << "reason: " << reason << "\n";
    out << "d: " << draw.g.size() << "\nrho: " << format_double(draw.rho) << "\n";
    out << "g:";
    for (int i = 0; i < draw.g.size(); ++i) out << ' ' << format_double(draw.g(i));
    out << "\nH (row major):";
    for (int i = 0; i < draw.h.dim(); ++i)
        for (int j = 0; j < draw.h.dim(); ++j) out << ' ' << format_double(draw.h(i, j));
    out << "\nsigma_star: " << format_double(sol.sigma_star)
        << "\nr: " << format_double(sol.r)
        << "\nkkt: " << format_double(sol.kkt_residual) << "\n";
    return out.str();
}

}  // namespace

CampaignResult solver_kkt_campaign(int64_t trials, uint64_t seed) {
    CampaignResult result;
    result.name = "solver_kkt";
    Rng rng(seed);
    for (int64_t trial = 0; trial < trials; ++trial) {
        ModelDraw draw = draw_model(rng, 20);
        auto f = std::make_shared<SpectralFactorization>(sym_eig(draw.h));
        CubicModel model(draw.g, f, draw.rho);
        CubicSolution sol = solve_cubic(model);
        ++result.trials;

        std::string reason;
        double shift_err = std::abs(sol.sigma_star - 0.5 * draw.rho * sol.r);
        if (shift_err > 1e-8 * (1.0 + sol.sigma_star)) reason = "shift identity";
        double lam_min = f->lambda_min();
        if (reason.empty() && lam_min + sol.sigma_star < -1e-10 * (1.0 + std::abs(lam_min))) {
            reason = "shifted curvature not PSD";
        }
        if (reason.empty() && sol.kkt_residual > 1e-8 * (1.0 + draw.g.norm())) {
            reason = "KKT residual";
        }
        if (reason.empty() && sol.model_decrease < 0.0) reason = "negative decrease";
        if (!reason.empty()) {
            ++result.violations;
            if (result.first_violation.empty()) {
                result.first_violation = dump_model(draw, sol, reason);
            }
        }
    }
    return result;
}

std::vector<CampaignResult> lemma_campaign(int64_t trials, uint64_t seed) {
    std::vector<CampaignResult> results(3);
    results[0].name = "one_step";
    results[1].name = "cubicfunc";
    results[2].name = "grad_and_eig";

    Rng rng(seed);
    OraclePtr cubics = make_sum_of_cubics_oracle(5);
    OraclePtr logistic = make_logistic_oracle(gen_synthetic(60, 10, seed ^ 0xabcdef), 1e-3);

    for (int64_t trial = 0; trial < trials; ++trial) {
        const ObjectiveOracle& oracle = (trial % 2 == 0) ? *cubics : *logistic;
        int d = oracle.dim();
        Vector x = draw_vector(rng, d, 0.5);
        double grad_scale = rng.uniform01() < 0.2 ? 0.0 : std::pow(10.0, rng.uniform(-4.0, 0.0));
        double hess_scale = rng.uniform01() < 0.2 ? 0.0 : std::pow(10.0, rng.uniform(-3.0, 1.0));
        Vector g_used = oracle.gradient(x) + draw_vector(rng, d, grad_scale);
        SymMatrix h_used(oracle.hessian(x).mat() + draw_symmetric(rng, d, hess_scale).mat());
        double m_reg =
            oracle.lipschitz_hessian_bound() * std::pow(10.0, rng.uniform(0.0, 2.0));
        if (m_reg <= 0.0) m_reg = 1.0;

        TheoryReport reports[3] = {
            check_one_step(oracle, x, g_used, h_used, m_reg),
            check_lemma_cubicfunc(oracle, x, g_used, h_used, m_reg),
            check_lemma_grad_and_eig(oracle, x, g_used, h_used, m_reg),
        };
        for (int i = 0; i < 3; ++i) {
            ++results[static_cast<size_t>(i)].trials;
            if (!reports[i].satisfied) {
                ++results[static_cast<size_t>(i)].violations;
                if (results[static_cast<size_t>(i)].first_violation.empty()) {
                    std::ostringstream out;
                    out << "trial " << trial << " oracle " << oracle.name()
                        << " lhs " << format_double(reports[i].lhs) << " rhs "
                        << format_double(reports[i].rhs) << " M " << format_double(m_reg);
                    results[static_cast<size_t>(i)].first_violation = out.str();
                }
            }
        }
    }
    return results;
}

CampaignResult sum_bound_campaign(int64_t trials, uint64_t seed) {
    CampaignResult result;
    result.name = "sum_bound";
    Rng rng(seed);
    for (int64_t trial = 0; trial < trials; ++trial) {
        int m = static_cast<int>(rng.uniform_int(2, 50));
        int tau = static_cast<int>(rng.uniform_int(1, std::min(10, m)));
        std::vector<double> r(static_cast<size_t>(m));
        for (double& v : r) v = std::abs(rng.gaussian());
        SumBoundReport report = check_lemma_sum_bound(r, tau);
        ++result.trials;
        if (!report.derived_form.satisfied) {
            ++result.violations;
            if (result.first_violation.empty()) {
                std::ostringstream out;
                out << "m " << m << " tau " << tau << " lhs "
                    << format_double(report.derived_form.lhs) << " rhs "
                    << format_double(report.derived_form.rhs) << " r:";
                for (double v : r) out << ' ' << format_double(v);
                result.first_violation = out.str();
            }
        }
    }
    return result;
}

CampaignResult theorem1_campaign(uint64_t seed) {
    CampaignResult result;
    result.name = "theorem1";
    OraclePtr oracle = make_logistic_oracle(gen_synthetic(500, 50, 1), 1e-3);
    double lipschitz = oracle->lipschitz_hessian_bound();

    for (int64_t tau : {0, 5, 20}) {
        RunConfig cfg;
        cfg.rho = std::max(lipschitz, 20.0 * static_cast<double>(tau) * lipschitz);
        cfg.max_iters = 201;
        cfg.grad_tol = 0.0;
        cfg.seed = seed;
        cfg.record_mu = true;
        SimulatedProvider provider(oracle, DelaySchedule::fixed(tau));
        RunTrace trace = run_split_client(*oracle, cfg, provider);

        BoundParams params;
        params.rho = cfg.rho;
        params.lipschitz = lipschitz;
        params.tau = static_cast<double>(tau);
        params.tau0 = static_cast<double>(std::max<int64_t>(trace.first_update_step, 0));
        params.delta0 = trace.delta0_measured;
        params.delta = 0.0;
        params.f0_gap = trace.rows.front().f;  // logistic loss is nonnegative

        double running = 0.0;
        for (int64_t t = 1; t <= 200; ++t) {
            running += trace.rows[static_cast<size_t>(t)].mu_rho;
            if (t < 10) continue;
            ++result.trials;
            params.horizon = t;
            double rhs = theorem1_bound_fixed(params);
            double lhs = running / static_cast<double>(t);
            if (lhs > rhs * (1.0 + 1e-9)) {
                ++result.violations;
                if (result.first_violation.empty()) {
                    std::ostringstream out;
                    out << "tau " << tau << " T " << t << " lhs " << format_double(lhs)
                        << " rhs " << format_double(rhs);
                    result.first_violation = out.str();
                }
            }
        }
    }
    return result;
}

int run_verify(const std::string& suite, int64_t trials, uint64_t seed,
               const std::string& output_dir, std::ostream& log) {
    if (trials < 1) {
        log << "verify: trials must be >= 1\n";
        return 2;
    }
    std::vector<CampaignResult> results;
    if (suite == "solver_kkt" || suite == "all") {
        results.push_back(solver_kkt_campaign(trials, seed));
    }
    if (suite == "lemmas" || suite == "all") {
        auto lemmas = lemma_campaign(trials, seed);
        results.insert(results.end(), lemmas.begin(), lemmas.end());
        results.push_back(sum_bound_campaign(trials, seed));
    }
    if (suite == "theorem1" || suite == "all") {
        results.push_back(theorem1_campaign(seed));
    }
    if (results.empty()) {
        log << "verify: unknown suite '" << suite << "'\n";
        return 2;
    }

    bool any_violation = false;
    std::string out_dir = resolve_output_dir(output_dir);
    for (const CampaignResult& result : results) {
        log << result.name << ": " << (result.trials - result.violations) << "/"
            << result.trials << " checks passed\n";
        if (!result.ok()) {
            any_violation = true;
            std::string path = out_dir + "/violation_" + result.name + ".txt";
            std::ofstream dump(path);
            dump << result.first_violation << '\n';
            log << result.name << ": first falsifying instance written to " << path
                << "\n";
        }
    }
    return any_violation ? 4 : 0;
}

}  // namespace scc
