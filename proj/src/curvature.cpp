#include "scc/curvature.hpp"

#include <chrono>
#include <cmath>

#include "scc/errors.hpp"
#include "scc/matrix_io.hpp"

namespace scc {

namespace {

using Clock = std::chrono::steady_clock;

int64_t elapsed_ns(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start)
        .count();
}

}  // namespace

InitStrategy InitStrategy::zero() { return {Kind::zero, 0.0, 0, {}}; }

InitStrategy InitStrategy::scaled_identity(double mu) {
    if (!(mu > 0.0)) throw InvalidParamsError("scaled_identity: mu must be positive");
    return {Kind::scaled_identity, mu, 0, {}};
}

InitStrategy InitStrategy::lbfgs_warmup(int k) {
    if (k < 1) throw InvalidParamsError("lbfgs_warmup: k must be positive");
    return {Kind::lbfgs_warmup, 0.0, k, {}};
}

InitStrategy InitStrategy::diagonal() { return {Kind::diagonal, 0.0, 0, {}}; }

InitStrategy InitStrategy::recycled(std::string path) {
    return {Kind::recycled, 0.0, 0, std::move(path)};
}

std::pair<SymMatrix, double> init_h0(const InitStrategy& strategy,
                                     const ObjectiveOracle& oracle, const Vector& x0) {
    const int d = oracle.dim();
    if (x0.size() != d) throw DimensionError("init_h0: x0 dimension mismatch");

    SymMatrix h0 = SymMatrix::zero(d);
    switch (strategy.kind) {
        case InitStrategy::Kind::zero:
            break;
        case InitStrategy::Kind::scaled_identity:
            h0 = SymMatrix(strategy.mu * Matrix::Identity(d, d));
            break;
        case InitStrategy::Kind::diagonal:
            h0 = SymMatrix::from_diagonal(oracle.hessian(x0).mat().diagonal());
            break;
        case InitStrategy::Kind::recycled: {
            h0 = read_matrix(strategy.path);
            if (h0.dim() != d) {
                throw DimensionError("init_h0: recycled matrix dimension mismatch");
            }
            break;
        }
        case InitStrategy::Kind::lbfgs_warmup: {
            LbfgsMemory mem(strategy.warmup_steps);
            Vector x = x0;
            Vector g = oracle.gradient(x);
            double g0 = g.norm();
            if (g0 > 0.0) {
                double step = 1.0 / (10.0 * g0);
                for (int k = 0; k < strategy.warmup_steps; ++k) {
                    Vector x_next = x - step * g;
                    Vector g_next = oracle.gradient(x_next);
                    mem.insert(x_next - x, g_next - g);
                    x = x_next;
                    g = g_next;
                }
            }
            h0 = lbfgs_materialize(mem, d);
            break;
        }
    }
    double delta0 = spectral_norm_diff(h0, oracle.hessian(x0));
    return {h0, delta0};
}

bool LbfgsMemory::insert(const Vector& s, const Vector& y) {
    double sy = s.dot(y);
    if (!(sy > 1e-10 * s.norm() * y.norm())) return false;
    pairs_.emplace_back(s, y);
    if (static_cast<int>(pairs_.size()) > capacity_) pairs_.pop_front();
    gamma_ = y.dot(y) / sy;
    return true;
}

SymMatrix lbfgs_materialize(const LbfgsMemory& mem, int dim) {
    Matrix b = mem.gamma() * Matrix::Identity(dim, dim);
    for (const auto& [s, y] : mem.pairs()) {
        if (s.size() != dim) throw DimensionError("lbfgs_materialize: pair dim mismatch");
        Vector bs = b * s;
        double sbs = s.dot(bs);
        double sy = s.dot(y);
        if (sbs > 0.0) b -= (bs * bs.transpose()) / sbs;
        b += (y * y.transpose()) / sy;
    }
    return SymMatrix(b);
}

DelaySchedule DelaySchedule::fixed(int64_t tau) {
    if (tau < 0) throw InvalidParamsError("DelaySchedule: tau must be nonnegative");
    return DelaySchedule(tau, tau, 0);
}

DelaySchedule DelaySchedule::uniform(int64_t tau_min, int64_t tau_max, uint64_t seed) {
    if (tau_min < 0 || tau_max < tau_min) {
        throw InvalidParamsError("DelaySchedule: need 0 <= tau_min <= tau_max");
    }
    return DelaySchedule(tau_min, tau_max, seed);
}

int64_t DelaySchedule::next() {
    if (lo_ == hi_) return lo_;
    return rng_.uniform_int(lo_, hi_);
}

std::shared_ptr<const SpectralFactorization> factorize_curvature(const SymMatrix& h,
                                                                 double ridge) {
    if (ridge == 0.0) {
        return std::make_shared<SpectralFactorization>(sym_eig(h));
    }
    SymMatrix ridged(h.mat() + ridge * Matrix::Identity(h.dim(), h.dim()));
    return std::make_shared<SpectralFactorization>(sym_eig(ridged));
}

// ---------------------------------------------------------------------------
// SimulatedProvider

SimulatedProvider::SimulatedProvider(OraclePtr oracle, DelaySchedule schedule,
                                     double ridge)
    : oracle_(std::move(oracle)), schedule_(schedule), ridge_(ridge) {}

PollResult SimulatedProvider::poll(int64_t t, const Vector& x, const Vector&) {
    PollResult result;
    if (pending_ && pending_->ready_iter <= t) {
        result.update = std::move(*pending_);
        pending_.reset();
    }
    if (!pending_) {
        // Idle: snapshot the current iterate. The Hessian is physically
        // computed now; logically it occupies the next tau steps.
        auto t0 = Clock::now();
        SymMatrix h = oracle_->hessian(x);
        result.hess_ns = elapsed_ns(t0);
        t0 = Clock::now();
        auto f = factorize_curvature(h, ridge_);
        result.decomp_ns = elapsed_ns(t0);

        CurvatureUpdate update;
        update.factorization = std::move(f);
        update.source_iter = t;
        update.ready_iter = t + schedule_.next();
        update.kind = CurvatureKind::exact;
        update.wall_hess_ns = result.hess_ns;
        update.wall_decomp_ns = result.decomp_ns;
        if (update.ready_iter <= t) {
            result.update = std::move(update);
        } else {
            pending_ = std::move(update);
        }
    }
    return result;
}

void SimulatedProvider::request_refresh() { pending_.reset(); }

// ---------------------------------------------------------------------------
// LazyProvider

LazyProvider::LazyProvider(OraclePtr oracle, int64_t period, double ridge)
    : oracle_(std::move(oracle)), period_(period), ridge_(ridge) {
    if (period < 1) throw InvalidParamsError("LazyProvider: period must be >= 1");
}

PollResult LazyProvider::poll(int64_t t, const Vector& x, const Vector&) {
    PollResult result;
    if (t % period_ != 0 && !force_next_) return result;
    force_next_ = false;

    auto t0 = Clock::now();
    SymMatrix h = oracle_->hessian(x);
    result.hess_ns = elapsed_ns(t0);
    t0 = Clock::now();
    auto f = factorize_curvature(h, ridge_);
    result.decomp_ns = elapsed_ns(t0);

    CurvatureUpdate update;
    update.factorization = std::move(f);
    update.source_iter = t;
    update.ready_iter = t;
    update.kind = CurvatureKind::exact;
    update.wall_hess_ns = result.hess_ns;
    update.wall_decomp_ns = result.decomp_ns;
    result.update = std::move(update);
    return result;
}

// ---------------------------------------------------------------------------
// LbfgsProvider

LbfgsProvider::LbfgsProvider(OraclePtr oracle, DelaySchedule schedule, int memory,
                             double ridge, bool record_secant_residuals)
    : oracle_(std::move(oracle)),
      schedule_(schedule),
      memory_(memory),
      ridge_(ridge),
      record_secant_(record_secant_residuals) {}

PollResult LbfgsProvider::poll(int64_t t, const Vector& x, const Vector& g) {
    if (previous_) {
        bool admitted = memory_.insert(x - previous_->first, g - previous_->second);
        if (admitted && record_secant_) {
            SymMatrix b = lbfgs_materialize(memory_, oracle_->dim());
            const auto& [s, y] = memory_.pairs().back();
            secant_residuals_.push_back((b.mat() * s - y).norm() / std::max(1e-300, y.norm()));
        }
    }
    previous_ = std::make_pair(x, g);

    PollResult result;
    if (pending_ && pending_->ready_iter <= t) {
        result.update = std::move(*pending_);
        pending_.reset();
    }
    if (!pending_) {
        auto t0 = Clock::now();
        SymMatrix b = lbfgs_materialize(memory_, oracle_->dim());
        result.hess_ns = elapsed_ns(t0);
        t0 = Clock::now();
        auto f = factorize_curvature(b, ridge_);
        result.decomp_ns = elapsed_ns(t0);

        CurvatureUpdate update;
        update.factorization = std::move(f);
        update.source_iter = t;
        update.ready_iter = t + schedule_.next();
        update.kind = CurvatureKind::lbfgs;
        update.wall_hess_ns = result.hess_ns;
        update.wall_decomp_ns = result.decomp_ns;
        if (update.ready_iter <= t) {
            result.update = std::move(update);
        } else {
            pending_ = std::move(update);
        }
    }
    return result;
}

void LbfgsProvider::request_refresh() { pending_.reset(); }

// ---------------------------------------------------------------------------
// ThreadedProvider

ThreadedProvider::ThreadedProvider(OraclePtr oracle)
    : ThreadedProvider(std::move(oracle), Options()) {}

ThreadedProvider::ThreadedProvider(OraclePtr oracle, Options opts)
    : oracle_(std::move(oracle)), opts_(opts) {
    worker_ = std::thread([this] { worker_loop(); });
}

ThreadedProvider::~ThreadedProvider() { stop(); }

void ThreadedProvider::worker_loop() {
    try {
        while (!stop_flag_.load(std::memory_order_acquire)) {
            auto snap = inbox_.take();
            if (!snap) {
                std::this_thread::sleep_for(std::chrono::microseconds(50));
                continue;
            }
            if (opts_.extra_sleep_ms > 0.0) {
                // chunked so shutdown is honored promptly
                double remaining = opts_.extra_sleep_ms;
                while (remaining > 0.0 && !stop_flag_.load(std::memory_order_acquire)) {
                    double slice = std::min(remaining, 1.0);
                    std::this_thread::sleep_for(
                        std::chrono::duration<double, std::milli>(slice));
                    remaining -= slice;
                }
            }
            if (stop_flag_.load(std::memory_order_acquire)) break;

            auto t0 = Clock::now();
            SymMatrix h = oracle_->hessian(snap->x);
            int64_t hess_ns = elapsed_ns(t0);
            t0 = Clock::now();
            auto f = factorize_curvature(h, opts_.ridge);
            int64_t decomp_ns = elapsed_ns(t0);

            if (stop_flag_.load(std::memory_order_acquire)) break;
            auto update = std::make_unique<CurvatureUpdate>();
            update->factorization = std::move(f);
            update->source_iter = snap->t;
            update->ready_iter = snap->t;  // ready the moment it is published
            update->kind = CurvatureKind::exact;
            update->wall_hess_ns = hess_ns;
            update->wall_decomp_ns = decomp_ns;
            outbox_.put(std::move(update));
        }
    } catch (const std::exception& e) {
        failure_message_ = e.what();
        failed_.store(true, std::memory_order_release);
    } catch (...) {
        failure_message_ = "unknown worker failure";
        failed_.store(true, std::memory_order_release);
    }
}

PollResult ThreadedProvider::poll(int64_t t, const Vector& x, const Vector&) {
    if (failed_.load(std::memory_order_acquire)) {
        throw WorkerError("curvature worker failed: " + failure_message_);
    }
    inbox_.put(std::make_unique<Snapshot>(Snapshot{x, t}));
    PollResult result;
    if (auto update = outbox_.take()) {
        // report the worker-measured cost on the row that consumes the update
        result.hess_ns = update->wall_hess_ns;
        result.decomp_ns = update->wall_decomp_ns;
        result.update = std::move(*update);
    }
    return result;
}

void ThreadedProvider::stop() {
    bool expected = false;
    if (stop_flag_.compare_exchange_strong(expected, true)) {
        if (worker_.joinable()) worker_.join();
    } else if (worker_.joinable()) {
        worker_.join();
    }
}

}  // namespace scc
