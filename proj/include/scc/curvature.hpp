#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "scc/linalg.hpp"
#include "scc/problems.hpp"
#include "scc/rng.hpp"

namespace scc {

enum class CurvatureKind { exact, lbfgs, surrogate };

/// A factorized curvature estimate stamped with the iterate it was computed
/// at (source_iter) and the first optimizer step allowed to consume it
/// (ready_iter). The staleness observed at step t is t - source_iter.
struct CurvatureUpdate {
    std::shared_ptr<const SpectralFactorization> factorization;
    int64_t source_iter = 0;
    int64_t ready_iter = 0;
    CurvatureKind kind = CurvatureKind::exact;
    double delta_claimed = 0.0;  // surrogate only; claimed spectral error bound
    int64_t wall_hess_ns = 0;
    int64_t wall_decomp_ns = 0;
};

/// Initial curvature policy used until the first asynchronous update lands.
struct InitStrategy {
    enum class Kind { zero, scaled_identity, lbfgs_warmup, diagonal, recycled };

    Kind kind = Kind::scaled_identity;
    double mu = 1.0;       // scaled_identity
    int warmup_steps = 5;  // lbfgs_warmup
    std::string path;      // recycled

    static InitStrategy zero();
    static InitStrategy scaled_identity(double mu);
    static InitStrategy lbfgs_warmup(int k);
    static InitStrategy diagonal();
    static InitStrategy recycled(std::string path);
};

/// Builds H0 per the strategy and measures delta0 = ||H0 - hessian(x0)||_2
/// against the oracle for diagnostics.
std::pair<SymMatrix, double> init_h0(const InitStrategy& strategy,
                                     const ObjectiveOracle& oracle, const Vector& x0);

/// Bounded history of admissible (s, y) curvature pairs. Pairs failing
/// s^T y > 1e-10 ||s|| ||y|| are rejected at insert.
class LbfgsMemory {
public:
    explicit LbfgsMemory(int capacity) : capacity_(capacity) {}

    /// Returns true if the pair was admissible and stored.
    bool insert(const Vector& s, const Vector& y);

    int size() const { return static_cast<int>(pairs_.size()); }
    int capacity() const { return capacity_; }
    double gamma() const { return gamma_; }
    const std::deque<std::pair<Vector, Vector>>& pairs() const { return pairs_; }

private:
    int capacity_;
    double gamma_ = 1.0;  // y'y / y's of the newest pair; 1 when empty
    std::deque<std::pair<Vector, Vector>> pairs_;
};

/// Dense direct-Hessian BFGS materialization seeded with gamma * I.
/// Satisfies the secant condition B s_last = y_last exactly.
SymMatrix lbfgs_materialize(const LbfgsMemory& mem, int dim);

/// Per-update curvature compute time in logical step units.
class DelaySchedule {
public:
    static DelaySchedule fixed(int64_t tau);
    static DelaySchedule uniform(int64_t tau_min, int64_t tau_max, uint64_t seed);

    int64_t next();
    int64_t tau_max() const { return hi_; }

    /// Worst-case staleness of a consumed update: an update computed in tau1
    /// steps serves until the next one lands tau2 steps later.
    int64_t max_staleness() const { return std::max<int64_t>(0, 2 * hi_ - 1); }

private:
    DelaySchedule(int64_t lo, int64_t hi, uint64_t seed)
        : lo_(lo), hi_(hi), rng_(seed) {}
    int64_t lo_;
    int64_t hi_;
    Rng rng_;
};

/// Physical work a poll performed on the optimizer thread this step, plus an
/// update if one became ready.
struct PollResult {
    std::optional<CurvatureUpdate> update;
    int64_t hess_ns = 0;
    int64_t decomp_ns = 0;
};

/// Provider-agnostic curvature client. Drivers call poll once per step with
/// the current iterate and gradient.
class CurvatureClient {
public:
    virtual ~CurvatureClient() = default;
    virtual PollResult poll(int64_t t, const Vector& x, const Vector& g) = 0;
    /// Hint that the current curvature has gone stale enough to stall the
    /// driver; providers may discard in-flight work and resample.
    virtual void request_refresh() {}
    virtual void stop() {}
    virtual bool failed() const { return false; }
    virtual std::string failure_message() const { return {}; }
    /// Logical-clock providers are deterministic; their runs must be
    /// bit-reproducible, so drivers suppress measured wall times for them.
    virtual bool deterministic() const { return true; }
};

/// Deterministic logical-clock provider. When idle it snapshots the current
/// iterate, computes and factorizes the exact Hessian there, and publishes
/// the result tau steps later. tau = 0 delivers fresh curvature every step.
class SimulatedProvider final : public CurvatureClient {
public:
    SimulatedProvider(OraclePtr oracle, DelaySchedule schedule, double ridge = 0.0);
    PollResult poll(int64_t t, const Vector& x, const Vector& g) override;
    void request_refresh() override;

private:
    OraclePtr oracle_;
    DelaySchedule schedule_;
    double ridge_;
    std::optional<CurvatureUpdate> pending_;
};

/// Synchronous refresh at steps t = 0 (mod period); reuses the stored
/// factorization in between.
class LazyProvider final : public CurvatureClient {
public:
    LazyProvider(OraclePtr oracle, int64_t period, double ridge = 0.0);
    PollResult poll(int64_t t, const Vector& x, const Vector& g) override;
    void request_refresh() override { force_next_ = true; }

private:
    OraclePtr oracle_;
    int64_t period_;
    double ridge_;
    bool force_next_ = false;
};

/// Simulated-delay provider whose updates are dense L-BFGS materializations
/// built from the iterate/gradient stream instead of exact Hessians.
class LbfgsProvider final : public CurvatureClient {
public:
    LbfgsProvider(OraclePtr oracle, DelaySchedule schedule, int memory = 10,
                  double ridge = 0.0, bool record_secant_residuals = false);
    PollResult poll(int64_t t, const Vector& x, const Vector& g) override;
    void request_refresh() override;

    const LbfgsMemory& memory() const { return memory_; }
    const std::vector<double>& secant_residuals() const { return secant_residuals_; }

private:
    OraclePtr oracle_;
    DelaySchedule schedule_;
    LbfgsMemory memory_;
    double ridge_;
    bool record_secant_;
    std::optional<CurvatureUpdate> pending_;
    std::optional<std::pair<Vector, Vector>> previous_;  // (x, g) from last poll
    std::vector<double> secant_residuals_;
};

namespace detail {

/// Single-slot latest-wins mailbox: writers swap in a fresh value, readers
/// swap out whatever is present. Both operations are single atomic exchanges.
template <typename T>
class MailboxSlot {
public:
    ~MailboxSlot() { delete slot_.load(std::memory_order_acquire); }

    void put(std::unique_ptr<T> value) {
        delete slot_.exchange(value.release(), std::memory_order_acq_rel);
    }

    std::unique_ptr<T> take() {
        return std::unique_ptr<T>(slot_.exchange(nullptr, std::memory_order_acq_rel));
    }

private:
    std::atomic<T*> slot_{nullptr};
};

}  // namespace detail

/// Background worker thread: grabs the latest iterate from an inbox, computes
/// and factorizes the exact Hessian, and publishes to a latest-wins outbox.
/// Optimizer-side polls are wait-free. Measured Hessian and decomposition
/// wall times ride along on each update.
class ThreadedProvider final : public CurvatureClient {
public:
    struct Options {
        double ridge = 0.0;
        /// Extra per-update sleep, for integration tests and experiments that
        /// need a controlled worker latency.
        double extra_sleep_ms = 0.0;
    };

    explicit ThreadedProvider(OraclePtr oracle);
    ThreadedProvider(OraclePtr oracle, Options opts);
    ~ThreadedProvider() override;

    PollResult poll(int64_t t, const Vector& x, const Vector& g) override;
    void stop() override;
    bool failed() const override { return failed_.load(std::memory_order_acquire); }
    std::string failure_message() const override { return failure_message_; }
    bool deterministic() const override { return false; }

private:
    struct Snapshot {
        Vector x;
        int64_t t;
    };

    void worker_loop();

    OraclePtr oracle_;
    Options opts_;
    detail::MailboxSlot<Snapshot> inbox_;
    detail::MailboxSlot<CurvatureUpdate> outbox_;
    std::atomic<bool> stop_flag_{false};
    std::atomic<bool> failed_{false};
    std::string failure_message_;
    std::thread worker_;
};

/// Shared helper: factorize a curvature matrix with an optional stabilizing
/// ridge added first.
std::shared_ptr<const SpectralFactorization> factorize_curvature(const SymMatrix& h,
                                                                 double ridge);

}  // namespace scc
