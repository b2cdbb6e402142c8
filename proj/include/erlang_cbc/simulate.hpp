#ifndef ERLANG_CBC_SIMULATE_HPP
#define ERLANG_CBC_SIMULATE_HPP

/**
 * @file simulate.hpp
 * @brief Discrete-event simulation of the controlled abandonment queue — an
 *        independent statistical oracle for the analytic engines.
 *
 * The simulator realises the birth–death dynamics literally:
 *
 *  - Arrivals are a rate-λ Poisson candidate stream thinned by the
 *    state-dependent admission probability λ_k/λ (1 below the boundary,
 *    λ_Q/λ at or above it for reneging, (λ_Q − δ(k−s))⁺/λ for balking).
 *    Candidates rejected by the thinning are exactly the demand suppressed
 *    or balked away by the control and count as abandonment.
 *  - Service is one aggregate exponential clock at the chain's total rate
 *    (kμ up to the boundary, sμ_Q above it), redrawn after every event;
 *    the completing customer is drawn uniformly from those in service.
 *    Memorylessness makes both steps exact for the chain.
 *  - Under reneging each queued customer carries an exponential patience
 *    drawn at queue entry (min-heap with lazy invalidation when the
 *    customer reaches a server).
 *
 * P_Q is estimated from the candidate stream (Poisson arrivals see time
 * averages, and the full-rate candidate stream — unlike the thinned admitted
 * stream — is Poisson), P_ab as (rejected + reneged)/candidates, L_Q and the
 * number in system as time averages, and W_Q as mean queue time per admitted
 * customer. Every count is restricted to the measurement window after
 * warm-up; customers are tagged at arrival so that
 * arrived = served + reneged + still-in-system holds exactly per replication.
 *
 * Replications use independent deterministic streams derived from the seed,
 * so results are bit-identical for a given config regardless of thread
 * count. Stale patience-heap entries are discarded only when they surface at
 * the top; with extremely patient customers (γ ≪ 1/horizon) the heap can
 * retain one entry per admission.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "erlang_cbc/model.hpp"

namespace erlang_cbc {
namespace simulate {

// ============================================================================
// Configuration and results
// ============================================================================

/// A simulation experiment: model, time window, replication plan, seed.
struct SimConfig {
    ModelParams params;
    double horizon = 1e5;     ///< measured time units (after warm-up)
    double warmup = -1.0;     ///< discarded prefix; negative → 10% of horizon
    int replications = 20;
    std::uint64_t seed = 0x5eed5eedULL;
};

/// Point estimate with a 95% replication-t confidence half-width.
struct MetricEstimate {
    double mean = 0.0;
    double half_width = 0.0;
};

/// Raw per-replication counters and estimates (measurement window only).
struct RepStats {
    long long candidates = 0;     ///< rate-λ candidate arrivals
    long long arrived = 0;        ///< admitted customers
    long long rejected = 0;       ///< candidates suppressed/balked by control
    long long served = 0;         ///< admitted customers who completed service
    long long reneged = 0;        ///< admitted customers who abandoned in queue
    long long in_system_end = 0;  ///< admitted customers still present at the end
    double p_q = 0.0;
    double p_ab = 0.0;
    double l_q = 0.0;
    double w_q = 0.0;
    double l_sys = 0.0;  ///< time-average number in system
};

/// Aggregated output: per-metric means with confidence half-widths plus the
/// per-replication detail they were built from.
struct SimEstimate {
    MetricEstimate p_q;
    MetricEstimate p_ab;
    MetricEstimate l_q;
    MetricEstimate w_q;
    MetricEstimate l_sys;
    int replications = 0;
    std::vector<RepStats> reps;
};

namespace detail {

// ============================================================================
// RNG streams and t-interval helpers
// ============================================================================

/// SplitMix64 mix of (seed, stream) — decorrelated 64-bit seeds per
/// replication, deterministic in both arguments.
inline std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Two-sided 95% Student-t critical value; normal beyond 30 degrees of
/// freedom, 0 for degenerate df ≤ 0 (single replication).
inline double t_critical_95(int df) {
    static const double table[30] = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
    if (df <= 0) return 0.0;
    if (df <= 30) return table[df - 1];
    return 1.96;
}

/// Mean and 95% half-width of one metric across replications.
inline MetricEstimate summarize(const std::vector<double>& v) {
    MetricEstimate est;
    const int n = static_cast<int>(v.size());
    if (n == 0) return est;
    double sum = 0.0;
    for (double x : v) sum += x;
    est.mean = sum / n;
    if (n == 1) return est;  // no dispersion estimate from one replication
    double ss = 0.0;
    for (double x : v) ss += (x - est.mean) * (x - est.mean);
    const double sd = std::sqrt(ss / (n - 1));
    est.half_width = t_critical_95(n - 1) * sd / std::sqrt(static_cast<double>(n));
    return est;
}

// ============================================================================
// Event engine
// ============================================================================

enum class CustStatus : std::uint8_t { Free, Waiting, InService };

struct Customer {
    double t_arrive = 0.0;
    std::uint32_t gen = 0;
    CustStatus status = CustStatus::Free;
    bool in_window = false;
};

/// Generation-checked reference into the customer slot pool; stale references
/// (queue front, patience heap) are detected by generation mismatch.
struct CustRef {
    std::uint32_t slot = 0;
    std::uint32_t gen = 0;
};

struct PatienceEvent {
    double time = 0.0;
    CustRef who{};
};

struct PatienceLater {
    bool operator()(const PatienceEvent& a, const PatienceEvent& b) const {
        return a.time > b.time;
    }
};

/// One replication of the event loop; all counters restricted to the window
/// [warm, t_end].
inline RepStats run_replication(const ModelParams& p, double warm, double t_end,
                                std::uint64_t rep_seed) {
    std::mt19937_64 rng(rep_seed);
    std::exponential_distribution<double> exp1(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const bool reneging = p.abandon.kind == AbandonKind::Reneging;
    const double lambda = p.lambda;
    const double lambda_q = p.lambda_q();
    const double mu = p.mu;
    const double mu_q = p.mu_q();
    const double theta = p.abandon.rate;
    const double s = static_cast<double>(p.s);
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<Customer> pool;
    std::vector<std::uint32_t> free_slots;
    std::vector<CustRef> in_service;
    std::deque<CustRef> queue;
    std::priority_queue<PatienceEvent, std::vector<PatienceEvent>, PatienceLater> patience;

    auto alloc = [&](double t_arr, bool window) -> CustRef {
        std::uint32_t slot;
        if (!free_slots.empty()) {
            slot = free_slots.back();
            free_slots.pop_back();
        } else {
            slot = static_cast<std::uint32_t>(pool.size());
            pool.push_back(Customer{});
        }
        Customer& c = pool[slot];
        c.t_arrive = t_arr;
        c.status = CustStatus::Waiting;  // caller may promote immediately
        c.in_window = window;
        return CustRef{slot, c.gen};
    };
    auto release = [&](std::uint32_t slot) {
        pool[slot].status = CustStatus::Free;
        ++pool[slot].gen;
        free_slots.push_back(slot);
    };
    auto valid_waiting = [&](const CustRef& r) {
        return pool[r.slot].gen == r.gen && pool[r.slot].status == CustStatus::Waiting;
    };

    RepStats st;
    long long busy_candidates = 0;
    long long active_window = 0;  // admitted window customers currently present
    double lq_int = 0.0, lsys_int = 0.0, wq_sum = 0.0;
    double t = 0.0;
    long long k = 0;
    double next_arr = exp1(rng) / lambda;

    while (true) {
        while (!patience.empty() && !valid_waiting(patience.top().who)) patience.pop();
        const double t_ren = patience.empty() ? inf : patience.top().time;
        const double svc_rate = k <= p.s ? static_cast<double>(k) * mu : s * mu_q;
        const double t_svc = svc_rate > 0.0 ? t + exp1(rng) / svc_rate : inf;
        const double t_next = std::min({next_arr, t_ren, t_svc});

        {  // accumulate time averages over the window overlap
            const double upto = std::min(t_next, t_end);
            const double lo = std::max(t, warm);
            if (upto > lo) {
                const double dt = upto - lo;
                lsys_int += static_cast<double>(k) * dt;
                if (k > p.s) lq_int += static_cast<double>(k - p.s) * dt;
            }
        }
        if (t_next >= t_end) {
            t = t_end;
            break;
        }
        t = t_next;

        if (t == next_arr) {
            const bool window = t >= warm;
            const bool busy = k >= p.s;
            if (window) {
                ++st.candidates;
                if (busy) ++busy_candidates;
            }
            bool admit = true;
            if (busy) {
                const double lam_k =
                    reneging ? lambda_q
                             : std::max(0.0, lambda_q - theta * static_cast<double>(k - p.s));
                admit = unif(rng) * lambda < lam_k;
            }
            if (admit) {
                CustRef ref = alloc(t, window);
                if (window) {
                    ++st.arrived;
                    ++active_window;
                }
                if (!busy) {
                    pool[ref.slot].status = CustStatus::InService;
                    in_service.push_back(ref);
                } else {
                    queue.push_back(ref);
                    if (reneging) patience.push(PatienceEvent{t + exp1(rng) / theta, ref});
                }
                ++k;
            } else if (window) {
                ++st.rejected;
            }
            next_arr = t + exp1(rng) / lambda;
        } else if (t == t_svc) {
            std::uniform_int_distribution<std::size_t> pick(0, in_service.size() - 1);
            const std::size_t idx = pick(rng);
            const CustRef done = in_service[idx];
            in_service[idx] = in_service.back();
            in_service.pop_back();
            if (pool[done.slot].in_window) {
                ++st.served;
                --active_window;
            }
            release(done.slot);
            --k;
            while (!queue.empty()) {  // promote the first live waiting customer
                const CustRef head = queue.front();
                queue.pop_front();
                if (!valid_waiting(head)) continue;
                pool[head.slot].status = CustStatus::InService;
                if (pool[head.slot].in_window) wq_sum += t - pool[head.slot].t_arrive;
                in_service.push_back(head);
                break;
            }
        } else {  // patience expired: top of heap is a live waiting customer
            const CustRef gone = patience.top().who;
            patience.pop();
            if (pool[gone.slot].in_window) {
                ++st.reneged;
                --active_window;
                wq_sum += t - pool[gone.slot].t_arrive;
            }
            release(gone.slot);  // queue keeps a stale ref, skipped by gen check
            --k;
        }
    }

    // Window customers still waiting accrue queue time up to the cut-off.
    for (const CustRef& r : queue)
        if (valid_waiting(r) && pool[r.slot].in_window) wq_sum += t_end - pool[r.slot].t_arrive;
    st.in_system_end = active_window;

    const double horizon = t_end - warm;
    st.p_q = st.candidates > 0 ? static_cast<double>(busy_candidates) / st.candidates : 0.0;
    st.p_ab = st.candidates > 0
                  ? static_cast<double>(st.rejected + st.reneged) / st.candidates
                  : 0.0;
    st.l_q = lq_int / horizon;
    st.l_sys = lsys_int / horizon;
    st.w_q = st.arrived > 0 ? wq_sum / st.arrived : 0.0;
    return st;
}

}  // namespace detail

// ============================================================================
// Driver
// ============================================================================

/**
 * @brief Run the replication plan and aggregate t-interval estimates.
 *
 * Replications are independent and deterministic in (seed, replication
 * index); @p n_threads only changes scheduling, never results. With a single
 * replication the half-widths are reported as 0 (no dispersion estimate).
 *
 * @throws std::invalid_argument on invalid model or plan
 */
inline SimEstimate run(const SimConfig& config, int n_threads = 1) {
    require_valid(config.params);
    if (!(config.horizon > 0.0))
        throw std::invalid_argument("simulate: horizon must be > 0");
    if (config.replications < 1)
        throw std::invalid_argument("simulate: replications must be >= 1");
    const double warm = config.warmup < 0.0 ? 0.1 * config.horizon : config.warmup;
    const double t_end = warm + config.horizon;

    const int n = config.replications;
    std::vector<RepStats> reps(static_cast<std::size_t>(n));
    auto job = [&](int i) {
        reps[static_cast<std::size_t>(i)] = detail::run_replication(
            config.params, warm, t_end,
            detail::splitmix64(config.seed, static_cast<std::uint64_t>(i)));
    };
    if (n_threads <= 1 || n == 1) {
        for (int i = 0; i < n; ++i) job(i);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) job(i);
        };
        std::vector<std::thread> threads;
        const int use = std::min(n_threads, n);
        threads.reserve(static_cast<std::size_t>(use));
        for (int w = 0; w < use; ++w) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }

    SimEstimate out;
    out.replications = n;
    std::vector<double> v(static_cast<std::size_t>(n));
    auto gather = [&](double RepStats::*field) {
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = reps[i].*field;
        return detail::summarize(v);
    };
    out.p_q = gather(&RepStats::p_q);
    out.p_ab = gather(&RepStats::p_ab);
    out.l_q = gather(&RepStats::l_q);
    out.w_q = gather(&RepStats::w_q);
    out.l_sys = gather(&RepStats::l_sys);
    out.reps = std::move(reps);
    return out;
}

}  // namespace simulate
}  // namespace erlang_cbc

#endif  // ERLANG_CBC_SIMULATE_HPP
