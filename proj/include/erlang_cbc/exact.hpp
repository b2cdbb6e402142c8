#ifndef ERLANG_CBC_EXACT_HPP
#define ERLANG_CBC_EXACT_HPP

/**
 * @file exact.hpp
 * @brief Exact steady-state analysis of the modified Erlang A model.
 *
 * Contents:
 *  - numerically stable Erlang-B recursion for the loss sub-chain,
 *  - convergent series / exact finite sum for the queue sub-chain under
 *    reneging / balking,
 *  - an equivalent integral representation of the reneging sub-chain
 *    (independent quadrature cross-check of the series),
 *  - a brute-force full-chain birth–death solver (the oracle),
 *  - indicator assembly, Erlang-C delay formula, heavy-traffic limits, and
 *    the delay/abandonment trade-off direction test.
 *
 * All functions are pure; everything allocates per call and is thread-safe.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "erlang_cbc/indicators.hpp"
#include "erlang_cbc/model.hpp"
#include "erlang_cbc/quadrature.hpp"

namespace erlang_cbc {
namespace exact {

// ============================================================================
// Sub-chain inverse blocking probabilities
// ============================================================================

/**
 * @brief Inverse Erlang-B blocking 1/B(s,R) of the M/M/s/s loss sub-chain.
 *
 * Uses the stable recursion B(0) = 1, B(k) = R·B(k−1)/(k + R·B(k−1)), never
 * factorial sums, so it is overflow-free for any practical R and s. If B
 * underflows to zero (s vastly above R), the result is +inf, which the
 * indicator assembly handles cleanly.
 *
 * @pre R > 0, s ≥ 0
 * @return 1/π_s¹ ≥ 1
 */
inline double erlang_b_inverse_blocking(double R, long long s) {
    if (!(R > 0.0)) throw std::invalid_argument("erlang_b_inverse_blocking: R must be > 0");
    if (s < 0) throw std::invalid_argument("erlang_b_inverse_blocking: s must be >= 0");
    double b = 1.0;
    for (long long k = 1; k <= s; ++k) {
        b = R * b / (static_cast<double>(k) + R * b);
    }
    return 1.0 / b;
}

/// Erlang-B blocking probability B(s,R) itself.
inline double erlang_b(double R, long long s) { return 1.0 / erlang_b_inverse_blocking(R, s); }

/**
 * @brief Inverse boundary probability 1/π_s² of the reneging queue sub-chain.
 *
 * The sub-chain above the boundary has birth rate λ_Q and death rate
 * sμ_Q + iγ at queue length i, giving
 *
 *     1/π_s² = Σ_{k≥0} Π_{i=1..k} λ_Q/(sμ_Q + iγ),
 *
 * summed by a term-ratio recursion. Terms eventually decay geometrically
 * (the ratio falls below 1 once iγ > λ_Q − sμ_Q), so the loop stops when the
 * ratio is < 1 and the current term is below tol × the partial sum; the
 * neglected tail is then bounded by term·ratio/(1−ratio).
 *
 * @pre γ > 0, μ_Q ≥ 0, tol > 0; converges for every such input
 * @return 1/π_s² ≥ 1 (+inf if the partial sums overflow, an honestly
 *         astronomical value for extremely unstable queues)
 */
inline double reneging_inverse_blocking(double lambda_q, double mu_q, long long s, double gamma,
                                        double tol = 1e-14) {
    if (!(gamma > 0.0)) throw std::invalid_argument("reneging_inverse_blocking: gamma must be > 0");
    if (lambda_q <= 0.0) return 1.0;

    const double smu = static_cast<double>(s) * mu_q;
    double term = 1.0;
    double sum = 1.0;
    for (long long k = 1; k <= 100000000LL; ++k) {
        const double ratio = lambda_q / (smu + static_cast<double>(k) * gamma);
        term *= ratio;
        sum += term;
        if (!std::isfinite(sum)) return std::numeric_limits<double>::infinity();
        if (ratio < 1.0 && term < tol * sum) return sum;
    }
    throw std::runtime_error(
        "reneging_inverse_blocking: series did not converge within the iteration cap");
}

/**
 * @brief Inverse boundary probability 1/π_s² of the balking queue sub-chain.
 *
 * With arrival rate (λ_Q − δ·i)⁺ and constant death rate sμ_Q at queue
 * length i, the sub-chain is finite: its top state is s + u + 1 with
 * u = ⌊λ_Q/δ⌋ (reachable only while the arrival factor stays positive), so
 * the sum is exact with no truncation error.
 *
 * @pre δ > 0, sμ_Q > 0
 * @throws std::domain_error when sμ_Q = 0 (queue sub-chain has no service)
 * @return 1/π_s² ≥ 1
 */
inline double balking_inverse_blocking(double lambda_q, double mu_q, long long s, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("balking_inverse_blocking: delta must be > 0");
    const double smu = static_cast<double>(s) * mu_q;
    if (!(smu > 0.0))
        throw std::domain_error(
            "balking_inverse_blocking: s*mu_q must be > 0 (no service above the boundary)");
    if (lambda_q <= 0.0) return 1.0;

    double term = 1.0;
    double sum = 1.0;
    const long long u = static_cast<long long>(std::floor(lambda_q / delta));
    for (long long i = 0; i <= u; ++i) {
        const double arr = lambda_q - delta * static_cast<double>(i);
        if (arr <= 0.0) break;
        term *= arr / smu;
        sum += term;
        if (!std::isfinite(sum)) return std::numeric_limits<double>::infinity();
    }
    return sum;
}

/**
 * @brief The reneging 1/π_s² by its exact integral representation,
 *
 *     1/π_s² = (sμ_Q/γ) ∫₀¹ e^{λ_Q t/γ} (1−t)^{sμ_Q/γ − 1} dt,
 *
 * an independent cross-check of the series. The integrand is evaluated in
 * the decaying variable v = 1−t with the e^{λ_Q/γ} factor pulled out so
 * nothing overflows prematurely; for exponents β = sμ_Q/γ < 1 the endpoint
 * singularity is removed exactly by the substitution u = v^β.
 *
 * @pre γ > 0, sμ_Q > 0
 * @throws std::domain_error when sμ_Q ≤ 0
 * @throws std::runtime_error when the adaptive quadrature cannot reach its
 *         tolerance (message carries the achieved error bound)
 */
inline double reneging_inverse_blocking_integral(double lambda_q, double mu_q, long long s,
                                                 double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("reneging_inverse_blocking_integral: gamma must be > 0");
    const double beta = static_cast<double>(s) * mu_q / gamma;
    if (!(beta > 0.0))
        throw std::domain_error("reneging_inverse_blocking_integral: s*mu_q must be > 0");
    const double L = std::max(0.0, lambda_q) / gamma;

    quadrature::IntegrationResult r;
    if (beta >= 1.0) {
        r = quadrature::integrate_adaptive(
            [&](double v) { return std::exp(-L * v) * std::pow(v, beta - 1.0); }, 0.0, 1.0, 1e-13);
    } else {
        // J = ∫₀¹ e^{−Lv} v^{β−1} dv = (1/β) ∫₀¹ e^{−L·u^{1/β}} du, smooth in u.
        const double inv_beta = 1.0 / beta;
        r = quadrature::integrate_adaptive(
            [&](double u) { return std::exp(-L * std::pow(u, inv_beta)); }, 0.0, 1.0, 1e-13);
        r.value *= inv_beta;
    }
    if (!r.converged) {
        std::ostringstream msg;
        msg << "reneging_inverse_blocking_integral: quadrature did not converge; achieved error "
               "bound "
            << r.error_bound << " over " << r.panels << " panels";
        throw std::runtime_error(msg.str());
    }
    // result = β·e^L·J, assembled in log space so large L cannot overflow
    // until the result itself does.
    return beta * std::exp(L + std::log(r.value));
}

// ============================================================================
// Full-chain brute-force oracle
// ============================================================================

/// Truncated steady-state probability vector of the full birth–death chain.
struct StationaryDistribution {
    std::vector<double> probs;     ///< π_0..π_K, normalized
    long long truncation_k = 0;    ///< K (last retained state)
    double tail_mass_bound = 0.0;  ///< upper bound on the neglected mass
};

/**
 * @brief Solve the full birth–death chain by detailed balance from state 0.
 *
 * Birth rate at k:  λ for k < s; λ_Q (reneging) or (λ_Q − δ(k−s))⁺ (balking)
 * for k ≥ s. Death rate at k: kμ for k ≤ s; sμ_Q + (k−s)γ (reneging) or
 * sμ_Q (balking) for k > s. Balking chains are finite and summed exactly;
 * reneging chains truncate once a geometric tail bound drops below tol.
 * Weights are rescaled whenever they grow past 1e250, so no intermediate
 * overflow occurs regardless of where the distribution peaks.
 *
 * This is the brute-force oracle every other engine is tested against.
 *
 * @throws std::domain_error  for balking with s = 0 (no service above 0)
 * @throws std::runtime_error if the state cap is hit before tol is met
 */
inline StationaryDistribution full_chain_distribution(const ModelParams& p, double tol = 1e-12,
                                                      long long state_cap = 10000000LL) {
    require_valid(p);
    const double lambda = p.lambda, mu = p.mu;
    const double lambda_q = p.lambda_q(), mu_q = p.mu_q();
    const double theta = p.abandon.rate;
    const long long s = p.s;
    const bool reneging = p.abandon.kind == AbandonKind::Reneging;
    if (!reneging && s == 0)
        throw std::domain_error(
            "full_chain_distribution: balking with s = 0 has no service at any state");

    auto birth = [&](long long k) {
        if (k < s) return lambda;
        if (reneging) return lambda_q;
        return std::max(0.0, lambda_q - theta * static_cast<double>(k - s));
    };
    auto death = [&](long long k) {  // k ≥ 1
        if (k <= s) return static_cast<double>(k) * mu;
        if (reneging) return static_cast<double>(s) * mu_q + static_cast<double>(k - s) * theta;
        return static_cast<double>(s) * mu_q;
    };

    StationaryDistribution dist;
    std::vector<double>& w = dist.probs;
    w.push_back(1.0);
    double total = 1.0;
    double queue_mass = s == 0 ? 1.0 : 0.0;  // mass at states ≥ s so far
    double tail_bound = 0.0;

    for (long long k = 0;; ++k) {
        const double b = birth(k);
        if (b <= 0.0) break;  // absorbing top (balking, or λ_Q = 0)
        if (k + 1 > state_cap) {
            throw std::runtime_error(
                "full_chain_distribution: state cap exceeded before reaching the tail tolerance");
        }
        const double next = w.back() * b / death(k + 1);
        if (next == 0.0) break;  // underflowed tail carries no mass
        w.push_back(next);
        total += next;
        if (k + 1 >= s) queue_mass += next;

        if (w.back() > 1e250) {  // periodic rescale against overflow
            const double scale = w.back();
            for (double& x : w) x /= scale;
            total /= scale;
            queue_mass /= scale;
        }

        if (reneging && k + 1 > s) {
            const double next_ratio =
                lambda_q / (static_cast<double>(s) * mu_q + static_cast<double>(k + 2 - s) * theta);
            if (next_ratio < 1.0) {
                // The neglected tail must be negligible both absolutely and
                // relative to the queue mass itself, so that ratio fields
                // like π_s / P_Q stay accurate even when P_Q is tiny.
                const double bound = w.back() * next_ratio / (1.0 - next_ratio);
                if (bound < tol * total && bound < tol * queue_mass) {
                    tail_bound = bound;
                    break;
                }
            }
        }
    }

    for (double& x : w) x /= total;
    dist.truncation_k = static_cast<long long>(w.size()) - 1;
    dist.tail_mass_bound = tail_bound / total;
    return dist;
}

/**
 * @brief Read every performance indicator directly off an oracle
 *        distribution (summation only — no sub-chain formulas).
 *
 * The abandonment probability is rate-based: the mean abandonment flow
 * (reneges at γ per queued customer plus ε-thinned arrivals for reneging;
 * the arrival-rate shortfall λ − λ_k for balking) divided by λ. The
 * sub-chain boundary probabilities are recovered from π_s and P_Q.
 */
inline PerformanceIndicators indicators_from_distribution(const ModelParams& p,
                                                          const StationaryDistribution& dist) {
    const long long s = p.s;
    const double lambda = p.lambda;
    const double lambda_q = p.lambda_q();
    const double theta = p.abandon.rate;
    const bool reneging = p.abandon.kind == AbandonKind::Reneging;

    PerformanceIndicators out;
    const long long K = static_cast<long long>(dist.probs.size()) - 1;
    out.pi_s = s <= K ? dist.probs[static_cast<std::size_t>(s)] : 0.0;

    double below = 0.0;  // mass strictly below the boundary, summed directly
    for (long long k = 0; k < std::min(s, K + 1); ++k) below += dist.probs[static_cast<std::size_t>(k)];

    double p_q = 0.0, l_q = 0.0, balk_loss = 0.0;
    for (long long k = s; k <= K; ++k) {
        const double pk = dist.probs[static_cast<std::size_t>(k)];
        p_q += pk;
        l_q += static_cast<double>(k - s) * pk;
        if (!reneging) {
            const double arr = std::max(0.0, lambda_q - theta * static_cast<double>(k - s));
            balk_loss += pk * (lambda - arr);
        }
    }
    out.p_q = p_q;
    out.p_q_minus = p_q - out.pi_s;
    out.l_q = l_q;
    out.p_ab = reneging ? (theta * l_q + p.cbc.eps * lambda * p_q) / lambda : balk_loss / lambda;
    out.lambda_eff =
        reneging ? lambda * (1.0 - p.cbc.eps * out.p_q) : lambda * (1.0 - out.p_ab);
    out.w_q = out.l_q / out.lambda_eff;
    out.throughput = lambda * (1.0 - out.p_ab);
    // Boundary decomposition recovered from π_s, P_Q and the below-boundary
    // mass (summed directly, so no cancellation for P_Q near 1).
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.pi_s2 = out.p_q > 0.0 ? out.pi_s / out.p_q : nan;
    out.p_block = out.pi_s > 0.0 ? 1.0 / (below / out.pi_s + 1.0) : nan;
    return out;
}

// ============================================================================
// Exact indicators and reductions
// ============================================================================

/**
 * @brief Exact performance indicators via the sub-chain decomposition.
 *
 * The two inverse blocking probabilities come from the stable recursion and
 * the series/finite sum above; everything else follows from the shared
 * assembly. For balking, the mean queue length (and hence the wait) is
 * computed by direct summation over the oracle distribution instead of the
 * closed form: the closed form charges balking outflow δ·(k−s) at every
 * occupied state, which overstates the outflow at the truncated top state
 * whenever λ_Q/δ is not an integer.
 */
inline PerformanceIndicators indicators_exact(const ModelParams& p) {
    require_valid(p);
    const double R = p.lambda / p.mu;
    const double mu_q = p.mu_q();
    const double heavy_p = 1.0 - static_cast<double>(p.s) * mu_q / p.lambda;

    const double inv1 = erlang_b_inverse_blocking(R, p.s);
    const bool reneging = p.abandon.kind == AbandonKind::Reneging;
    const double inv2 = reneging
                            ? reneging_inverse_blocking(p.lambda_q(), mu_q, p.s, p.abandon.rate)
                            : balking_inverse_blocking(p.lambda_q(), mu_q, p.s, p.abandon.rate);

    PerformanceIndicators out = detail::assemble_indicators(inv1, inv2, p.lambda, p.abandon.rate,
                                                            p.cbc.eps, heavy_p, p.abandon.kind);
    if (!reneging) {
        const StationaryDistribution dist = full_chain_distribution(p);
        double l_q = 0.0;
        for (long long k = p.s + 1; k < static_cast<long long>(dist.probs.size()); ++k)
            l_q += static_cast<double>(k - p.s) * dist.probs[static_cast<std::size_t>(k)];
        out.l_q = l_q;
        out.w_q = out.l_q / out.lambda_eff;
    }
    return out;
}

/**
 * @brief Delay probability of the no-abandonment (Erlang C) model from its
 *        Erlang-B blocking and utilization: P_Q = B/(1 − ρ + ρB).
 * @pre 0 ≤ p_block ≤ 1, 0 ≤ rho < 1
 */
inline double erlang_c_delay(double p_block, double rho) {
    return p_block / (1.0 - rho + rho * p_block);
}

/**
 * @brief Heavy-traffic (λ ≫ sμ_Q) limits: P_Q ≈ 1, P_ab ≈ p,
 *        L_Q ≈ (λ_Q − sμ_Q)/θ.
 *
 * Adds a warning instead of failing when p ≤ 0 (the regime assumption
 * λ > sμ_Q does not hold). Sub-chain fields are not meaningful here and are
 * left NaN.
 */
inline PerformanceIndicators heavy_traffic(const ModelParams& p) {
    require_valid(p);
    const double mu_q = p.mu_q();
    const double heavy_p = 1.0 - static_cast<double>(p.s) * mu_q / p.lambda;

    PerformanceIndicators out;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.pi_s = nan;
    out.p_block = nan;
    out.pi_s2 = nan;
    out.p_q = 1.0;
    out.p_q_minus = nan;
    out.p_ab = heavy_p;
    out.l_q = (p.lambda_q() - static_cast<double>(p.s) * mu_q) / p.abandon.rate;
    out.lambda_eff = p.abandon.kind == AbandonKind::Reneging
                         ? p.lambda * (1.0 - p.cbc.eps)
                         : p.lambda * (1.0 - out.p_ab);
    out.w_q = out.l_q / out.lambda_eff;
    out.throughput = p.lambda * (1.0 - out.p_ab);
    if (heavy_p <= 0.0)
        out.warnings.push_back(
            "heavy-traffic limit assumes lambda > s*mu_q (p > 0); p <= 0 here, results unreliable");
    return out;
}

/// Direction of the delay/abandonment trade-off when abandonment parameters
/// are strengthened: P_Q always falls; P_ab moves with sign(p − P_block).
enum class TradeoffDirection { TradeOff, WinWin, Independent };

inline const char* to_string(TradeoffDirection d) {
    switch (d) {
        case TradeoffDirection::TradeOff: return "trade-off";
        case TradeoffDirection::WinWin: return "win-win";
        default: return "independent";
    }
}

/**
 * @brief Classify whether faster abandonment lowers both P_Q and P_ab
 *        (WinWin, p > P_block), lowers P_Q but raises P_ab (TradeOff,
 *        p < P_block), or leaves P_ab unmoved (Independent, p = P_block
 *        within 1e-12).
 */
inline TradeoffDirection tradeoff_direction(const ModelParams& p) {
    require_valid(p);
    const double heavy_p = 1.0 - static_cast<double>(p.s) * p.mu_q() / p.lambda;
    const double p_block = erlang_b(p.lambda / p.mu, p.s);
    if (std::fabs(heavy_p - p_block) < 1e-12) return TradeoffDirection::Independent;
    return heavy_p < p_block ? TradeoffDirection::TradeOff : TradeoffDirection::WinWin;
}

}  // namespace exact
}  // namespace erlang_cbc

#endif  // ERLANG_CBC_EXACT_HPP
