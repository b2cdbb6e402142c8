#ifndef ERLANG_CBC_INDICATORS_HPP
#define ERLANG_CBC_INDICATORS_HPP

/**
 * @file indicators.hpp
 * @brief The PerformanceIndicators bundle and the shared assembly that turns
 *        the two sub-chain inverse blocking probabilities into every
 *        steady-state quality-of-service metric.
 *
 * The stationary chain decomposes at the all-servers-busy state s into a
 * loss sub-chain (states 0..s) and a queue sub-chain (states s..top) glued
 * at the boundary. Writing I₁ = 1/π_s¹ and I₂ = 1/π_s² for the sub-chains'
 * inverse boundary probabilities, the full-chain metrics follow from
 *
 *     1/π_s = I₁ + I₂ − 1,      P_Q = I₂·π_s,      P_{Q−} = P_Q − π_s,
 *     P_ab  = π_s + p·P_{Q−},   L_Q = (λ/θ)·[(1−ε)π_s + (p−ε)P_{Q−}],
 *
 * with p = 1 − sμ_Q/λ. Every engine (exact, normal-approximation,
 * Wilson–Hilferty) produces its own I₁, I₂ and shares this assembly, which
 * is written in division arrangements that stay IEEE-clean when I₁ or I₂
 * overflows to infinity (deeply-loss-dominated or unstable-queue regimes).
 */

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "erlang_cbc/model.hpp"

namespace erlang_cbc {

/// All steady-state performance metrics of one model instance.
struct PerformanceIndicators {
    double pi_s = 0.0;        ///< stationary probability of the boundary state s
    double p_block = 0.0;     ///< π_s¹ — loss sub-chain blocking (Erlang B form)
    double pi_s2 = 0.0;       ///< π_s² — queue sub-chain boundary probability
    double p_q = 0.0;         ///< delay probability P_Q = Pr[all servers busy]
    double p_q_minus = 0.0;   ///< P_{Q−} = P_Q − π_s = Pr[queue strictly nonempty]
    double p_ab = 0.0;        ///< abandonment probability
    double l_q = 0.0;         ///< mean queue length
    double w_q = 0.0;         ///< mean waiting time
    double lambda_eff = 0.0;  ///< effective (admitted) arrival rate
    double throughput = 0.0;  ///< served-customer rate X = λ(1−P_ab)
    std::vector<std::string> warnings;  ///< non-fatal quality notes
};

namespace detail {

/**
 * @brief Assemble all indicators from the two inverse blocking probabilities.
 *
 * @param inv1   I₁ = 1/π_s¹ ≥ 1 (may be +inf when the loss chain underflows)
 * @param inv2   I₂ = 1/π_s² ≥ 1 (may be +inf for a wildly unstable queue)
 * @param lambda raw arrival rate λ
 * @param theta  abandonment rate (γ or δ)
 * @param eps    CBC thinning proportion ε
 * @param p      heavy-traffic abandonment limit 1 − sμ_Q/λ
 * @param kind   which λ_eff convention applies
 */
inline PerformanceIndicators assemble_indicators(double inv1, double inv2, double lambda,
                                                 double theta, double eps, double p,
                                                 AbandonKind kind) {
    PerformanceIndicators out;
    out.p_block = 1.0 / inv1;
    out.pi_s2 = 1.0 / inv2;
    // π_s = 1/(I₁+I₂−1): clean 0 when either inverse is infinite.
    out.pi_s = 1.0 / (inv1 + (inv2 - 1.0));
    // P_Q = I₂/(I₁+I₂−1), arranged so I₂ = inf gives exactly 1 and a huge
    // I₁ gives exactly 0 without forming inf/inf.
    out.p_q = 1.0 / (1.0 + (inv1 - 1.0) / inv2);
    out.p_q_minus = out.p_q - out.pi_s;
    out.p_ab = out.pi_s + p * out.p_q_minus;
    out.l_q = (lambda / theta) * ((1.0 - eps) * out.pi_s + (p - eps) * out.p_q_minus);
    out.lambda_eff =
        kind == AbandonKind::Reneging ? lambda * (1.0 - eps * out.p_q) : lambda * (1.0 - out.p_ab);
    out.w_q = out.l_q / out.lambda_eff;
    out.throughput = lambda * (1.0 - out.p_ab);
    return out;
}

}  // namespace detail
}  // namespace erlang_cbc

#endif  // ERLANG_CBC_INDICATORS_HPP
