#ifndef ERLANG_CBC_APPROX_HPP
#define ERLANG_CBC_APPROX_HPP

/**
 * @file approx.hpp
 * @brief Poisson→normal conversion with continuity correction, the
 *        hazard-function blocking approximations, and the closed-form
 *        non-asymptotic / Wilson–Hilferty indicator engines.
 *
 * The conversion maps Poisson quantities at (possibly fractional) staff
 * coordinate s and load R onto the standard normal through the square-root
 * coefficient c = (s−R)/√R and the continuity correction Δ = 0.5/√R:
 *
 *     F_P ≈ Φ(c+Δ),   f_P ≈ φ(c+Δ)/√R,
 *     f_P/(1−F_P) ≈ h(c+Δ)/√R,   f_P/F_P ≈ h(−c−Δ)/√R.
 *
 * Feeding the sub-chain coordinates through these ratios yields closed-form
 * inverse blocking probabilities — the entire indicator set then costs a few
 * hazard evaluations, with no sums, at spreadsheet-level formulas.
 */

#include <cmath>
#include <limits>
#include <stdexcept>

#include "erlang_cbc/indicators.hpp"
#include "erlang_cbc/model.hpp"
#include "erlang_cbc/normal.hpp"
#include "erlang_cbc/poisson.hpp"

namespace erlang_cbc {
namespace approx {

// ============================================================================
// Poisson → normal conversions (continuity-corrected)
// ============================================================================

/// F_P(s;R) ≈ Φ(c+Δ); s may be fractional.
inline double poisson_cdf_normal(double s, double R) {
    const double rt = std::sqrt(R);
    return normal_cdf((s - R) / rt + 0.5 / rt);
}

/// f_P(s;R) ≈ φ(c+Δ)/√R.
inline double poisson_pmf_normal(double s, double R) {
    const double rt = std::sqrt(R);
    return normal_pdf((s - R) / rt + 0.5 / rt) / rt;
}

/// Upper hazard ratio f_P/(1−F_P) ≈ h(c+Δ)/√R, finite far into both tails.
inline double poisson_hazard_normal(double s, double R) {
    const double rt = std::sqrt(R);
    return hazard((s - R) / rt + 0.5 / rt) / rt;
}

/// Lower (reversed) hazard ratio f_P/F_P ≈ h(−c−Δ)/√R.
inline double poisson_rev_hazard_normal(double s, double R) {
    const double rt = std::sqrt(R);
    return hazard(-((s - R) / rt + 0.5 / rt)) / rt;
}

// ============================================================================
// Hazard-form inverse blocking probabilities
// ============================================================================

/// Which sub-chain an inverse blocking approximation refers to.
enum class SubChain { MMss, Reneging, Balking };

/**
 * @brief Closed-form inverse blocking probability of one sub-chain.
 *
 * Loss sub-chain:      1/π_s¹ ≈ √R / h(−c−Δ)
 * Reneging sub-chain:  1/π_s² ≈ 1 + √R′ / h(c′+Δ′)
 * Balking sub-chain:   1/π_s² ≈ √R″ / h(−c″−Δ″)
 *
 * @throws std::domain_error if the requested sub-chain's load is ≤ 0
 */
inline double inv_blocking_normal(SubChain which, const DerivedCoefficients& d) {
    const SubChainScale& sc = which == SubChain::MMss ? d.sub1 : d.sub2;
    if (!(sc.load > 0.0))
        throw std::domain_error("inv_blocking_normal: sub-chain load must be > 0");
    const double rt = std::sqrt(sc.load);
    switch (which) {
        case SubChain::MMss:
            return rt / hazard(-(sc.sqrt_coef + sc.continuity));
        case SubChain::Reneging:
            return 1.0 + rt / hazard(sc.sqrt_coef + sc.continuity);
        default:  // Balking
            return rt / hazard(-(sc.sqrt_coef + sc.continuity));
    }
}

namespace detail {

/// Ratio num/den with the 0/0 and x/0 tail limits resolved explicitly.
inline double guarded_ratio(double num, double den) {
    if (den > 0.0) return num / den;
    if (num == 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
}

/// Clamp out-of-range approximate probabilities and rebuild the dependent
/// fields; used only when a closed-form engine strays outside its validity
/// regime.
inline void clamp_probabilities(PerformanceIndicators& ind, double lambda, double theta,
                                double eps, double p, AbandonKind kind) {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!(in01(ind.pi_s) && in01(ind.p_q_minus) && in01(ind.p_q))) {
        auto clamp01 = [](double x) {
            return std::isnan(x) ? 0.0 : std::min(1.0, std::max(0.0, x));
        };
        ind.pi_s = clamp01(ind.pi_s);
        ind.p_q_minus = clamp01(ind.p_q_minus);
        ind.p_q = std::min(1.0, ind.pi_s + ind.p_q_minus);
        ind.p_ab = ind.pi_s + p * ind.p_q_minus;
        ind.l_q = (lambda / theta) * ((1.0 - eps) * ind.pi_s + (p - eps) * ind.p_q_minus);
        ind.lambda_eff = kind == AbandonKind::Reneging ? lambda * (1.0 - eps * ind.p_q)
                                                       : lambda * (1.0 - ind.p_ab);
        ind.w_q = ind.l_q / ind.lambda_eff;
        ind.throughput = lambda * (1.0 - ind.p_ab);
        ind.warnings.push_back(
            "approximation outside its validity regime: probabilities clamped to [0,1]");
    }
    // The closed-form queue length can dip below zero when p < ε and the
    // surrogate overestimates the queue mass; the true mean is nonnegative.
    if (ind.l_q < 0.0) {
        ind.l_q = 0.0;
        ind.w_q = 0.0;
        ind.warnings.push_back(
            "approximation outside its validity regime: mean queue length floored at 0");
    }
}

}  // namespace detail

// ============================================================================
// Closed-form indicator engines
// ============================================================================

/**
 * @brief Non-asymptotic normal-approximation indicators.
 *
 * Both inverse blocking probabilities come from inv_blocking_normal and feed
 * the same assembly as the exact engine, which reproduces the closed-form
 * indicator formulas exactly (including the −1/√R correction the balking
 * variant carries). Valid parameter sets with a degenerate sub-chain scale
 * (ε = 1, or s = 0 with balking) propagate std::domain_error from derive().
 *
 * Accuracy is excellent for loads of roughly 10 upwards; outside that the
 * probabilities can stray from [0,1], in which case they are clamped and a
 * warning is recorded.
 */
inline PerformanceIndicators indicators_nonasymptotic(const ModelParams& p) {
    require_valid(p);
    const DerivedCoefficients d = derive(p);
    const double inv1 = inv_blocking_normal(SubChain::MMss, d);
    const bool reneging = p.abandon.kind == AbandonKind::Reneging;
    const double inv2 =
        inv_blocking_normal(reneging ? SubChain::Reneging : SubChain::Balking, d);

    PerformanceIndicators out = erlang_cbc::detail::assemble_indicators(
        inv1, inv2, p.lambda, p.abandon.rate, p.cbc.eps, d.p, p.abandon.kind);
    detail::clamp_probabilities(out, p.lambda, p.abandon.rate, p.cbc.eps, d.p, p.abandon.kind);
    return out;
}

/// Non-asymptotic indicators at a real-valued staff level (used by the
/// staffing solver's continuous root search and by smooth s/R sweeps).
inline PerformanceIndicators indicators_nonasymptotic_real(double lambda, double mu, double s,
                                                           const AbandonmentSpec& abandon,
                                                           const CbcControl& cbc) {
    const DerivedCoefficients d = derive_real(lambda, mu, s, abandon, cbc);
    const double inv1 = inv_blocking_normal(SubChain::MMss, d);
    const bool reneging = abandon.kind == AbandonKind::Reneging;
    const double inv2 =
        inv_blocking_normal(reneging ? SubChain::Reneging : SubChain::Balking, d);

    PerformanceIndicators out = erlang_cbc::detail::assemble_indicators(
        inv1, inv2, lambda, abandon.rate, cbc.eps, d.p, abandon.kind);
    detail::clamp_probabilities(out, lambda, abandon.rate, cbc.eps, d.p, abandon.kind);
    return out;
}

/**
 * @brief Wilson–Hilferty alternative engine for small loads.
 *
 * The sub-chain inverse blockings are taken in their Poisson-ratio form
 * (1/π_s¹ = F_P/f_P at (s,R); reneging 1/π_s² = 1 + (1−F_P)/f_P at
 * (s′,R′); balking 1/π_s² = F_P/f_P at (s″,R″)) with every F_P/f_P
 * evaluated by the Wilson–Hilferty cube-root approximation, which stays
 * accurate down to loads near 1. Fractional sub-chain coordinates are
 * evaluated directly (the formula is smooth in s).
 */
inline PerformanceIndicators indicators_wilson_hilferty(const ModelParams& p) {
    require_valid(p);
    const DerivedCoefficients d = derive(p);

    const double f1 = wilson_hilferty_pmf(d.sub1.staff, d.sub1.load);
    const double F1 = wilson_hilferty_cdf(d.sub1.staff, d.sub1.load);
    const double inv1 = detail::guarded_ratio(F1, f1);

    const bool reneging = p.abandon.kind == AbandonKind::Reneging;
    const double f2 = wilson_hilferty_pmf(d.sub2.staff, d.sub2.load);
    const double F2 = wilson_hilferty_cdf(d.sub2.staff, d.sub2.load);
    const double inv2 = reneging ? 1.0 + detail::guarded_ratio(1.0 - F2, f2)
                                 : detail::guarded_ratio(F2, f2);

    PerformanceIndicators out = erlang_cbc::detail::assemble_indicators(
        inv1, inv2, p.lambda, p.abandon.rate, p.cbc.eps, d.p, p.abandon.kind);
    detail::clamp_probabilities(out, p.lambda, p.abandon.rate, p.cbc.eps, d.p, p.abandon.kind);
    return out;
}

}  // namespace approx
}  // namespace erlang_cbc

#endif  // ERLANG_CBC_APPROX_HPP
