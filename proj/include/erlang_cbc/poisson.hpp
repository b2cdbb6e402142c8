#ifndef ERLANG_CBC_POISSON_HPP
#define ERLANG_CBC_POISSON_HPP

/**
 * @file poisson.hpp
 * @brief Exact Poisson pmf/cdf (via the regularized incomplete gamma
 *        function) and the Wilson–Hilferty cube-root normal approximation.
 *
 * The cdf identity used throughout: F_P(s;R) = Pr[Poisson(R) ≤ s]
 * = Q(s+1, R), the regularized upper incomplete gamma function. Q and its
 * complement P are computed by the classic split — power series for the
 * lower function when R < a+1, Lentz continued fraction for the upper
 * function otherwise — so the smaller of the two is always the one summed,
 * keeping both tails fully accurate.
 */

#include <cmath>
#include <limits>
#include <stdexcept>

#include "erlang_cbc/normal.hpp"

namespace erlang_cbc {
namespace approx {

namespace detail {

/// Lower regularized incomplete gamma P(a,x) by power series; needs x < a+1.
inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Upper regularized incomplete gamma Q(a,x) by Lentz continued fraction;
/// needs x ≥ a+1.
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

/**
 * @brief Regularized lower incomplete gamma P(a,x) = γ(a,x)/Γ(a).
 * @pre a > 0, x ≥ 0
 */
inline double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("regularized_gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

/**
 * @brief Regularized upper incomplete gamma Q(a,x) = Γ(a,x)/Γ(a).
 * @pre a > 0, x ≥ 0
 */
inline double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("regularized_gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

/// log f_P(k;R) = k·log R − R − log k!, finite for all k ≥ 0, R > 0.
inline double poisson_log_pmf(long long k, double R) {
    if (k < 0) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(k) * std::log(R) - R - std::lgamma(static_cast<double>(k) + 1.0);
}

/// Poisson pmf f_P(k;R); exactly 0 for k < 0.
inline double poisson_pmf(long long k, double R) {
    if (k < 0) return 0.0;
    return std::exp(poisson_log_pmf(k, R));
}

/// Poisson cdf F_P(s;R) = Pr[N ≤ s] = Q(s+1, R); exactly 0 for s < 0.
inline double poisson_cdf(long long s, double R) {
    if (s < 0) return 0.0;
    return regularized_gamma_q(static_cast<double>(s) + 1.0, R);
}

/// Poisson upper tail Pr[N ≥ k] = P(k, R), computed without cancellation;
/// exactly 1 for k ≤ 0.
inline double poisson_tail(long long k, double R) {
    if (k <= 0) return 1.0;
    return regularized_gamma_p(static_cast<double>(k), R);
}

// ============================================================================
// Wilson–Hilferty approximation
// ============================================================================

/**
 * @brief Wilson–Hilferty normal deviate for the Poisson cdf at (possibly
 *        fractional) s.
 *
 * From the gamma-tail identity F_P(s;R) = Pr[Gamma(s+1) > R] and the
 * cube-root normalization (G/k)^{1/3} ≈ N(1 − 1/(9k), 1/(9k)) with k = s+1:
 *
 *     z(s,R) = (1 − 1/(9(s+1)) − ∛(R/(s+1))) · 3√(s+1),
 *
 * so that F_P(s;R) ≈ Φ(z(s,R)). Returns −∞ for s ≤ −1 (Φ → 0), the natural
 * limit of the formula as s+1 → 0⁺.
 */
inline double wilson_hilferty_z(double s, double R) {
    const double k = s + 1.0;
    if (!(k > 0.0)) return -std::numeric_limits<double>::infinity();
    return (1.0 - 1.0 / (9.0 * k) - std::cbrt(R / k)) * 3.0 * std::sqrt(k);
}

/// Wilson–Hilferty cdf approximation F_P(s;R) ≈ Φ(z(s,R)); 0 for s ≤ −1.
inline double wilson_hilferty_cdf(double s, double R) {
    const double z = wilson_hilferty_z(s, R);
    if (std::isinf(z) && z < 0.0) return 0.0;
    return normal_cdf(z);
}

/// Wilson–Hilferty pmf approximation by cdf differencing at distance 1.
inline double wilson_hilferty_pmf(double s, double R) {
    return wilson_hilferty_cdf(s, R) - wilson_hilferty_cdf(s - 1.0, R);
}

}  // namespace approx
}  // namespace erlang_cbc

#endif  // ERLANG_CBC_POISSON_HPP
