#ifndef ERLANG_CBC_NORMAL_HPP
#define ERLANG_CBC_NORMAL_HPP

/**
 * @file normal.hpp
 * @brief Standard normal pdf, cdf, and hazard function.
 *
 * The hazard h(x) = φ(x)/(1−Φ(x)) is the workhorse of every normal-based
 * blocking approximation in this library. The naive quotient loses all
 * precision once 1−Φ(x) underflows (x ≳ 8 already suffers cancellation
 * through erfc's tiny result times the pdf's tiny value), so the right tail
 * is evaluated through the Mills-ratio continued fraction instead, keeping
 * h finite and fully accurate out to x ≈ 40.
 */

#include <cmath>

namespace erlang_cbc {
namespace approx {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/√(2π)
inline constexpr double kInvSqrt2 = 0.7071067811865475244;    // 1/√2

/// Standard normal density φ(x).
inline double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

/// Standard normal distribution function Φ(x), via erfc for tail accuracy.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

/// Upper tail 1 − Φ(x) = Φ(−x), computed without cancellation.
inline double normal_sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

namespace detail {

/**
 * Mills ratio M(x) = (1−Φ(x))/φ(x) for x > 0 by the continued fraction
 * M(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...)))), evaluated bottom-up.
 * Convergence needs more terms for smaller x; 128 terms give full double
 * precision for x ≥ 8 (the only range this branch serves).
 */
inline double mills_ratio_cf(double x) {
    const int terms = 128;
    double tail = 0.0;
    for (int n = terms; n >= 1; --n) tail = static_cast<double>(n) / (x + tail);
    return 1.0 / (x + tail);
}

}  // namespace detail

/**
 * @brief Normal hazard (inverse Mills ratio) h(x) = φ(x)/(1−Φ(x)).
 *
 * Properties relied on throughout: h > 0, strictly increasing, h(x) → x as
 * x → +∞, h(x) → 0 as x → −∞ (underflowing to exactly 0 near x ≈ −38.6,
 * where the true value drops below the smallest subnormal double).
 */
inline double hazard(double x) {
    if (x < 8.0) return normal_pdf(x) / normal_sf(x);
    return 1.0 / detail::mills_ratio_cf(x);
}

}  // namespace approx
}  // namespace erlang_cbc

#endif  // ERLANG_CBC_NORMAL_HPP
