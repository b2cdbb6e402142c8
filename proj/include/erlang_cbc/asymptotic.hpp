#ifndef ERLANG_CBC_ASYMPTOTIC_HPP
#define ERLANG_CBC_ASYMPTOTIC_HPP

/**
 * @file asymptotic.hpp
 * @brief Large-system (R → ∞) limits: the φ/ω delay kernels, service-regime
 *        classification, regime phase diagrams, and the square-root staffing
 *        comparison formulas.
 *
 * With R = λ/μ and R_Q = λ_Q/μ_Q, the plane (s/R, 1 − R_Q/R) splits into
 * three service regimes:
 *
 *   ED  (s < R_Q):        every customer waits, P_Q → 1, P_ab → p;
 *   QED (R_Q < s < R):    P_Q → (1 − s/R)/(1 − R_Q/R) on a linear scale,
 *                         or φ(c) on the √R scale when R_Q = R;
 *   QD  (s > R):          delays vanish, P_Q → 0.
 *
 * The congestion-based-control scheme widens the QED band from the single
 * point s = R (the classic square-root regime) to a full interval, which is
 * what the phase diagrams below visualise. All functions here are pure and
 * cheap; they deliberately avoid the exact engines.
 */

#include <cmath>
#include <stdexcept>
#include <vector>

#include "erlang_cbc/model.hpp"
#include "erlang_cbc/normal.hpp"

namespace erlang_cbc {
namespace asymptotic {

// ============================================================================
// Delay kernels
// ============================================================================

/**
 * @brief Square-root-regime delay probability kernel
 *        φ(c) = [√ratio/h(√ratio·c)] / [1/h(−c) + √ratio/h(√ratio·c)],
 *        with ratio = μ_Q/θ.
 *
 * Evaluated in the rearranged form 1/(1 + h(√ratio·c)/(√ratio·h(−c))) so
 * that hazard underflow deep in either tail yields the correct limit (1 as
 * c → −∞, 0 as c → +∞) instead of ∞/∞. Strictly decreasing in c with range
 * (0,1); φ(0) = √ratio/(1+√ratio).
 */
inline double phi_kernel(double c, double ratio) {
    if (!(ratio > 0.0)) throw std::invalid_argument("phi_kernel: ratio must be > 0");
    const double rt = std::sqrt(ratio);
    return 1.0 / (1.0 + approx::hazard(rt * c) / (rt * approx::hazard(-c)));
}

/**
 * @brief Companion kernel ω(c) = 1 / [1/h(−c) + √ratio/h(√ratio·c)].
 *
 * ω/√R is the √R-scale waiting/abandonment correction term in the
 * square-root staffing formulas; it vanishes in both tails.
 */
inline double omega_kernel(double c, double ratio) {
    if (!(ratio > 0.0)) throw std::invalid_argument("omega_kernel: ratio must be > 0");
    const double rt = std::sqrt(ratio);
    return 1.0 / (1.0 / approx::hazard(-c) + rt / approx::hazard(rt * c));
}

// ============================================================================
// Regime classification
// ============================================================================

/// Service regime of a scaled operating point (s/R, R_Q/R).
enum class RegimeLabel {
    ED,             ///< efficiency-driven: s < R_Q, everyone waits
    QED_linear,     ///< quality-and-efficiency band R_Q < s < R (R_Q < R)
    QED_sqrt,       ///< the singular point s = R = R_Q (√R-scale regime)
    QD,             ///< quality-driven: s > R, delays vanish
    BoundaryEDQED,  ///< the curve s = R_Q with R_Q < R
    BoundaryQEDQD   ///< the curve s = R with R_Q < R
};

inline const char* to_string(RegimeLabel r) {
    switch (r) {
        case RegimeLabel::ED: return "ED";
        case RegimeLabel::QED_linear: return "QED-linear";
        case RegimeLabel::QED_sqrt: return "QED-sqrt";
        case RegimeLabel::QD: return "QD";
        case RegimeLabel::BoundaryEDQED: return "ED/QED-boundary";
        default: return "QED/QD-boundary";
    }
}

/**
 * @brief Classify the regime of the scaled point (s/R, R_Q/R).
 *
 * Equalities are detected with absolute tolerance @p tol on the O(1) ratio
 * scale and reported as dedicated boundary labels rather than silently
 * assigned to a side; the point s/R = R_Q/R = 1 — where all three regimes
 * meet — is the square-root regime.
 *
 * @param s_over_R   s/R ≥ 0
 * @param rq_over_r  R_Q/R ∈ [0,1] (0 corresponds to full intervention ε = 1)
 */
inline RegimeLabel classify_regime(double s_over_R, double rq_over_r, double tol = 1e-12) {
    const bool at_upper = std::fabs(s_over_R - 1.0) <= tol;
    const bool at_lower = std::fabs(s_over_R - rq_over_r) <= tol;
    if (at_upper && at_lower) return RegimeLabel::QED_sqrt;
    if (s_over_R < rq_over_r - tol) return RegimeLabel::ED;
    if (at_lower) return RegimeLabel::BoundaryEDQED;
    if (s_over_R < 1.0 - tol) return RegimeLabel::QED_linear;
    if (at_upper) return RegimeLabel::BoundaryQEDQD;
    return RegimeLabel::QD;
}

// ============================================================================
// Asymptotic indicators
// ============================================================================

/// Limiting delay and abandonment probabilities together with the regime that
/// produced them.
struct AsymptoticIndicators {
    RegimeLabel regime;
    double p_q;   ///< limiting P{Wait > 0}
    double p_ab;  ///< limiting P{Abandon}
};

namespace detail {

/// Shared regime → (P_Q, P_ab) table. @p y = 1 − R_Q/R, @p p is the limiting
/// abandonment fraction under overload, @p c and @p ratio feed the
/// square-root kernel at the singular point. Boundary labels evaluate the
/// adjacent QED formula, which is continuous there.
inline AsymptoticIndicators evaluate_regime(RegimeLabel label, double s_over_R, double y,
                                            double eps, double p, double c, double ratio) {
    AsymptoticIndicators out{label, 0.0, 0.0};
    switch (label) {
        case RegimeLabel::ED:
            out.p_q = 1.0;
            out.p_ab = p;
            break;
        case RegimeLabel::QED_sqrt:
            out.p_q = phi_kernel(c, ratio);
            out.p_ab = eps * out.p_q;
            break;
        case RegimeLabel::QD:
            break;
        default: {  // QED_linear and both boundary curves
            double pq = (1.0 - s_over_R) / y;
            pq = std::min(1.0, std::max(0.0, pq));
            out.p_q = pq;
            out.p_ab = eps * pq;
            break;
        }
    }
    return out;
}

}  // namespace detail

/**
 * @brief Limiting indicators of a concrete parameter set.
 *
 * The regime is classified from (s/R, R_Q/R) and the matching limit formula
 * evaluated: ED → (1, p); QED-linear → ((1−s/R)/(1−R_Q/R), ε·P_Q);
 * QED-sqrt → (φ(c), ε·φ(c)) with c = (s−R)/√R and ratio μ_Q/θ; QD → (0, 0).
 * These are asymptotic-in-R formulas reported at the given finite parameters.
 *
 * Unlike the exact and normal-approximation engines this path needs no
 * sub-chain decomposition, so full intervention ε = 1 is in range.
 */
inline AsymptoticIndicators indicators_asymptotic(const ModelParams& params) {
    require_valid(params);
    const double R = params.lambda / params.mu;
    const double rq_over_r = (1.0 - params.cbc.eps) / (1.0 + params.cbc.tau);
    const double s_over_R = static_cast<double>(params.s) / R;
    const double p = 1.0 - static_cast<double>(params.s) * params.mu_q() / params.lambda;
    const double c = (static_cast<double>(params.s) - R) / std::sqrt(R);
    const double ratio = params.mu_q() / params.abandon.rate;
    const RegimeLabel label = classify_regime(s_over_R, rq_over_r);
    return detail::evaluate_regime(label, s_over_R, 1.0 - rq_over_r, params.cbc.eps, p, c,
                                   ratio);
}

/**
 * @brief Evaluate one scaled phase-diagram cell.
 *
 * The intervention axis y = 1 − R_Q/R is realised canonically as ε = y,
 * τ = 0 (any (ε,τ) with the same R_Q/R shares the same regime geometry and
 * the same limiting P_Q; P_ab = ε·P_Q uses that canonical ε). The limiting
 * overload abandonment fraction is then p = 1 − s/R. @p ratio = μ_Q/θ only
 * matters at the singular cell s/R = 1, y = 0 where the kernel φ(0) applies.
 */
inline AsymptoticIndicators asymptotic_cell(double s_over_R, double y, double ratio = 1.0) {
    if (!(y >= 0.0 && y <= 1.0))
        throw std::invalid_argument("asymptotic_cell: intervention y must lie in [0,1]");
    if (!(s_over_R >= 0.0))
        throw std::invalid_argument("asymptotic_cell: s/R must be >= 0");
    const RegimeLabel label = classify_regime(s_over_R, 1.0 - y);
    return detail::evaluate_regime(label, s_over_R, y, y, 1.0 - s_over_R, 0.0, ratio);
}

// ============================================================================
// Phase diagrams
// ============================================================================

/// Horizontal-axis convention of a phase diagram.
enum class PhaseRepresentation {
    StaffingLevel,    ///< x = s/R
    TrafficIntensity  ///< x = R/s (QED band maps to 1 < x < (1+τ)/(1−ε))
};

inline const char* to_string(PhaseRepresentation r) {
    return r == PhaseRepresentation::StaffingLevel ? "staffing-level" : "traffic-intensity";
}

/// One evaluated grid cell.
struct PhaseCell {
    double x;  ///< horizontal coordinate in the chosen representation
    double y;  ///< intervention 1 − R_Q/R
    RegimeLabel regime;
    double p_q;
    double p_ab;
};

/// Fully labelled nx × ny regime grid; cells ordered row-major with y outer
/// (0 → 1) and x inner (min → max).
struct PhaseDiagramGrid {
    PhaseRepresentation representation;
    int nx = 0;
    int ny = 0;
    std::vector<PhaseCell> cells;
};

/**
 * @brief Evaluate a regime phase diagram over [x_min, x_max] × [0, 1].
 *
 * Every cell carries its regime label plus the limiting P_Q and P_ab so the
 * grid can be shaded by delay probability rather than by label alone. Cells
 * are independent; ordering is deterministic.
 *
 * @throws std::invalid_argument for grids smaller than 2×2, an empty x-range,
 *         or a non-positive traffic-intensity coordinate
 */
inline PhaseDiagramGrid phase_diagram(PhaseRepresentation rep, int nx, int ny, double x_min,
                                      double x_max, double ratio = 1.0) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("phase_diagram: nx and ny must be >= 2");
    if (!(x_min < x_max)) throw std::invalid_argument("phase_diagram: require x_min < x_max");
    if (rep == PhaseRepresentation::TrafficIntensity && !(x_min > 0.0))
        throw std::invalid_argument("phase_diagram: traffic intensity x must be > 0");

    PhaseDiagramGrid grid;
    grid.representation = rep;
    grid.nx = nx;
    grid.ny = ny;
    grid.cells.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    for (int j = 0; j < ny; ++j) {
        const double y = static_cast<double>(j) / (ny - 1);
        for (int i = 0; i < nx; ++i) {
            const double x = x_min + (x_max - x_min) * static_cast<double>(i) / (nx - 1);
            const double s_over_R = rep == PhaseRepresentation::StaffingLevel ? x : 1.0 / x;
            const AsymptoticIndicators a = asymptotic_cell(s_over_R, y, ratio);
            grid.cells.push_back(PhaseCell{x, y, a.regime, a.p_q, a.p_ab});
        }
    }
    return grid;
}

// ============================================================================
// Square-root staffing comparison formulas
// ============================================================================

/// (P_Q, P_ab) pair predicted by a square-root staffing rule at s = R + c√R.
struct SqrtStaffingPoint {
    double p_q;
    double p_ab;
};

/**
 * @brief Square-root staffing rule of the original (uncontrolled) reneging
 *        model: P_Q = φ(c), P_ab = ω(c)/√R + p·φ(c) with p = −c/√R and
 *        kernel ratio μ/γ.
 *
 * This is the classical rule the controlled model is benchmarked against; it
 * is exact only in the R → ∞ limit, which is why staffing levels derived
 * from it can differ visibly from the exact ones at moderate R.
 */
inline SqrtStaffingPoint sqrt_staffing_erlang_a(double c, double R, double mu_over_gamma) {
    if (!(R > 0.0)) throw std::invalid_argument("sqrt_staffing_erlang_a: R must be > 0");
    const double rt = std::sqrt(R);
    const double phi = phi_kernel(c, mu_over_gamma);
    const double omega = omega_kernel(c, mu_over_gamma);
    return SqrtStaffingPoint{phi, omega / rt + (-c / rt) * phi};
}

/**
 * @brief Generalised square-root staffing rule for the controlled model on
 *        its singular line R_Q = R: P_Q = φ(c) + ω(c)/√R,
 *        P_ab = ω(c)/√R + p*·φ(c) with p* = ε − (1−ε)·c/√R.
 *
 * Compared with the classical rule it keeps the ω/√R term in P_Q (the term
 * the classical rule drops) and replaces the overload fraction by its
 * controlled counterpart. Intended for ε + τ = 0 parameter sets; the kernel
 * ratio is μ_Q/θ.
 */
inline SqrtStaffingPoint sqrt_staffing_modified(double c, double R, double eps,
                                                double mu_q_over_theta) {
    if (!(R > 0.0)) throw std::invalid_argument("sqrt_staffing_modified: R must be > 0");
    const double rt = std::sqrt(R);
    const double phi = phi_kernel(c, mu_q_over_theta);
    const double omega = omega_kernel(c, mu_q_over_theta);
    const double p_star = eps - (1.0 - eps) * c / rt;
    return SqrtStaffingPoint{phi + omega / rt, omega / rt + p_star * phi};
}

}  // namespace asymptotic
}  // namespace erlang_cbc

#endif  // ERLANG_CBC_ASYMPTOTIC_HPP
