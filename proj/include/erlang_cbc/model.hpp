#ifndef ERLANG_CBC_MODEL_HPP
#define ERLANG_CBC_MODEL_HPP

/**
 * @file model.hpp
 * @brief Parameter types, validation, and derived coefficients for the
 *        modified Erlang A queueing model.
 *
 * The model is an M/M/s queue with customer abandonment — exponential
 * reneging at rate γ per queued customer, or linear balking that lowers the
 * arrival rate by δ per waiting customer — combined with a congestion-based
 * control (CBC) scheme: whenever all s servers are busy the arrival rate is
 * thinned to λ_Q = (1−ε)λ and the per-server service rate is raised to
 * μ_Q = (1+τ)μ.
 *
 * Everything in this header is a plain immutable value type; all functions
 * are pure and safe to call concurrently.
 */

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace erlang_cbc {

// ============================================================================
// Parameter types
// ============================================================================

/// Which abandonment mechanism the model uses. A model never mixes the two.
enum class AbandonKind { Reneging, Balking };

inline const char* to_string(AbandonKind kind) {
    return kind == AbandonKind::Reneging ? "reneging" : "balking";
}

/**
 * @brief Abandonment mechanism and its rate parameter θ.
 *
 * For Reneging, rate is γ: each queued customer independently abandons after
 * an Exp(γ) patience time. For Balking, rate is δ: the arrival rate seen at
 * state k ≥ s is (λ_Q − δ·(k−s))⁺.
 */
struct AbandonmentSpec {
    AbandonKind kind = AbandonKind::Reneging;
    double rate = 1.0;  ///< γ (reneging) or δ (balking), per unit time; > 0

    static AbandonmentSpec reneging(double gamma) { return {AbandonKind::Reneging, gamma}; }
    static AbandonmentSpec balking(double delta) { return {AbandonKind::Balking, delta}; }
};

/**
 * @brief Congestion-based control proportions.
 *
 * While all servers are busy, arrivals are thinned by ε and service is sped
 * up by τ: λ_Q = (1−ε)λ, μ_Q = (1+τ)μ. Constraints: 0 ≤ ε ≤ 1,
 * −1 < τ ≤ 1, and ε + τ ≥ 0 (which guarantees R_Q ≤ R).
 */
struct CbcControl {
    double eps = 0.0;  ///< arrival-thinning proportion ε
    double tau = 0.0;  ///< service-speedup proportion τ
};

/**
 * @brief Full specification of one modified Erlang A instance.
 */
struct ModelParams {
    double lambda = 1.0;  ///< arrival rate λ (customers / time), > 0
    double mu = 1.0;      ///< per-server service rate μ (1 / time), > 0
    int s = 1;            ///< staff count, ≥ 0
    AbandonmentSpec abandon{};
    CbcControl cbc{};

    /// Congested arrival rate λ_Q = (1−ε)λ.
    double lambda_q() const { return (1.0 - cbc.eps) * lambda; }
    /// Congested per-server service rate μ_Q = (1+τ)μ.
    double mu_q() const { return (1.0 + cbc.tau) * mu; }
};

// ============================================================================
// Validation
// ============================================================================

/// Outcome of validate(): empty violation list means the parameters are valid.
struct ValidationResult {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    /// All violations joined with "; " (empty string when valid).
    std::string message() const {
        std::string out;
        for (const auto& v : violations) {
            if (!out.empty()) out += "; ";
            out += v;
        }
        return out;
    }
};

/**
 * @brief Check every model constraint; never throws.
 *
 * Returns the list of violated constraints (empty when valid):
 * λ > 0, μ > 0, s ≥ 0, abandonment rate > 0, 0 ≤ ε ≤ 1, −1 < τ ≤ 1,
 * ε + τ ≥ 0, and all inputs finite.
 */
inline ValidationResult validate(const ModelParams& p) {
    ValidationResult r;
    auto add = [&r](const std::string& msg) { r.violations.push_back(msg); };

    if (!std::isfinite(p.lambda) || p.lambda <= 0.0) add("lambda must be finite and > 0");
    if (!std::isfinite(p.mu) || p.mu <= 0.0) add("mu must be finite and > 0");
    if (p.s < 0) add("s must be >= 0");
    if (!std::isfinite(p.abandon.rate) || p.abandon.rate <= 0.0)
        add("abandonment rate must be finite and > 0");
    if (!std::isfinite(p.cbc.eps) || p.cbc.eps < 0.0 || p.cbc.eps > 1.0)
        add("eps must satisfy 0 <= eps <= 1");
    if (!std::isfinite(p.cbc.tau) || p.cbc.tau <= -1.0 || p.cbc.tau > 1.0)
        add("tau must satisfy -1 < tau <= 1");
    if (std::isfinite(p.cbc.eps) && std::isfinite(p.cbc.tau) && p.cbc.eps + p.cbc.tau < 0.0)
        add("eps + tau must be >= 0 (so that the congested load R_Q <= R)");
    return r;
}

/// Validate and throw std::invalid_argument listing the violations if invalid.
inline void require_valid(const ModelParams& p) {
    ValidationResult r = validate(p);
    if (!r.ok()) throw std::invalid_argument("invalid model parameters: " + r.message());
}

// ============================================================================
// Derived coefficients
// ============================================================================

/**
 * @brief Coordinates of one sub-chain on its own Poisson/normal scale.
 *
 * The stationary chain splits at the all-servers-busy boundary into two
 * sub-chains, each of which matches a birth–death chain with a Poisson-like
 * profile of some load and (possibly fractional) staff level. The normal
 * approximation of each sub-chain is parameterized by a square-root
 * coefficient, a linear coefficient, and a continuity correction.
 */
struct SubChainScale {
    double load = 0.0;         ///< offered load of the sub-chain (R, R′ or R″)
    double staff = 0.0;        ///< staff coordinate (s, s′ or s″), real-valued
    double sqrt_coef = 0.0;    ///< (staff − load)/√load   (c, c′ or c″)
    double linear_coef = 0.0;  ///< (staff − load)/load    (a, a′ or a″)
    double continuity = 0.0;   ///< 0.5/√load              (Δ, Δ′ or Δ″)
};

/**
 * @brief All scalar coefficients derived from a parameter set.
 *
 * Conventions: R = λ/μ, R_Q = λ_Q/μ_Q, p = 1 − sμ_Q/λ (the heavy-traffic
 * abandonment limit), a = (s−R)/R, c = (s−R)/√R, a_Q = (s−R_Q)/R and
 * delta_cc = 0.5/√R. sub1 describes the below-boundary loss sub-chain
 * (load R, staff s); sub2 describes the above-boundary queue sub-chain:
 * reneging has load R′ = λ_Q/γ and staff s′ = sμ_Q/γ, balking has load
 * R″ = sμ_Q/δ and staff s″ = λ_Q/δ.
 */
struct DerivedCoefficients {
    double R = 0.0;         ///< offered load λ/μ
    double R_q = 0.0;       ///< congested offered load λ_Q/μ_Q
    double p = 0.0;         ///< heavy-traffic abandonment limit 1 − sμ_Q/λ
    double a = 0.0;         ///< linear staffing coefficient (s−R)/R
    double c = 0.0;         ///< square-root staffing coefficient (s−R)/√R
    double a_q = 0.0;       ///< (s−R_Q)/R = a + (ε+τ)/(1+τ)
    double delta_cc = 0.0;  ///< continuity correction 0.5/√R
    SubChainScale sub1{};   ///< loss sub-chain (states 0..s)
    SubChainScale sub2{};   ///< queue sub-chain (states s..top)
};

namespace detail {

inline SubChainScale sub_chain_scale(double load, double staff) {
    SubChainScale sc;
    sc.load = load;
    sc.staff = staff;
    sc.sqrt_coef = (staff - load) / std::sqrt(load);
    sc.linear_coef = (staff - load) / load;
    sc.continuity = 0.5 / std::sqrt(load);
    return sc;
}

}  // namespace detail

/**
 * @brief Derived coefficients at a real-valued staff level.
 *
 * Identical to derive() but accepts fractional s; used by the staffing
 * solver's continuous root search and by sweep evaluations on an s/R grid.
 *
 * @throws std::domain_error if a sub-chain load is non-positive: the queue
 *         sub-chain degenerates when λ_Q = 0 (ε = 1, reneging scale R′ = 0)
 *         or when sμ_Q = 0 (s = 0, balking scale R″ = 0).
 */
inline DerivedCoefficients derive_real(double lambda, double mu, double s,
                                       const AbandonmentSpec& abandon, const CbcControl& cbc) {
    const double lambda_q = (1.0 - cbc.eps) * lambda;
    const double mu_q = (1.0 + cbc.tau) * mu;

    DerivedCoefficients d;
    d.R = lambda / mu;
    d.R_q = lambda_q / mu_q;
    d.p = 1.0 - s * mu_q / lambda;
    d.a = (s - d.R) / d.R;
    d.c = (s - d.R) / std::sqrt(d.R);
    d.a_q = (s - d.R_q) / d.R;
    d.delta_cc = 0.5 / std::sqrt(d.R);
    d.sub1 = detail::sub_chain_scale(d.R, s);

    double load2 = 0.0, staff2 = 0.0;
    if (abandon.kind == AbandonKind::Reneging) {
        load2 = lambda_q / abandon.rate;   // R′
        staff2 = s * mu_q / abandon.rate;  // s′
    } else {
        load2 = s * mu_q / abandon.rate;   // R″
        staff2 = lambda_q / abandon.rate;  // s″
    }
    if (!(load2 > 0.0)) {
        std::ostringstream msg;
        msg << "degenerate " << to_string(abandon.kind) << " sub-chain scale: load " << load2
            << " must be > 0 (requires lambda_q > 0 for reneging, s*mu_q > 0 for balking)";
        throw std::domain_error(msg.str());
    }
    d.sub2 = detail::sub_chain_scale(load2, staff2);
    return d;
}

/**
 * @brief Compute every derived coefficient for a validated parameter set.
 *
 * The sub-chain square-root coefficients are always computed from the
 * definitions (staff − load)/√load; the equivalent ratio forms through c and
 * a_Q/a exist only for a ≠ 0 and serve as cross-checks, not as the primary
 * computation.
 *
 * @throws std::domain_error on a degenerate sub-chain scale (see derive_real).
 */
inline DerivedCoefficients derive(const ModelParams& p) {
    return derive_real(p.lambda, p.mu, static_cast<double>(p.s), p.abandon, p.cbc);
}

}  // namespace erlang_cbc

#endif  // ERLANG_CBC_MODEL_HPP
