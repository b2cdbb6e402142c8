#ifndef ERLANG_CBC_STAFFING_HPP
#define ERLANG_CBC_STAFFING_HPP

/**
 * @file staffing.hpp
 * @brief Minimum-staffing solver: smallest integer s with metric(s) < α.
 *
 * Both supported metrics (delay probability and abandonment probability)
 * decrease strictly from 1 to 0 as s grows with everything else fixed, so the
 * minimiser is found by a doubling bracket from s = 1 followed by integer
 * bisection — ~2·log2(s*) engine evaluations, no derivatives.
 *
 * For the closed-form evaluators the solver additionally reports the
 * continuous square-root coordinate c_α solving metric(R + c√R) = α and the
 * ceiling staffing level ⌈R + c_α√R⌉ it implies. The two answers agree except
 * on the measure-zero knife edge where the continuous root is an exact
 * integer (strict inequality then pushes the integer answer one higher);
 * both are surfaced because a disagreement is diagnostic.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "erlang_cbc/approx.hpp"
#include "erlang_cbc/asymptotic.hpp"
#include "erlang_cbc/exact.hpp"
#include "erlang_cbc/indicators.hpp"
#include "erlang_cbc/model.hpp"

namespace erlang_cbc {
namespace staffing {

// ============================================================================
// Query / result types
// ============================================================================

/// Which indicator the staffing target constrains.
enum class Metric { DelayProbability, AbandonmentProbability };

inline const char* to_string(Metric m) {
    return m == Metric::DelayProbability ? "p_q" : "p_ab";
}

/// Which engine evaluates the metric during the search.
enum class Evaluator { Exact, NonAsymptotic, SqrtStaffing };

inline const char* to_string(Evaluator e) {
    switch (e) {
        case Evaluator::Exact: return "exact";
        case Evaluator::NonAsymptotic: return "nonasym";
        default: return "sqrt";
    }
}

/// A staffing problem: the model with s left free, plus target and method.
struct StaffingQuery {
    double lambda = 0.0;
    double mu = 0.0;
    AbandonmentSpec abandon{};
    CbcControl cbc{};
    double alpha = 0.0;  ///< target level, metric(s*) < alpha, 0 < alpha < 1
    Metric metric = Metric::DelayProbability;
    Evaluator evaluator = Evaluator::Exact;
    long long s_cap = 1000000;  ///< give up (unsatisfiable) beyond this level
};

/// Thrown when no staffing level up to the cap meets the target, or when the
/// continuous square-root rule would need a root below −√R (s < 0).
class StaffingUnsatisfiable : public std::runtime_error {
  public:
    explicit StaffingUnsatisfiable(const std::string& what) : std::runtime_error(what) {}
};

/// Solver output: the minimal level, the indicators achieved there, and (for
/// closed-form evaluators) the continuous square-root solution.
struct StaffingResult {
    long long s_star = 0;              ///< smallest integer s with metric < alpha
    PerformanceIndicators achieved;    ///< indicators evaluated at s_star
    bool has_continuous = false;       ///< continuous-root fields populated?
    double c_alpha = std::numeric_limits<double>::quiet_NaN();  ///< root of metric(R+c√R)=α
    long long s_from_root = -1;        ///< ⌈R + c_α√R⌉ (cross-check value)
};

// ============================================================================
// Solver
// ============================================================================

namespace detail {

inline double pick_metric(const PerformanceIndicators& ind, Metric m) {
    return m == Metric::DelayProbability ? ind.p_q : ind.p_ab;
}

/// Indicators implied by the square-root staffing rule at integer or real s.
inline PerformanceIndicators sqrt_rule_indicators(const StaffingQuery& q, double s) {
    const double R = q.lambda / q.mu;
    const double c = (s - R) / std::sqrt(R);
    const asymptotic::SqrtStaffingPoint pt =
        asymptotic::sqrt_staffing_erlang_a(c, R, q.mu / q.abandon.rate);
    PerformanceIndicators ind;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ind.pi_s = ind.p_block = ind.pi_s2 = ind.p_q_minus = nan;
    ind.l_q = ind.w_q = ind.lambda_eff = ind.throughput = nan;
    ind.p_q = pt.p_q;
    ind.p_ab = pt.p_ab;
    return ind;
}

/// Full indicator evaluation at integer s under the query's evaluator.
inline PerformanceIndicators evaluate_at(const StaffingQuery& q, long long s) {
    if (q.evaluator == Evaluator::SqrtStaffing)
        return sqrt_rule_indicators(q, static_cast<double>(s));
    ModelParams p;
    p.lambda = q.lambda;
    p.mu = q.mu;
    p.s = s;
    p.abandon = q.abandon;
    p.cbc = q.cbc;
    return q.evaluator == Evaluator::Exact ? exact::indicators_exact(p)
                                           : approx::indicators_nonasymptotic(p);
}

/// Metric at a real-valued staffing level (continuous-root path only).
inline double metric_real(const StaffingQuery& q, double s) {
    if (q.evaluator == Evaluator::SqrtStaffing)
        return pick_metric(sqrt_rule_indicators(q, s), q.metric);
    return pick_metric(
        approx::indicators_nonasymptotic_real(q.lambda, q.mu, s, q.abandon, q.cbc), q.metric);
}

inline void validate_query(const StaffingQuery& q) {
    ModelParams probe;
    probe.lambda = q.lambda;
    probe.mu = q.mu;
    probe.s = 1;
    probe.abandon = q.abandon;
    probe.cbc = q.cbc;
    require_valid(probe);
    if (!(q.alpha > 0.0 && q.alpha < 1.0))
        throw std::invalid_argument("staffing: target alpha must lie strictly in (0,1)");
    if (q.s_cap < 1) throw std::invalid_argument("staffing: s_cap must be >= 1");
    if (q.evaluator == Evaluator::SqrtStaffing &&
        (q.cbc.eps != 0.0 || q.cbc.tau != 0.0))
        throw std::invalid_argument(
            "staffing: the square-root evaluator is the uncontrolled-model rule; it requires "
            "eps = 0 and tau = 0");
}

/// Solve metric(R + c√R) = α by bisection; returns true and writes c_alpha on
/// success. Failure modes: root below the lower limit (metric already < α at
/// c = −√R side) or no sign change up to a huge c.
inline bool continuous_root(const StaffingQuery& q, double& c_alpha) {
    const double R = q.lambda / q.mu;
    const double rt = std::sqrt(R);
    // Keep s strictly positive for the closed-form engine (sub-chain loads).
    double lo = q.evaluator == Evaluator::SqrtStaffing ? -rt : -rt * (1.0 - 1e-9);
    if (!(metric_real(q, R + lo * rt) >= q.alpha)) return false;  // root below s=0 edge
    double hi = std::max(1.0, lo + 1.0);
    int guard = 0;
    while (metric_real(q, R + hi * rt) >= q.alpha) {
        hi *= 2.0;
        if (++guard > 64) return false;
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (metric_real(q, R + mid * rt) < q.alpha)
            hi = mid;
        else
            lo = mid;
    }
    c_alpha = 0.5 * (lo + hi);
    return true;
}

}  // namespace detail

/**
 * @brief Smallest integer staffing level with metric(s) < α (strict).
 *
 * Doubling bracket from s = 1, then integer bisection; the metric's strict
 * monotone decrease in s guarantees correctness. For the NonAsymptotic and
 * SqrtStaffing evaluators the result also carries the continuous root c_α
 * and ⌈R + c_α√R⌉. A SqrtStaffing query whose continuous root would lie
 * below −√R (a negative staffing level) is reported unsatisfiable rather
 * than extrapolated.
 *
 * @throws std::invalid_argument  invalid query (including CBC intervention
 *                                combined with the square-root evaluator)
 * @throws StaffingUnsatisfiable  no s ≤ s_cap meets the target
 */
inline StaffingResult min_staff(const StaffingQuery& q) {
    detail::validate_query(q);

    StaffingResult res;
    PerformanceIndicators at_hi = detail::evaluate_at(q, 1);
    if (detail::pick_metric(at_hi, q.metric) < q.alpha) {
        res.s_star = 1;
        res.achieved = at_hi;
    } else {
        long long lo = 1;  // fails the target
        long long hi = 2;
        PerformanceIndicators cand = detail::evaluate_at(q, hi);
        while (detail::pick_metric(cand, q.metric) >= q.alpha) {
            lo = hi;
            if (hi >= q.s_cap)
                throw StaffingUnsatisfiable(
                    "staffing: target " + std::to_string(q.alpha) + " not met by any s <= " +
                    std::to_string(q.s_cap));
            hi = std::min(q.s_cap, hi * 2);
            cand = detail::evaluate_at(q, hi);
        }
        while (hi - lo > 1) {
            const long long mid = lo + (hi - lo) / 2;
            PerformanceIndicators m = detail::evaluate_at(q, mid);
            if (detail::pick_metric(m, q.metric) < q.alpha) {
                hi = mid;
                cand = m;
            } else {
                lo = mid;
            }
        }
        res.s_star = hi;
        res.achieved = cand;
    }

    if (q.evaluator == Evaluator::NonAsymptotic || q.evaluator == Evaluator::SqrtStaffing) {
        double c_alpha;
        if (detail::continuous_root(q, c_alpha)) {
            const double R = q.lambda / q.mu;
            res.has_continuous = true;
            res.c_alpha = c_alpha;
            res.s_from_root =
                std::max<long long>(1, static_cast<long long>(
                                           std::ceil(R + c_alpha * std::sqrt(R))));
        } else if (q.evaluator == Evaluator::SqrtStaffing) {
            throw StaffingUnsatisfiable(
                "staffing: square-root rule root lies below -sqrt(R) (negative staffing "
                "level); refusing to extrapolate");
        }
    }
    return res;
}

// ============================================================================
// Target × evaluator tables
// ============================================================================

/// One table row: a target level, the exact answer, and per-evaluator levels
/// with their differences from exact.
struct StaffingTableRow {
    double alpha = 0.0;
    long long s_exact = 0;
    std::vector<long long> evaluator_levels;
    std::vector<long long> differences;  ///< evaluator level − exact level
};

/**
 * @brief Solve one query per (target, evaluator) pair and difference each
 *        evaluator's level against the exact one — the staffing-comparison
 *        table layout.
 */
inline std::vector<StaffingTableRow> staffing_table(const StaffingQuery& base,
                                                    const std::vector<double>& targets,
                                                    const std::vector<Evaluator>& evaluators) {
    std::vector<StaffingTableRow> rows;
    rows.reserve(targets.size());
    for (double alpha : targets) {
        StaffingQuery q = base;
        q.alpha = alpha;
        q.evaluator = Evaluator::Exact;
        StaffingTableRow row;
        row.alpha = alpha;
        row.s_exact = min_staff(q).s_star;
        for (Evaluator ev : evaluators) {
            q.evaluator = ev;
            const long long level = min_staff(q).s_star;
            row.evaluator_levels.push_back(level);
            row.differences.push_back(level - row.s_exact);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace staffing
}  // namespace erlang_cbc

#endif  // ERLANG_CBC_STAFFING_HPP
