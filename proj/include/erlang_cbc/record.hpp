#ifndef ERLANG_CBC_RECORD_HPP
#define ERLANG_CBC_RECORD_HPP

/**
 * @file record.hpp
 * @brief Flat, self-describing result records with CSV and JSON-lines
 *        serialization — the single output schema every front-end command
 *        emits.
 *
 * One record = one evaluated configuration under one method. Every record
 * echoes all of its inputs so a row can be re-run standalone, carries the
 * full indicator set, and has optional blocks (regime label, simulation
 * confidence half-widths, staffing solution) that serialize as empty CSV
 * cells / JSON nulls when absent. CSV numbers use %.17g and JSON numbers the
 * shortest exact round-trip form, so parsing either stream recovers
 * bit-identical doubles.
 */

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <json.hpp>

#include "erlang_cbc/asymptotic.hpp"
#include "erlang_cbc/indicators.hpp"
#include "erlang_cbc/model.hpp"
#include "erlang_cbc/simulate.hpp"
#include "erlang_cbc/staffing.hpp"

namespace erlang_cbc {
namespace record {

// ============================================================================
// Schema
// ============================================================================

/// One output row. Doubles default to NaN = "absent"; serialize as empty CSV
/// cell / JSON null. `servers` and `s_from_root` use -1 as the absent marker.
struct OutputRecord {
    static constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();

    // --- input echo ---
    double lambda = kAbsent;
    double mu = kAbsent;
    long long servers = -1;
    std::string kind;  ///< "reneging" | "balking"
    double theta = kAbsent;
    double eps = kAbsent;
    double tau = kAbsent;
    std::string method;  ///< "exact" | "nonasym" | "asym" | "sqrt" | "wh" | "sim" | "staff"

    // --- indicators ---
    double pi_s = kAbsent;
    double p_block = kAbsent;
    double pi_s2 = kAbsent;
    double p_q = kAbsent;
    double p_q_minus = kAbsent;
    double p_ab = kAbsent;
    double l_q = kAbsent;
    double w_q = kAbsent;
    double lambda_eff = kAbsent;
    double throughput = kAbsent;

    // --- optional: asymptotic regime ---
    std::string regime;

    // --- optional: simulation CI half-widths and number-in-system ---
    double p_q_hw = kAbsent;
    double p_ab_hw = kAbsent;
    double l_q_hw = kAbsent;
    double w_q_hw = kAbsent;
    double l_sys = kAbsent;
    double l_sys_hw = kAbsent;

    // --- optional: staffing solution ---
    double alpha = kAbsent;
    std::string target_metric;  ///< "p_q" | "p_ab"
    double c_alpha = kAbsent;
    long long s_from_root = -1;

    std::string warnings;  ///< ';'-joined engine warnings, possibly empty
};

// ============================================================================
// Serialization
// ============================================================================

namespace detail {

inline std::string fmt(double v) {
    if (std::isnan(v)) return std::string();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

inline std::string fmt(long long v) { return v < 0 ? std::string() : std::to_string(v); }

}  // namespace detail

/// Column names, in emission order.
inline const char* csv_header() {
    return "lambda,mu,servers,kind,theta,eps,tau,method,"
           "pi_s,p_block,pi_s2,p_q,p_q_minus,p_ab,l_q,w_q,lambda_eff,throughput,"
           "regime,p_q_hw,p_ab_hw,l_q_hw,w_q_hw,l_sys,l_sys_hw,"
           "alpha,target_metric,c_alpha,s_from_root,warnings";
}

inline std::string to_csv_row(const OutputRecord& r) {
    using detail::fmt;
    std::string row;
    row.reserve(360);
    auto add = [&](const std::string& cell) {
        if (!row.empty()) row += ',';
        row += cell;
    };
    add(fmt(r.lambda));
    add(fmt(r.mu));
    add(fmt(r.servers));
    add(r.kind);
    add(fmt(r.theta));
    add(fmt(r.eps));
    add(fmt(r.tau));
    add(r.method);
    add(fmt(r.pi_s));
    add(fmt(r.p_block));
    add(fmt(r.pi_s2));
    add(fmt(r.p_q));
    add(fmt(r.p_q_minus));
    add(fmt(r.p_ab));
    add(fmt(r.l_q));
    add(fmt(r.w_q));
    add(fmt(r.lambda_eff));
    add(fmt(r.throughput));
    add(r.regime);
    add(fmt(r.p_q_hw));
    add(fmt(r.p_ab_hw));
    add(fmt(r.l_q_hw));
    add(fmt(r.w_q_hw));
    add(fmt(r.l_sys));
    add(fmt(r.l_sys_hw));
    add(fmt(r.alpha));
    add(r.target_metric);
    add(fmt(r.c_alpha));
    add(fmt(r.s_from_root));
    add(r.warnings);
    return row;
}

/// One JSON object per record (JSON-lines style); absent fields become null.
inline std::string to_json_line(const OutputRecord& r) {
    nlohmann::ordered_json j;
    auto num = [&](const char* key, double v) {
        if (std::isnan(v))
            j[key] = nullptr;
        else
            j[key] = v;
    };
    auto count = [&](const char* key, long long v) {
        if (v < 0)
            j[key] = nullptr;
        else
            j[key] = v;
    };
    auto str = [&](const char* key, const std::string& v) {
        if (v.empty())
            j[key] = nullptr;
        else
            j[key] = v;
    };
    num("lambda", r.lambda);
    num("mu", r.mu);
    count("servers", r.servers);
    str("kind", r.kind);
    num("theta", r.theta);
    num("eps", r.eps);
    num("tau", r.tau);
    str("method", r.method);
    num("pi_s", r.pi_s);
    num("p_block", r.p_block);
    num("pi_s2", r.pi_s2);
    num("p_q", r.p_q);
    num("p_q_minus", r.p_q_minus);
    num("p_ab", r.p_ab);
    num("l_q", r.l_q);
    num("w_q", r.w_q);
    num("lambda_eff", r.lambda_eff);
    num("throughput", r.throughput);
    str("regime", r.regime);
    num("p_q_hw", r.p_q_hw);
    num("p_ab_hw", r.p_ab_hw);
    num("l_q_hw", r.l_q_hw);
    num("w_q_hw", r.w_q_hw);
    num("l_sys", r.l_sys);
    num("l_sys_hw", r.l_sys_hw);
    num("alpha", r.alpha);
    str("target_metric", r.target_metric);
    num("c_alpha", r.c_alpha);
    count("s_from_root", r.s_from_root);
    str("warnings", r.warnings);
    return j.dump();
}

// ============================================================================
// Builders
// ============================================================================

namespace detail {

inline OutputRecord base_record(const ModelParams& p, const std::string& method) {
    OutputRecord r;
    r.lambda = p.lambda;
    r.mu = p.mu;
    r.servers = p.s;
    r.kind = to_string(p.abandon.kind);
    r.theta = p.abandon.rate;
    r.eps = p.cbc.eps;
    r.tau = p.cbc.tau;
    r.method = method;
    return r;
}

inline std::string join_warnings(const std::vector<std::string>& w) {
    std::string out;
    for (const std::string& s : w) {
        if (!out.empty()) out += ';';
        out += s;
    }
    return out;
}

}  // namespace detail

/// Record from a full analytic indicator set.
inline OutputRecord from_indicators(const ModelParams& p, const std::string& method,
                                    const PerformanceIndicators& ind) {
    OutputRecord r = detail::base_record(p, method);
    r.pi_s = ind.pi_s;
    r.p_block = ind.p_block;
    r.pi_s2 = ind.pi_s2;
    r.p_q = ind.p_q;
    r.p_q_minus = ind.p_q_minus;
    r.p_ab = ind.p_ab;
    r.l_q = ind.l_q;
    r.w_q = ind.w_q;
    r.lambda_eff = ind.lambda_eff;
    r.throughput = ind.throughput;
    r.warnings = detail::join_warnings(ind.warnings);
    return r;
}

/// Record from the asymptotic engine (regime + limiting P_Q, P_ab only).
inline OutputRecord from_asymptotic(const ModelParams& p,
                                    const asymptotic::AsymptoticIndicators& a) {
    OutputRecord r = detail::base_record(p, "asym");
    r.regime = asymptotic::to_string(a.regime);
    r.p_q = a.p_q;
    r.p_ab = a.p_ab;
    return r;
}

/// Record from a simulation estimate (means + CI half-widths).
inline OutputRecord from_simulation(const ModelParams& p, const simulate::SimEstimate& est) {
    OutputRecord r = detail::base_record(p, "sim");
    r.p_q = est.p_q.mean;
    r.p_q_hw = est.p_q.half_width;
    r.p_ab = est.p_ab.mean;
    r.p_ab_hw = est.p_ab.half_width;
    r.l_q = est.l_q.mean;
    r.l_q_hw = est.l_q.half_width;
    r.w_q = est.w_q.mean;
    r.w_q_hw = est.w_q.half_width;
    r.l_sys = est.l_sys.mean;
    r.l_sys_hw = est.l_sys.half_width;
    return r;
}

/// Record from a staffing solution: the input echo carries the solved s*.
inline OutputRecord from_staffing(const staffing::StaffingQuery& q,
                                  const staffing::StaffingResult& res) {
    ModelParams p;
    p.lambda = q.lambda;
    p.mu = q.mu;
    p.s = res.s_star;
    p.abandon = q.abandon;
    p.cbc = q.cbc;
    OutputRecord r = from_indicators(p, "staff", res.achieved);
    r.alpha = q.alpha;
    r.target_metric = staffing::to_string(q.metric);
    if (res.has_continuous) {
        r.c_alpha = res.c_alpha;
        r.s_from_root = res.s_from_root;
    }
    return r;
}

}  // namespace record
}  // namespace erlang_cbc

#endif  // ERLANG_CBC_RECORD_HPP
