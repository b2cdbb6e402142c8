/**
 * @file test_approx.cpp
 * @brief Unit tests for the normal-scale closed-form engines: sub-chain
 *        primitives, inverse-blocking approximations, the non-asymptotic
 *        indicator engine, and the Wilson–Hilferty variant.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "erlang_cbc/approx.hpp"
#include "erlang_cbc/exact.hpp"

using namespace erlang_cbc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ModelParams make_params(double lambda, double mu, int s, AbandonmentSpec ab, double eps = 0.0,
                        double tau = 0.0) {
    ModelParams p;
    p.lambda = lambda;
    p.mu = mu;
    p.s = s;
    p.abandon = ab;
    p.cbc = CbcControl{eps, tau};
    return p;
}

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

// ============================================================================
// Normal-scale Poisson primitives
// ============================================================================

TEST_CASE("normal cdf surrogate tracks the exact Poisson cdf", "[approx][primitives]") {
    // The continuity-corrected conversion carries an intrinsic O(1/sqrt(R))
    // error; its measured worst case decays from ~0.021 at load 10 to ~0.002
    // at load 1000. Budgets below pin that decay with a small margin.
    const struct {
        double R;
        double budget;
    } cases[] = {{10.0, 0.021}, {50.0, 0.010}, {200.0, 0.005}, {1000.0, 0.0025}};
    for (const auto& cs : cases) {
        const double sd = std::sqrt(cs.R);
        const long long lo = static_cast<long long>(std::ceil(cs.R - 4.0 * sd));
        const long long hi = static_cast<long long>(std::floor(cs.R + 4.0 * sd));
        double worst = 0.0;
        for (long long s = std::max<long long>(0, lo); s <= hi; ++s) {
            const double err =
                std::fabs(approx::poisson_cdf_normal(static_cast<double>(s), cs.R) -
                          approx::poisson_cdf(s, cs.R));
            worst = std::max(worst, err);
        }
        INFO("R = " << cs.R << ": max |normal cdf - exact cdf| = " << worst);
        CHECK(worst <= cs.budget);
    }
}

TEST_CASE("normal pmf and hazard surrogates track their exact ratios", "[approx][primitives]") {
    for (double R : {25.0, 100.0, 400.0}) {
        const double sd = std::sqrt(R);
        for (double k : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            const long long s = static_cast<long long>(std::llround(R + k * sd));
            const double sf = static_cast<double>(s);
            INFO("R = " << R << ", s = " << s);

            // The density surrogate ignores the Poisson skew, so its relative
            // error grows from a few percent at the mode to ~1/3 two standard
            // deviations out at R = 25.
            const double rel = std::fabs(k) < 1.5 ? 0.15 : 0.40;

            const double pmf_exact = approx::poisson_pmf(s, R);
            CHECK_THAT(approx::poisson_pmf_normal(sf, R), WithinRel(pmf_exact, rel));

            // f/(1-F) and f/F against the surrogate hazards.
            const double tail = 1.0 - approx::poisson_cdf(s, R);
            if (tail > 1e-12)
                CHECK_THAT(approx::poisson_hazard_normal(sf, R),
                           WithinRel(pmf_exact / tail, rel));
            CHECK_THAT(approx::poisson_rev_hazard_normal(sf, R),
                       WithinRel(pmf_exact / approx::poisson_cdf(s, R), rel));
        }
    }
}

// ============================================================================
// Inverse-blocking approximations
// ============================================================================

TEST_CASE("inverse-blocking surrogates track the exact sub-chain values", "[approx][blocking]") {
    for (double R : {50.0, 200.0}) {
        for (double k : {-1.0, 0.0, 1.0}) {
            const int s = static_cast<int>(std::llround(R + k * std::sqrt(R)));
            INFO("R = " << R << ", s = " << s);

            // Loss sub-chain vs the Erlang-B recursion.
            const ModelParams pr = make_params(R, 1.0, s, AbandonmentSpec::reneging(1.0));
            const DerivedCoefficients dr = derive(pr);
            CHECK_THAT(approx::inv_blocking_normal(approx::SubChain::MMss, dr),
                       WithinRel(exact::erlang_b_inverse_blocking(R, s), 0.05));

            // Reneging queue sub-chain vs the series.
            CHECK_THAT(approx::inv_blocking_normal(approx::SubChain::Reneging, dr),
                       WithinRel(exact::reneging_inverse_blocking(R, 1.0, s, 1.0), 0.05));

            // Balking queue sub-chain vs the finite sum.
            const ModelParams pb = make_params(R, 1.0, s, AbandonmentSpec::balking(1.0));
            const DerivedCoefficients db = derive(pb);
            CHECK_THAT(approx::inv_blocking_normal(approx::SubChain::Balking, db),
                       WithinRel(exact::balking_inverse_blocking(R, 1.0, s, 1.0), 0.05));
        }
    }
}

// ============================================================================
// Non-asymptotic indicator engine
// ============================================================================

TEST_CASE("non-asymptotic delay probability stays within its known accuracy",
          "[approx][nonasym]") {
    // The engine's published accuracy on the lambda=50, gamma=1 reneging
    // benchmark: worst-case |exact - approx| of 0.009 without control and
    // 0.012 under the strongest control block; checked with a small margin.
    for (int s = 20; s <= 80; s += 10) {
        const ModelParams plain = make_params(50.0, 1.0, s, AbandonmentSpec::reneging(1.0));
        INFO("s = " << s << ", no control");
        CHECK_THAT(approx::indicators_nonasymptotic(plain).p_q,
                   WithinAbs(exact::indicators_exact(plain).p_q, 0.010));

        const ModelParams ctl =
            make_params(50.0, 1.0, s, AbandonmentSpec::reneging(1.0), 0.5, 0.2);
        INFO("s = " << s << ", eps=0.5 tau=0.2");
        CHECK_THAT(approx::indicators_nonasymptotic(ctl).p_q,
                   WithinAbs(exact::indicators_exact(ctl).p_q, 0.013));
    }
}

TEST_CASE("non-asymptotic engine covers all indicators coherently", "[approx][nonasym]") {
    const ModelParams p = make_params(50.0, 1.0, 50, AbandonmentSpec::reneging(1.0), 0.1, 0.05);
    const PerformanceIndicators ind = approx::indicators_nonasymptotic(p);
    const double heavy_p = 1.0 - 50.0 * 1.05 / 50.0;

    // Internal assembly identities hold regardless of approximation error.
    CHECK_THAT(ind.p_q_minus, WithinAbs(ind.p_q - ind.pi_s, 1e-12));
    CHECK_THAT(ind.p_ab, WithinAbs(ind.pi_s + heavy_p * ind.p_q_minus, 1e-12));
    CHECK_THAT(ind.lambda_eff, WithinRel(50.0 * (1.0 - 0.1 * ind.p_q), 1e-12));
    CHECK_THAT(ind.w_q, WithinRel(ind.l_q / ind.lambda_eff, 1e-12));
    CHECK_THAT(ind.throughput, WithinRel(50.0 * (1.0 - ind.p_ab), 1e-12));

    // And the values are near the exact ones on this comfortable instance.
    const PerformanceIndicators ex = exact::indicators_exact(p);
    CHECK_THAT(ind.p_q, WithinAbs(ex.p_q, 0.01));
    CHECK_THAT(ind.p_ab, WithinAbs(ex.p_ab, 0.01));
    CHECK_THAT(ind.l_q, WithinRel(ex.l_q, 0.05));
}

TEST_CASE("non-asymptotic probabilities remain in range on stressed configurations",
          "[approx][nonasym]") {
    // Far outside the many-server regime the normal surrogates can stray;
    // the engine must clamp and warn rather than emit probabilities > 1.
    for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
        for (int s : {1, 2, 4, 8}) {
            for (double rate : {0.2, 1.0, 5.0}) {
                for (AbandonKind kind : {AbandonKind::Reneging, AbandonKind::Balking}) {
                    const AbandonmentSpec ab{kind, rate};
                    for (CbcControl cbc :
                         {CbcControl{0.0, 0.0}, CbcControl{0.9, 0.0}, CbcControl{0.0, 1.0},
                          CbcControl{0.3, -0.3}}) {
                        const ModelParams p = make_params(lambda, 1.0, s, ab, cbc.eps, cbc.tau);
                        const PerformanceIndicators ind = approx::indicators_nonasymptotic(p);
                        INFO("lambda=" << lambda << " s=" << s << " rate=" << rate
                                       << " kind=" << to_string(kind) << " eps=" << cbc.eps
                                       << " tau=" << cbc.tau);
                        CHECK(in_unit_interval(ind.pi_s));
                        CHECK(in_unit_interval(ind.p_q));
                        CHECK(in_unit_interval(ind.p_q_minus));
                        CHECK(in_unit_interval(ind.p_ab));
                        CHECK(ind.l_q >= 0.0);
                        CHECK(ind.w_q >= 0.0);
                        CHECK(std::isfinite(ind.l_q));
                    }
                }
            }
        }
    }
}

TEST_CASE("real-staff evaluation matches integer evaluation at integer levels",
          "[approx][nonasym]") {
    const ModelParams p = make_params(50.0, 1.0, 55, AbandonmentSpec::reneging(2.0), 0.1, 0.05);
    const PerformanceIndicators a = approx::indicators_nonasymptotic(p);
    const PerformanceIndicators b =
        approx::indicators_nonasymptotic_real(50.0, 1.0, 55.0, p.abandon, p.cbc);
    CHECK(a.p_q == b.p_q);
    CHECK(a.p_ab == b.p_ab);
    CHECK(a.l_q == b.l_q);

    // Fractional staff interpolates monotonically between the neighbors.
    const double mid =
        approx::indicators_nonasymptotic_real(50.0, 1.0, 55.5, p.abandon, p.cbc).p_q;
    const double hi =
        approx::indicators_nonasymptotic_real(50.0, 1.0, 56.0, p.abandon, p.cbc).p_q;
    CHECK(mid < a.p_q);
    CHECK(hi < mid);
}

TEST_CASE("degenerate full thinning is rejected by the closed-form engines", "[approx]") {
    // eps = 1 removes the queue sub-chain scale (R' = 0); the exact engine
    // handles the reduction, the normal-scale engines cannot represent it.
    const ModelParams p = make_params(10.0, 1.0, 5, AbandonmentSpec::reneging(1.0), 1.0, 0.0);
    CHECK_THROWS_AS(approx::indicators_nonasymptotic(p), std::domain_error);
    CHECK_THROWS_AS(approx::indicators_wilson_hilferty(p), std::domain_error);
}

// ============================================================================
// Wilson–Hilferty engine
// ============================================================================

TEST_CASE("Wilson-Hilferty engine approximates exact indicators at small loads",
          "[approx][wh]") {
    for (double R : {2.0, 5.0, 10.0}) {
        for (double k : {-1.0, 0.0, 1.0}) {
            const int s = std::max(1, static_cast<int>(std::llround(R + k * std::sqrt(R))));
            for (AbandonmentSpec ab :
                 {AbandonmentSpec::reneging(2.0), AbandonmentSpec::balking(1.0)}) {
                const ModelParams p = make_params(R, 1.0, s, ab);
                const double wh = approx::indicators_wilson_hilferty(p).p_q;
                const double ex = exact::indicators_exact(p).p_q;
                INFO("R=" << R << " s=" << s << " kind=" << to_string(ab.kind));
                CHECK_THAT(wh, WithinAbs(ex, 0.02));
                CHECK(in_unit_interval(wh));
            }
        }
    }
}

// ============================================================================
// Guarded arithmetic helpers
// ============================================================================

TEST_CASE("guarded ratio handles vanishing denominators", "[approx][detail]") {
    CHECK(approx::detail::guarded_ratio(2.0, 4.0) == 0.5);
    CHECK(approx::detail::guarded_ratio(0.0, 0.0) == 0.0);
    CHECK(approx::detail::guarded_ratio(1.0, 0.0) ==
          std::numeric_limits<double>::infinity());
}
