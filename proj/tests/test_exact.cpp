/**
 * @file test_exact.cpp
 * @brief Unit tests for the exact steady-state engines: Erlang-B recursion,
 *        queue sub-chain series/sum/integral, the full-chain oracle, and the
 *        model reductions.
 *
 * Reference values were computed independently with 40-digit arbitrary-
 * precision arithmetic and frozen here to 20 significant digits.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "erlang_cbc/exact.hpp"
#include "erlang_cbc/poisson.hpp"

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

}  // namespace

// ============================================================================
// Erlang-B recursion
// ============================================================================

TEST_CASE("Erlang-B recursion matches reference blocking values", "[exact][erlang-b]") {
    CHECK_THAT(exact::erlang_b(50.0, 50), WithinRel(0.10478745550355220627, 1e-13));
    CHECK_THAT(exact::erlang_b(1.0, 5), WithinRel(0.0030674846625766871166, 1e-13));
    CHECK_THAT(exact::erlang_b(120.0, 100), WithinRel(0.1962699894551136299, 1e-13));
    CHECK_THAT(exact::erlang_b(50.0, 20), WithinRel(0.61209465128044430833, 1e-13));
    CHECK_THAT(exact::erlang_b(50.0, 25), WithinRel(0.51751602445730053022, 1e-13));

    // s = 0 blocks everything; the inverse is always >= 1.
    CHECK(exact::erlang_b(3.0, 0) == 1.0);
    CHECK(exact::erlang_b_inverse_blocking(3.0, 7) >= 1.0);

    // Far above the load the blocking underflows cleanly to 0 (inverse inf).
    CHECK(exact::erlang_b_inverse_blocking(1.0, 400) ==
          std::numeric_limits<double>::infinity());

    CHECK_THROWS_AS(exact::erlang_b_inverse_blocking(0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(exact::erlang_b_inverse_blocking(5.0, -1), std::invalid_argument);
}

// ============================================================================
// Queue sub-chain: series, finite sum, integral
// ============================================================================

TEST_CASE("reneging series matches reference values", "[exact][reneging]") {
    // sum over k of prod_{i=1..k} lambda_q/(s*mu_q + i*gamma)
    CHECK_THAT(exact::reneging_inverse_blocking(50.0, 1.0, 50, 1.0),
               WithinRel(9.2109766038323759299, 1e-12));
    CHECK_THAT(exact::reneging_inverse_blocking(1.2, 0.8, 1, 2.0),
               WithinRel(1.5575158320487831505, 1e-12));
    CHECK_THAT(exact::reneging_inverse_blocking(40.0, 1.1, 50, 0.5),
               WithinRel(3.4085747267936879038, 1e-12));

    // No arrivals above the boundary: the sub-chain is the single state s.
    CHECK(exact::reneging_inverse_blocking(0.0, 1.0, 5, 1.0) == 1.0);
    CHECK_THROWS_AS(exact::reneging_inverse_blocking(1.0, 1.0, 5, 0.0), std::invalid_argument);
}

TEST_CASE("integral representation agrees with the series", "[exact][reneging]") {
    CHECK_THAT(exact::reneging_inverse_blocking_integral(50.0, 1.0, 50, 1.0),
               WithinRel(9.2109766038323759299, 1e-10));
    // Exponent s*mu_q/gamma < 1: the endpoint singularity is substituted away.
    CHECK_THAT(exact::reneging_inverse_blocking_integral(1.2, 0.8, 1, 2.0),
               WithinRel(1.5575158320487831505, 1e-10));

    // Series vs quadrature across a parameter sweep, including more sub-unit
    // exponents. Two entirely different algorithms, one truth.
    const struct {
        double lambda_q, mu_q;
        long long s;
        double gamma;
    } cases[] = {
        {10.0, 1.0, 12, 0.5}, {30.0, 1.2, 20, 2.0},  {5.0, 0.9, 3, 7.0},
        {0.7, 1.0, 1, 4.0},   {80.0, 1.0, 75, 1.5},  {2.5, 0.6, 2, 5.0},
        {15.0, 2.0, 4, 30.0}, {100.0, 1.0, 90, 0.8},
    };
    for (const auto& cs : cases) {
        INFO("lambda_q=" << cs.lambda_q << " mu_q=" << cs.mu_q << " s=" << cs.s
                         << " gamma=" << cs.gamma);
        const double series =
            exact::reneging_inverse_blocking(cs.lambda_q, cs.mu_q, cs.s, cs.gamma);
        const double integral =
            exact::reneging_inverse_blocking_integral(cs.lambda_q, cs.mu_q, cs.s, cs.gamma);
        CHECK_THAT(integral, WithinRel(series, 1e-8));
    }

    CHECK_THROWS_AS(exact::reneging_inverse_blocking_integral(1.0, 1.0, 0, 1.0),
                    std::domain_error);
}

TEST_CASE("balking finite sum matches the reference value", "[exact][balking]") {
    // lambda_q=45, s*mu_q=52, delta=0.7 (s=52, mu_q=1)
    CHECK_THAT(exact::balking_inverse_blocking(45.0, 1.0, 52, 0.7),
               WithinRel(5.463897160436240837, 1e-13));

    // Tiny chain computable by hand: lambda_q=2, s*mu_q=2, delta=1 gives
    // 1 + 2/2 + (2*1)/(2*2) = 2.5.
    CHECK_THAT(exact::balking_inverse_blocking(2.0, 2.0, 1, 1.0), WithinAbs(2.5, 1e-15));

    CHECK(exact::balking_inverse_blocking(0.0, 1.0, 5, 1.0) == 1.0);
    CHECK_THROWS_AS(exact::balking_inverse_blocking(1.0, 1.0, 5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(exact::balking_inverse_blocking(1.0, 0.0, 0, 1.0), std::domain_error);
}

// ============================================================================
// Full-chain oracle
// ============================================================================

TEST_CASE("full-chain oracle matches a hand-solved balking chain", "[exact][oracle]") {
    // lambda=3, mu=3, s=1, delta=2, no control. Births: 3,3,1,0; deaths at
    // 1,2,3 are all 3. Weights (1,1,1,1/3) normalize to (.3,.3,.3,.1).
    const ModelParams p = make_params(3.0, 3.0, 1, AbandonmentSpec::balking(2.0));
    const exact::StationaryDistribution dist = exact::full_chain_distribution(p);

    REQUIRE(dist.probs.size() == 4);
    CHECK(dist.truncation_k == 3);
    CHECK(dist.tail_mass_bound == 0.0);  // balking chains are finite, no truncation
    CHECK_THAT(dist.probs[0], WithinRel(0.3, 1e-14));
    CHECK_THAT(dist.probs[1], WithinRel(0.3, 1e-14));
    CHECK_THAT(dist.probs[2], WithinRel(0.3, 1e-14));
    CHECK_THAT(dist.probs[3], WithinRel(0.1, 1e-14));

    const PerformanceIndicators ind = exact::indicators_from_distribution(p, dist);
    CHECK_THAT(ind.pi_s, WithinRel(0.3, 1e-14));
    CHECK_THAT(ind.p_q, WithinRel(0.7, 1e-14));
    CHECK_THAT(ind.l_q, WithinRel(0.5, 1e-14));   // 1*.3 + 2*.1
    CHECK_THAT(ind.p_ab, WithinRel(0.3, 1e-14));  // (.3*2 + .1*3)/3
}

TEST_CASE("balking mean queue length uses direct summation, not the closed form",
          "[exact][balking]") {
    // Same chain as above. The closed-form queue length charges balking
    // outflow delta*(k-s) at every occupied state, which overstates the
    // outflow at the truncated top state whenever lambda_q/delta is not an
    // integer: it would yield (lambda/delta)*pi_s = 0.45 here, but the true
    // mean is 0.5. The exact engine must return the direct sum.
    const ModelParams p = make_params(3.0, 3.0, 1, AbandonmentSpec::balking(2.0));
    const PerformanceIndicators ind = exact::indicators_exact(p);

    CHECK_THAT(ind.l_q, WithinRel(0.5, 1e-12));

    const double heavy_p = 1.0 - 1.0 * 3.0 / 3.0;  // p = 0 for this instance
    const double closed_form =
        (p.lambda / p.abandon.rate) * ((1.0 - 0.0) * ind.pi_s + (heavy_p - 0.0) * ind.p_q_minus);
    CHECK_THAT(closed_form, WithinRel(0.45, 1e-12));
    CHECK(std::fabs(closed_form - ind.l_q) > 0.01);
}

TEST_CASE("exact indicators agree with the brute-force oracle", "[exact][oracle]") {
    const std::vector<ModelParams> cases = {
        make_params(50.0, 1.0, 50, AbandonmentSpec::reneging(1.0)),
        make_params(50.0, 1.0, 40, AbandonmentSpec::reneging(10.0), 0.2, 0.2),
        make_params(50.0, 1.0, 60, AbandonmentSpec::reneging(0.1), 0.0, 0.5),
        make_params(8.0, 0.5, 10, AbandonmentSpec::reneging(2.0), 0.5, 0.2),
        make_params(30.0, 1.0, 25, AbandonmentSpec::balking(0.5), 0.1, 0.1),
        make_params(12.0, 2.0, 4, AbandonmentSpec::balking(3.0), 0.0, 0.0),
        make_params(75.0, 1.5, 45, AbandonmentSpec::balking(1.0), 0.3, -0.2),
        make_params(5.0, 1.0, 2, AbandonmentSpec::reneging(0.7), 0.9, 0.1),
    };
    for (const ModelParams& p : cases) {
        INFO("lambda=" << p.lambda << " mu=" << p.mu << " s=" << p.s
                       << " kind=" << to_string(p.abandon.kind) << " rate=" << p.abandon.rate
                       << " eps=" << p.cbc.eps << " tau=" << p.cbc.tau);
        const PerformanceIndicators fast = exact::indicators_exact(p);
        const PerformanceIndicators oracle =
            exact::indicators_from_distribution(p, exact::full_chain_distribution(p, 1e-13));

        CHECK_THAT(fast.pi_s, WithinAbs(oracle.pi_s, 1e-10));
        CHECK_THAT(fast.p_block, WithinAbs(oracle.p_block, 1e-10));
        CHECK_THAT(fast.pi_s2, WithinAbs(oracle.pi_s2, 1e-10));
        CHECK_THAT(fast.p_q, WithinAbs(oracle.p_q, 1e-10));
        CHECK_THAT(fast.p_q_minus, WithinAbs(oracle.p_q_minus, 1e-10));
        CHECK_THAT(fast.p_ab, WithinAbs(oracle.p_ab, 1e-10));
        CHECK_THAT(fast.l_q, WithinRel(oracle.l_q, 1e-9));
        CHECK_THAT(fast.w_q, WithinRel(oracle.w_q, 1e-9));
        CHECK_THAT(fast.lambda_eff, WithinRel(oracle.lambda_eff, 1e-12));
        CHECK_THAT(fast.throughput, WithinRel(oracle.throughput, 1e-10));
    }
}

TEST_CASE("full-chain oracle reports truncation quality and honors its caps", "[exact][oracle]") {
    const ModelParams p = make_params(50.0, 1.0, 50, AbandonmentSpec::reneging(1.0));
    const exact::StationaryDistribution dist = exact::full_chain_distribution(p, 1e-12);
    CHECK(dist.truncation_k > p.s);
    CHECK(dist.tail_mass_bound <= 1e-12);
    double total = 0.0;
    for (double v : dist.probs) total += v;
    CHECK_THAT(total, WithinAbs(1.0, 1e-12));

    CHECK_THROWS_AS(exact::full_chain_distribution(p, 1e-12, /*state_cap=*/10),
                    std::runtime_error);
}

// ============================================================================
// Reductions to classical models
// ============================================================================

TEST_CASE("full thinning reduces the model to pure Erlang-B loss", "[exact][reduction]") {
    for (int s : {5, 20, 50}) {
        for (double R : {10.0, 50.0}) {
            const double B = exact::erlang_b(R, s);
            for (AbandonmentSpec ab :
                 {AbandonmentSpec::reneging(1.0), AbandonmentSpec::balking(1.0)}) {
                const ModelParams p = make_params(R, 1.0, s, ab, /*eps=*/1.0, /*tau=*/0.0);
                const PerformanceIndicators ind = exact::indicators_exact(p);
                INFO("R=" << R << " s=" << s << " kind=" << to_string(ab.kind));
                CHECK_THAT(ind.p_q, WithinAbs(B, 1e-10));
                CHECK_THAT(ind.pi_s, WithinAbs(B, 1e-10));
                CHECK_THAT(ind.p_ab, WithinAbs(B, 1e-10));
                CHECK_THAT(ind.l_q, WithinAbs(0.0, 1e-12));
                CHECK_THAT(ind.throughput, WithinRel(R * (1.0 - B), 1e-10));
            }
        }
    }
}

TEST_CASE("uncontrolled reneging at gamma = mu is a Poisson system", "[exact][reduction]") {
    // With gamma = mu and no control the death rate is k*mu at every state,
    // so the stationary law is exactly Poisson(R).
    const double R = 50.0;
    for (int s : {40, 50, 60}) {
        const ModelParams p = make_params(R, 1.0, s, AbandonmentSpec::reneging(1.0));
        const PerformanceIndicators ind = exact::indicators_exact(p);
        INFO("s = " << s);
        CHECK_THAT(ind.p_q, WithinRel(approx::poisson_tail(s, R), 1e-10));
        CHECK_THAT(ind.pi_s, WithinRel(approx::poisson_pmf(s, R), 1e-10));

        double l_q = 0.0;  // sum (k-s) pmf(k;R) over the far tail
        for (long long k = s + 1; k <= s + 400; ++k)
            l_q += static_cast<double>(k - s) * approx::poisson_pmf(k, R);
        CHECK_THAT(ind.l_q, WithinRel(l_q, 1e-8));
    }
}

TEST_CASE("Erlang-C delay emerges in the vanishing-abandonment limit", "[exact][reduction]") {
    CHECK_THAT(exact::erlang_c_delay(exact::erlang_b(50.0, 55), 50.0 / 55.0),
               WithinRel(0.38454731793292854422, 1e-13));

    const struct {
        double R;
        int s;
    } cases[] = {{50.0, 55}, {20.0, 25}, {5.0, 8}};
    for (const auto& cs : cases) {
        const double c_delay = exact::erlang_c_delay(exact::erlang_b(cs.R, cs.s),
                                                     cs.R / static_cast<double>(cs.s));
        const ModelParams p =
            make_params(cs.R, 1.0, cs.s, AbandonmentSpec::reneging(1e-8));
        INFO("R=" << cs.R << " s=" << cs.s);
        CHECK_THAT(exact::indicators_exact(p).p_q, WithinAbs(c_delay, 1e-4));
    }
}

TEST_CASE("heavy-traffic limits approximate deeply overloaded systems", "[exact][heavy]") {
    const ModelParams p = make_params(500.0, 1.0, 50, AbandonmentSpec::reneging(1.0));
    const PerformanceIndicators ht = exact::heavy_traffic(p);
    const PerformanceIndicators ex = exact::indicators_exact(p);

    CHECK(ht.p_q == 1.0);
    CHECK_THAT(ht.p_ab, WithinAbs(0.9, 1e-15));  // p = 1 - 50/500
    CHECK_THAT(ht.l_q, WithinAbs(450.0, 1e-12));
    CHECK(ht.warnings.empty());

    CHECK(ex.p_q > 0.999);
    CHECK_THAT(ex.p_ab, WithinAbs(ht.p_ab, 1e-3));
    CHECK_THAT(ex.l_q, WithinRel(ht.l_q, 1e-2));

    // Outside its regime the limit still answers but flags itself.
    const ModelParams light = make_params(10.0, 1.0, 50, AbandonmentSpec::reneging(1.0));
    const PerformanceIndicators warned = exact::heavy_traffic(light);
    REQUIRE_FALSE(warned.warnings.empty());
}

TEST_CASE("trade-off direction follows the sign of p - P_block", "[exact][tradeoff]") {
    // Lightly staffed relative to the limit: p = -0.1 < B(55,50) -> TradeOff
    // (stronger abandonment lowers delay but raises abandonment).
    const ModelParams light = make_params(50.0, 1.0, 55, AbandonmentSpec::reneging(1.0));
    CHECK(exact::tradeoff_direction(light) == exact::TradeoffDirection::TradeOff);

    // Deep overload with slowed congested service: p = 0.7 > B(25,50) ~ 0.52
    // -> WinWin (both metrics fall together).
    const ModelParams heavy =
        make_params(50.0, 1.0, 25, AbandonmentSpec::reneging(1.0), 0.5, -0.4);
    CHECK(exact::tradeoff_direction(heavy) == exact::TradeoffDirection::WinWin);

    // Confirm both empirically with a rate ladder.
    auto p_ab_at = [](ModelParams p, double rate) {
        p.abandon.rate = rate;
        return exact::indicators_exact(p).p_ab;
    };
    CHECK(p_ab_at(light, 2.0) > p_ab_at(light, 1.0));   // trade-off: P_ab rises
    CHECK(p_ab_at(heavy, 2.0) < p_ab_at(heavy, 1.0));   // win-win: P_ab falls

    CHECK(std::string(to_string(exact::TradeoffDirection::TradeOff)) == "trade-off");
    CHECK(std::string(to_string(exact::TradeoffDirection::WinWin)) == "win-win");
}
