/**
 * @file test_model.cpp
 * @brief Unit tests for parameter types, validation, and derived coefficients.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "erlang_cbc/model.hpp"

using namespace erlang_cbc;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ModelParams base_params() {
    ModelParams p;
    p.lambda = 50.0;
    p.mu = 1.0;
    p.s = 55;
    p.abandon = AbandonmentSpec::reneging(2.0);
    p.cbc = CbcControl{0.1, 0.05};
    return p;
}

}  // namespace

// ============================================================================
// Validation
// ============================================================================

TEST_CASE("validate accepts in-range parameters", "[model]") {
    CHECK(validate(base_params()).ok());

    ModelParams corner = base_params();
    corner.cbc = CbcControl{1.0, 1.0};  // both proportions at their upper bound
    CHECK(validate(corner).ok());

    corner.cbc = CbcControl{0.5, -0.5};  // eps + tau == 0 is allowed
    CHECK(validate(corner).ok());
}

TEST_CASE("validate reports each violated constraint", "[model]") {
    auto expect_violation = [](ModelParams p, const std::string& fragment) {
        const ValidationResult r = validate(p);
        INFO("expected violation mentioning: " << fragment);
        CHECK_FALSE(r.ok());
        CHECK_THAT(r.message(), ContainsSubstring(fragment));
    };

    ModelParams p = base_params();

    p.lambda = 0.0;
    expect_violation(p, "lambda");
    p.lambda = -3.0;
    expect_violation(p, "lambda");
    p.lambda = std::numeric_limits<double>::quiet_NaN();
    expect_violation(p, "lambda");

    p = base_params();
    p.mu = 0.0;
    expect_violation(p, "mu");

    p = base_params();
    p.s = -1;
    expect_violation(p, "s must");

    p = base_params();
    p.abandon.rate = 0.0;
    expect_violation(p, "abandonment rate");

    p = base_params();
    p.cbc.eps = -0.01;
    expect_violation(p, "eps");
    p.cbc.eps = 1.01;
    expect_violation(p, "eps");

    p = base_params();
    p.cbc.tau = -1.0;
    expect_violation(p, "tau");
    p.cbc.tau = 1.5;
    expect_violation(p, "tau");

    // The coupled constraint: slowing service without thinning arrivals would
    // raise the congested load above the nominal one.
    p = base_params();
    p.cbc = CbcControl{0.0, -0.2};
    expect_violation(p, "eps + tau");
}

TEST_CASE("require_valid throws invalid_argument listing the violations", "[model]") {
    ModelParams p = base_params();
    CHECK_NOTHROW(require_valid(p));

    p.cbc = CbcControl{0.1, -0.3};
    CHECK_THROWS_MATCHES(require_valid(p), std::invalid_argument,
                         Catch::Matchers::MessageMatches(ContainsSubstring("eps + tau")));
}

TEST_CASE("congested rates apply the control proportions", "[model]") {
    ModelParams p = base_params();
    p.cbc = CbcControl{0.2, 0.5};
    CHECK(p.lambda_q() == 0.8 * 50.0);
    CHECK(p.mu_q() == 1.5 * 1.0);

    p.cbc = CbcControl{0.0, 0.0};
    CHECK(p.lambda_q() == p.lambda);
    CHECK(p.mu_q() == p.mu);
}

// ============================================================================
// Derived coefficients
// ============================================================================

TEST_CASE("derive produces the documented coefficients for a reneging instance", "[model]") {
    const DerivedCoefficients d = derive(base_params());
    // lambda=50, mu=1, s=55, gamma=2, eps=0.1, tau=0.05
    // => lambda_Q = 45, mu_Q = 1.05

    CHECK_THAT(d.R, WithinAbs(50.0, 1e-14));
    CHECK_THAT(d.R_q, WithinRel(45.0 / 1.05, 1e-14));
    CHECK_THAT(d.p, WithinAbs(1.0 - 55.0 * 1.05 / 50.0, 1e-14));  // -0.155
    CHECK_THAT(d.a, WithinAbs(0.1, 1e-14));
    CHECK_THAT(d.c, WithinRel(5.0 / std::sqrt(50.0), 1e-14));
    CHECK_THAT(d.a_q, WithinRel((55.0 - 45.0 / 1.05) / 50.0, 1e-14));
    CHECK_THAT(d.delta_cc, WithinRel(0.5 / std::sqrt(50.0), 1e-14));

    // Loss sub-chain: the nominal load and integer staff level.
    CHECK(d.sub1.load == 50.0);
    CHECK(d.sub1.staff == 55.0);
    CHECK_THAT(d.sub1.sqrt_coef, WithinRel(d.c, 1e-14));
    CHECK_THAT(d.sub1.continuity, WithinRel(d.delta_cc, 1e-14));

    // Reneging queue sub-chain: load lambda_Q/gamma, staff s*mu_Q/gamma.
    CHECK_THAT(d.sub2.load, WithinRel(45.0 / 2.0, 1e-14));
    CHECK_THAT(d.sub2.staff, WithinRel(55.0 * 1.05 / 2.0, 1e-14));
    CHECK_THAT(d.sub2.sqrt_coef,
               WithinRel((28.875 - 22.5) / std::sqrt(22.5), 1e-14));
    CHECK_THAT(d.sub2.continuity, WithinRel(0.5 / std::sqrt(22.5), 1e-14));
}

TEST_CASE("derive transposes the queue sub-chain scale under balking", "[model]") {
    ModelParams p = base_params();
    p.abandon = AbandonmentSpec::balking(0.7);
    const DerivedCoefficients d = derive(p);

    // Balking swaps the roles: load s*mu_Q/delta, staff lambda_Q/delta.
    CHECK_THAT(d.sub2.load, WithinRel(55.0 * 1.05 / 0.7, 1e-14));
    CHECK_THAT(d.sub2.staff, WithinRel(45.0 / 0.7, 1e-14));

    // The first sub-chain is untouched by the abandonment mechanism.
    const DerivedCoefficients dr = derive(base_params());
    CHECK(d.sub1.load == dr.sub1.load);
    CHECK(d.sub1.staff == dr.sub1.staff);
}

TEST_CASE("derive rejects degenerate sub-chain scales", "[model]") {
    ModelParams p = base_params();
    p.cbc = CbcControl{1.0, 0.0};  // full thinning: queue sub-chain load R' = 0
    CHECK_THROWS_AS(derive(p), std::domain_error);

    // Balking with zero staff has no service above the boundary (R'' = 0).
    CHECK_THROWS_AS(derive_real(50.0, 1.0, 0.0, AbandonmentSpec::balking(0.5), CbcControl{}),
                    std::domain_error);
}

TEST_CASE("derived cross-relations hold", "[model]") {
    const struct {
        double lambda, mu;
        int s;
        double eps, tau;
    } cases[] = {
        {50.0, 1.0, 55, 0.1, 0.05}, {20.0, 2.0, 8, 0.0, 0.0},
        {5.0, 0.5, 12, 0.3, 0.2},   {100.0, 1.0, 90, 0.2, -0.1},
    };
    for (const auto& cs : cases) {
        ModelParams p;
        p.lambda = cs.lambda;
        p.mu = cs.mu;
        p.s = cs.s;
        p.abandon = AbandonmentSpec::reneging(1.0);
        p.cbc = CbcControl{cs.eps, cs.tau};
        const DerivedCoefficients d = derive(p);
        INFO("lambda=" << cs.lambda << " mu=" << cs.mu << " s=" << cs.s);

        CHECK_THAT(d.c, WithinRel(d.a * std::sqrt(d.R), 1e-12));
        CHECK_THAT(d.a_q - d.a, WithinAbs((cs.eps + cs.tau) / (1.0 + cs.tau), 1e-12));
        CHECK(d.R_q <= d.R + 1e-12);  // guaranteed by eps + tau >= 0
    }
}

TEST_CASE("derive_real matches derive at integer staff and extends between", "[model]") {
    const ModelParams p = base_params();
    const DerivedCoefficients di = derive(p);
    const DerivedCoefficients dr = derive_real(p.lambda, p.mu, 55.0, p.abandon, p.cbc);
    CHECK(di.c == dr.c);
    CHECK(di.sub2.staff == dr.sub2.staff);

    const DerivedCoefficients dh = derive_real(p.lambda, p.mu, 55.5, p.abandon, p.cbc);
    CHECK_THAT(dh.sub1.sqrt_coef, WithinRel((55.5 - 50.0) / std::sqrt(50.0), 1e-14));
    CHECK_THAT(dh.p, WithinAbs(1.0 - 55.5 * 1.05 / 50.0, 1e-14));
}
