#include <doctest.h>

#include <cmath>

#include "rsou/errors.hpp"
#include "rsou/model.hpp"
#include "rsou/rng.hpp"

using namespace rsou;

namespace {

ModelDescription canonical_desc() {
    ModelDescription d;
    d.n = 2;
    d.q = {{-1.0, 1.0}, {2.0, -2.0}};
    d.alpha = {-2.0, 1.0};
    d.sigma = {1.0, 1.0};
    d.triplet = LevyTriplet{0.0, 1.0, ZeroMeasure{}};
    return d;
}

void expect_code(const ModelDescription& d, const std::string& code) {
    try {
        validate_model(d);
        FAIL_CHECK("expected " << code);
    } catch (const Error& e) {
        CHECK(e.code() == code);
    }
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_CASE("validate_model accepts the canonical model and rejects each defect") {
    const RegimeModel m = validate_model(canonical_desc());
    CHECK(m.n == 2);
    CHECK(m.q(0, 1) == 1.0);
    CHECK(m.alpha(1) == 1.0);

    auto d = canonical_desc();
    d.q = {{-1.0, 0.5}, {2.0, -2.0}};
    expect_code(d, "RowSumViolation");

    d = canonical_desc();
    d.q = {{1.0, -1.0}, {2.0, -2.0}};
    expect_code(d, "NegativeOffDiagonal");

    d = canonical_desc();
    d.alpha = {-2.0};
    expect_code(d, "DimensionMismatch");

    d = canonical_desc();
    d.n = 1;
    d.q = {{0.0}};
    d.alpha = {1.0};
    d.sigma = {1.0};
    expect_code(d, "StateCountTooSmall");

    d = canonical_desc();
    d.triplet.a = 0.0;
    expect_code(d, "NonPositiveA");

    d = canonical_desc();
    TemperedPowerLaw t;
    t.c_pos = 1.0;
    t.beta_pos = 2.3;
    d.triplet.measure = t;
    expect_code(d, "InvalidMeasureParams");

    d = canonical_desc();
    d.q = {{0.0, 0.0}, {2.0, -2.0}};  // no way out of state 1
    expect_code(d, "NotIrreducible");
}

TEST_CASE("classify_integrability: zero measure baseline") {
    const auto rep = classify_integrability(ZeroMeasure{}, vec2(1.0, 1.0));
    CHECK(rep.cond_13);
    CHECK(rep.cond_a1);
    CHECK(rep.cond_a15);
    CHECK(!rep.cond_a2_per_state[0]);
    CHECK(!rep.cond_a2_per_state[1]);
    REQUIRE(rep.cond_a4_lambda0.has_value());
    CHECK(*rep.cond_a4_lambda0 == 1024.0);  // top of the dyadic witness grid
}

TEST_CASE("classify_integrability: Pareto keeps the log moment only") {
    LevyMeasureSpec m = CompoundPoisson{1.0, ParetoJump{1.5, ParetoSide::Both, 1.0}};
    const auto rep = classify_integrability(m, vec2(1.0, 1.0));
    CHECK(rep.cond_a1);
    CHECK(!rep.cond_a15);  // ∫ z^{2-1-1.5} over the tail diverges for beta < 2
    CHECK(rep.cond_a2_per_state[0]);
    CHECK(rep.cond_a2_per_state[1]);
    CHECK(!rep.cond_a4_lambda0.has_value());
}

TEST_CASE("classify_integrability: tempering restores every moment condition") {
    TemperedPowerLaw t;
    t.c_pos = t.c_neg = 1.0;
    t.beta_pos = t.beta_neg = 0.5;
    t.theta_pos = t.theta_neg = 3.0;
    const auto rep = classify_integrability(t, vec2(1.0, 2.0));
    CHECK(rep.cond_a1);
    CHECK(rep.cond_a15);
    CHECK(!rep.cond_a2_per_state[0]);
    CHECK(!rep.cond_a2_per_state[1]);
    REQUIRE(rep.cond_a4_lambda0.has_value());
    // any witness below theta / max|sigma| = 1.5 works; the dyadic grid tops out at 1
    CHECK(*rep.cond_a4_lambda0 == 1.0);
}

TEST_CASE("classify_integrability: tiny tempering rate leaves the witness grid empty") {
    TemperedPowerLaw t;
    t.c_pos = 1.0;
    t.beta_pos = 0.5;
    t.theta_pos = 5e-4;  // below the smallest grid point 2^-10
    const auto rep = classify_integrability(t, vec2(1.0, 1.0));
    CHECK(!rep.cond_a2_per_state[0]);  // tempered, so no all-lambda divergence
    CHECK(!rep.cond_a4_lambda0.has_value());
}

TEST_CASE("integrability report invariants hold on random measures") {
    RngStream rng(777);
    for (int trial = 0; trial < 120; ++trial) {
        LevyMeasureSpec m;
        switch (trial % 5) {
            case 0: m = ZeroMeasure{}; break;
            case 1: m = CompoundPoisson{0.5 + rng.uniform01(), GaussianJump{rng.gaussian(), 0.3 + rng.uniform01()}}; break;
            case 2: m = CompoundPoisson{1.0, ParetoJump{0.3 + 3.0 * rng.uniform01(),
                                           trial % 2 ? ParetoSide::Both : ParetoSide::Plus, 1.0}}; break;
            case 3: {
                TemperedPowerLaw t;
                t.c_pos = rng.uniform01() < 0.8 ? 0.5 + rng.uniform01() : 0.0;
                t.c_neg = rng.uniform01() < 0.8 ? 0.5 + rng.uniform01() : 0.0;
                t.beta_pos = 0.1 + 1.8 * rng.uniform01();
                t.beta_neg = 0.1 + 1.8 * rng.uniform01();
                t.theta_pos = rng.uniform01() < 0.5 ? 0.0 : 3.0 * rng.uniform01();
                t.theta_neg = rng.uniform01() < 0.5 ? 0.0 : 3.0 * rng.uniform01();
                m = t;
                break;
            }
            default: m = CompoundPoisson{1.0, TwoSidedExponentialJump{0.2 + 2 * rng.uniform01(),
                                            0.2 + 2 * rng.uniform01(), rng.uniform01()}}; break;
        }
        Eigen::VectorXd sigma(3);
        sigma << -1.5 + 3.0 * rng.uniform01(), -1.5 + 3.0 * rng.uniform01(),
            (trial % 7 == 0 ? 0.0 : 0.5 + rng.uniform01());
        const auto rep = classify_integrability(m, sigma);

        // monotonicity: the stronger moment condition implies the weaker one
        if (rep.cond_a15) CHECK(rep.cond_a1);

        // mutual exclusion of the divergence and uniform-bound conditions
        const bool any_a2 =
            rep.cond_a2_per_state[0] || rep.cond_a2_per_state[1] || rep.cond_a2_per_state[2];
        if (rep.cond_a4_lambda0.has_value()) CHECK(!any_a2);
        if (any_a2) CHECK(!rep.cond_a4_lambda0.has_value());

        // positive rescaling of sigma preserves the divergence flags
        const auto scaled = classify_integrability(m, (2.0 * sigma).eval());
        CHECK(scaled.cond_a2_per_state == rep.cond_a2_per_state);

        // zero loading never witnesses divergence
        if (trial % 7 == 0) CHECK(!rep.cond_a2_per_state[2]);

        // the zero measure report is independent of sigma
        if (std::holds_alternative<ZeroMeasure>(m)) {
            const auto other = classify_integrability(m, (-3.0 * sigma).eval());
            CHECK(other.cond_a1 == rep.cond_a1);
            CHECK(other.cond_a2_per_state == rep.cond_a2_per_state);
            CHECK(other.cond_a4_lambda0 == rep.cond_a4_lambda0);
        }
    }
}
