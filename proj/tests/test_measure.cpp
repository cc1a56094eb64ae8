#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracle_util.hpp"
#include "rsou/errors.hpp"
#include "rsou/measure.hpp"
#include "rsou/quad.hpp"
#include "rsou/rng.hpp"
#include "rsou/special.hpp"

using namespace rsou;
using testutil::romberg;
using cplx = std::complex<double>;

namespace {
LevyMeasureSpec tpl_sym(double c, double beta, double theta) {
    TemperedPowerLaw t;
    t.c_pos = t.c_neg = c;
    t.beta_pos = t.beta_neg = beta;
    t.theta_pos = t.theta_neg = theta;
    return t;
}

LevyMeasureSpec cp_pareto(double rate, double beta, ParetoSide side, double scale = 1.0) {
    return CompoundPoisson{rate, ParetoJump{beta, side, scale}};
}
}  // namespace

TEST_CASE("rng streams are deterministic and splittable") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    bool equal = true, distinct = false;
    for (int i = 0; i < 256; ++i) {
        const auto va = a.next_u64();
        equal = equal && (va == b.next_u64());
        distinct = distinct || (va != c.next_u64());
    }
    CHECK(equal);
    CHECK(distinct);
}

TEST_CASE("rng samplers hit their first moments") {
    RngStream rng(1234);
    const int n = 400000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        sum += g;
        sq += g * g;
    }
    CHECK(std::fabs(sum / n) < 0.006);
    CHECK(std::fabs(sq / n - 1.0) < 0.01);

    double pois = 0.0;
    for (int i = 0; i < 200000; ++i) pois += static_cast<double>(rng.poisson(3.7));
    CHECK(std::fabs(pois / 200000 - 3.7) < 0.03);

    double ex = 0.0;
    for (int i = 0; i < 200000; ++i) ex += rng.exponential(2.0);
    CHECK(std::fabs(ex / 200000 - 0.5) < 0.005);
}

TEST_CASE("stable exp helpers agree with the direct forms") {
    CHECK(expm1m(1e-5) == doctest::Approx(std::exp(1e-5) - 1 - 1e-5).epsilon(1e-6));
    {
        // analytic: e^{ih}-1-ih = -h^2/2 + h^4/24 + i(-h^3/6 + h^5/120) + O(h^6)
        const double h = 1e-5;
        const cplx ref(-h * h / 2 + h * h * h * h / 24, -h * h * h / 6);
        CHECK(std::abs(cexpm1m(cplx(0, h)) - ref) < 1e-24);
    }
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5));
    CHECK(norm_quantile(norm_cdf(1.3)) == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("quadrature wrappers on known integrals") {
    CHECK(quad_finite([](double x) { return x * x; }, 0, 1, 1e-12) ==
          doctest::Approx(1.0 / 3).epsilon(1e-12));
    auto up = integrate_dyadic_up([](double z) { return std::exp(-z); }, 1.0, 1e-12, 100, 1e300);
    CHECK(up.outcome == DyadicOutcome::Converged);
    CHECK(up.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    auto down = integrate_dyadic_down([](double z) { return 1.0 / std::sqrt(z); }, 1.0, 1e-12, 250);
    CHECK(down.outcome == DyadicOutcome::Converged);
    CHECK(down.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("measure validation rejects out-of-family parameters") {
    auto expect_invalid = [](const LevyMeasureSpec& m) {
        try {
            validate_measure(m);
            FAIL_CHECK("expected InvalidMeasureParams");
        } catch (const Error& e) {
            CHECK(e.code() == "InvalidMeasureParams");
        }
    };
    expect_invalid(tpl_sym(1.0, 2.3, 0.0));   // stability index too large
    expect_invalid(tpl_sym(1.0, 2.0, 1.0));   // boundary excluded
    expect_invalid(tpl_sym(1.0, -0.5, 1.0));
    expect_invalid(cp_pareto(1.0, 1.5, ParetoSide::Both, 0.5));  // scale < 1
    expect_invalid(CompoundPoisson{0.0, GaussianJump{}});
    expect_invalid(CompoundPoisson{1.0, GaussianJump{0.0, 0.0}});
    expect_invalid(CompoundPoisson{1.0, PointMassJump{0.0}});
    CHECK_NOTHROW(validate_measure(tpl_sym(1.0, 0.5, 3.0)));
    CHECK_NOTHROW(validate_measure(LevyMeasureSpec{ZeroMeasure{}}));
}

TEST_CASE("region integrals match closed forms and the Romberg oracle") {
    // Gaussian compound Poisson
    LevyMeasureSpec g = CompoundPoisson{2.0, GaussianJump{0.3, 1.1}};
    const double eps = 0.4;
    auto gauss_density = [](double z) {
        return norm_pdf((z - 0.3) / 1.1) / 1.1;
    };
    CHECK(mass_above(g, eps) ==
          doctest::Approx(2.0 * (1.0 - romberg(gauss_density, -eps, eps))).epsilon(1e-10));
    CHECK(mean_between(g, eps, 1.0) ==
          doctest::Approx(2.0 * (romberg([&](double z) { return z * norm_pdf((z - 0.3) / 1.1) / 1.1; }, eps, 1.0) +
                                 romberg([&](double z) { return z * norm_pdf((z - 0.3) / 1.1) / 1.1; }, -1.0, -eps)))
              .epsilon(1e-9));
    CHECK(variance_below(g, eps) ==
          doctest::Approx(2.0 * romberg([&](double z) { return z * z * norm_pdf((z - 0.3) / 1.1) / 1.1; }, -eps, eps))
              .epsilon(1e-9));

    // two-sided exponential
    LevyMeasureSpec e = CompoundPoisson{1.5, TwoSidedExponentialJump{2.0, 1.0, 0.7}};
    auto tse_mass = 1.5 * (0.7 * std::exp(-2.0 * eps) + 0.3 * std::exp(-eps));
    CHECK(mass_above(e, eps) == doctest::Approx(tse_mass).epsilon(1e-12));
    CHECK(mean_between(e, eps, 1.0) ==
          doctest::Approx(1.5 * (0.7 * romberg([](double z) { return z * 2.0 * std::exp(-2.0 * z); }, eps, 1.0) -
                                 0.3 * romberg([](double z) { return z * std::exp(-z); }, eps, 1.0)))
              .epsilon(1e-10));

    // Pareto: all mass beyond the scale
    LevyMeasureSpec p = cp_pareto(3.0, 1.5, ParetoSide::Both, 1.0);
    CHECK(mass_above(p, 2.0) == doctest::Approx(3.0 * std::pow(0.5, 1.5)).epsilon(1e-13));
    CHECK(mean_between(p, 0.01, 1.0) == 0.0);
    CHECK(variance_below(p, 1.0) == 0.0);

    // tempered power law, theta = 0 closed form and theta > 0 vs oracle
    LevyMeasureSpec t0 = tpl_sym(1.0, 0.5, 0.0);
    CHECK(mass_above(t0, 0.01) ==
          doctest::Approx(2.0 * std::pow(0.01, -0.5) / 0.5).epsilon(1e-11));
    LevyMeasureSpec t3 = tpl_sym(1.0, 0.5, 3.0);
    // frozen 40-digit quadrature references
    CHECK(mass_above(t3, 0.01) == doctest::Approx(2.0 * 14.457057656340663386).epsilon(1e-10));
    CHECK(variance_below(t3, 0.1) == doctest::Approx(0.035327839479284255825).epsilon(1e-10));
    CHECK(mean_between(t3, 0.1, 1.0) == doctest::Approx(0.0).epsilon(1e-14));  // symmetric
}

TEST_CASE("integrability classifiers: closed-form decisions per family") {
    // power integrals: beta = 1.5 keeps the log moment but loses |z| v z^2
    LevyMeasureSpec pareto15 = cp_pareto(1.0, 1.5, ParetoSide::Both);
    CHECK(has_log_moment(pareto15));
    CHECK(!has_abs_square_moment(pareto15));
    CHECK(exp_tail_diverges_all_lambda(pareto15, 1.0));
    CHECK(exp_tail_diverges_all_lambda(pareto15, -1.0));

    LevyMeasureSpec pareto25 = cp_pareto(1.0, 2.5, ParetoSide::Both);
    CHECK(has_abs_square_moment(pareto25));
    CHECK(exp_tail_diverges_all_lambda(pareto25, 1.0));  // power tail beats any exponential

    LevyMeasureSpec plus_only = cp_pareto(1.0, 1.2, ParetoSide::Plus);
    CHECK(exp_tail_diverges_all_lambda(plus_only, 1.0));
    CHECK(!exp_tail_diverges_all_lambda(plus_only, -1.0));
    CHECK(!exp_tail_diverges_all_lambda(plus_only, 0.0));

    // tempered power law: tempering buys every condition back
    LevyMeasureSpec t3 = tpl_sym(1.0, 0.5, 3.0);
    CHECK(has_log_moment(t3));
    CHECK(has_abs_square_moment(t3));
    CHECK(!exp_tail_diverges_all_lambda(t3, 1.0));
    CHECK(exp_tail_finite(t3, 3.0));      // inclusive boundary
    CHECK(!exp_tail_finite(t3, 3.0001));
    CHECK(abs_exp_tail_finite(t3, 1.5));
    CHECK(!abs_exp_tail_finite(t3, 4.0));

    LevyMeasureSpec t0 = tpl_sym(1.0, 1.3, 0.0);
    CHECK(!has_log_moment(t0));           // beta >= 1 loses the origin
    CHECK(!has_abs_square_moment(t0));
    CHECK(exp_tail_diverges_all_lambda(t0, 1.0));

    // two-sided exponential: strict pole condition
    LevyMeasureSpec e = CompoundPoisson{1.0, TwoSidedExponentialJump{1.0, 2.0, 0.5}};
    CHECK(exp_tail_finite(e, 0.999));
    CHECK(!exp_tail_finite(e, 1.0));
    CHECK(exp_tail_finite(e, -1.999));
    CHECK(!exp_tail_finite(e, -2.0));
    CHECK(!exp_tail_diverges_all_lambda(e, 1.0));

    // bounded-support families have every exponential moment
    CHECK(exp_tail_finite(CompoundPoisson{1.0, GaussianJump{}}, 50.0));
    CHECK(exp_tail_finite(CompoundPoisson{1.0, PointMassJump{2.0}}, 50.0));
}

TEST_CASE("divergence probe agrees with the closed-form exponential-tail decisions") {
    RngStream rng(911);
    const double lambda = 0.3;
    auto g = [&](double z) { return std::expm1(lambda * z); };
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        LevyMeasureSpec m;
        switch (trial % 4) {
            case 0: m = CompoundPoisson{0.5 + rng.uniform01(), GaussianJump{rng.gaussian(), 0.5 + rng.uniform01()}}; break;
            case 1: m = CompoundPoisson{1.0, TwoSidedExponentialJump{0.05 + 2 * rng.uniform01(), 0.05 + 2 * rng.uniform01(), rng.uniform01()}}; break;
            case 2: m = cp_pareto(1.0, 0.3 + 2 * rng.uniform01(),
                                  trial % 8 < 4 ? ParetoSide::Plus : ParetoSide::Both); break;
            default: m = tpl_sym(0.5 + rng.uniform01(), 0.2 + 1.5 * rng.uniform01(),
                                 trial % 8 < 4 ? 0.0 : 0.6 + 2 * rng.uniform01()); break;
        }
        // skip near-boundary cases the finite-window probe cannot decide
        if (const auto* e = std::get_if<CompoundPoisson>(&m)) {
            if (const auto* tse = std::get_if<TwoSidedExponentialJump>(&e->jump))
                if (std::fabs(tse->rate_pos - lambda) < 0.1) continue;
        }
        if (const auto* t = std::get_if<TemperedPowerLaw>(&m))
            if (t->theta_pos > 0.0 && std::fabs(t->theta_pos - lambda) < 0.1) continue;

        const auto probe = tail_divergence_probe(m, g);
        const bool finite = exp_tail_finite(m, lambda);
        if (probe.verdict == ProbeVerdict::Diverged) CHECK(!finite);
        if (probe.verdict == ProbeVerdict::Converged) CHECK(finite);
        if (probe.verdict != ProbeVerdict::Inconclusive) ++checked;
    }
    CHECK(checked >= 40);  // the probe must actually decide most cases
}

TEST_CASE("cf_integral: closed forms, frozen references, and symmetries") {
    // point mass, |z0| >= 1: no compensator term
    LevyMeasureSpec pm = CompoundPoisson{0.8, PointMassJump{1.0}};
    const cplx u(1.3, 0.0);
    const cplx expect = 0.8 * (1.0 - std::exp(cplx(0, 1.3)));
    CHECK(std::abs(cf_integral(pm, u) - expect) < 1e-13);

    // point mass inside the unit ball keeps the compensator
    LevyMeasureSpec pm_small = CompoundPoisson{0.8, PointMassJump{0.4}};
    const cplx expect_small = 0.8 * (1.0 - std::exp(cplx(0, 1.3 * 0.4)) + cplx(0, 1.3 * 0.4));
    CHECK(std::abs(cf_integral(pm_small, u) - expect_small) < 1e-13);

    // two-sided exponential against the frozen reference
    LevyMeasureSpec tse = CompoundPoisson{1.0, TwoSidedExponentialJump{2.0, 1.0, 0.7}};
    const cplx tse_ref(0.3963844480305237781, -0.0076646873253030511333);
    CHECK(std::abs(cf_integral(tse, cplx(1.3, 0.0)) - tse_ref) < 1e-11);

    // tempered power law, tempered and untempered, frozen references
    TemperedPowerLaw tp;
    tp.c_pos = 1.0; tp.c_neg = 0.0; tp.beta_pos = 0.5; tp.theta_pos = 3.0;
    CHECK(std::abs(cf_integral(LevyMeasureSpec{tp}, cplx(0.7, 0.0)) -
                   cplx(0.041094541817734466441, -0.005485223194406070395)) < 1e-10);
    CHECK(std::abs(cf_integral(LevyMeasureSpec{tp}, cplx(3.2, 0.0)) -
                   cplx(0.67251054434125041997, 0.27641835438619987988)) < 1e-10);

    TemperedPowerLaw tu;
    tu.c_pos = 1.0; tu.c_neg = 0.0; tu.beta_pos = 1.3; tu.theta_pos = 0.0;
    CHECK(std::abs(cf_integral(LevyMeasureSpec{tu}, cplx(0.9, 0.0)) -
                   cplx(1.317621357560072207473, -0.4140224813746438757046)) < 1e-9);

    // Pareto characteristic fragment via the rotated tail integral
    LevyMeasureSpec pr = cp_pareto(1.0, 1.2, ParetoSide::Plus);
    const cplx pareto_tail(-0.31163285123725089343, 0.20400874378646250322);
    const cplx expected_pr = 1.0 - 1.2 * pareto_tail;  // rate (1 - beta s^beta T)
    CHECK(std::abs(cf_integral(pr, cplx(1.7, 0.0)) - expected_pr) < 1e-9);

    // Hermitian symmetry and nonnegative real part on random measures
    RngStream rng(5150);
    for (int trial = 0; trial < 40; ++trial) {
        LevyMeasureSpec m;
        switch (trial % 3) {
            case 0: m = CompoundPoisson{0.5 + rng.uniform01(), GaussianJump{rng.gaussian() * 0.5, 0.3 + rng.uniform01()}}; break;
            case 1: m = tpl_sym(0.2 + rng.uniform01(), 0.2 + 1.6 * rng.uniform01(), 2.0 * rng.uniform01()); break;
            default: m = CompoundPoisson{1.0, TwoSidedExponentialJump{0.5 + rng.uniform01(), 0.5 + rng.uniform01(), rng.uniform01()}}; break;
        }
        const double uu = -4.0 + 8.0 * rng.uniform01();
        const cplx a = cf_integral(m, cplx(uu, 0.0));
        const cplx b = cf_integral(m, cplx(-uu, 0.0));
        CHECK(std::abs(a - std::conj(b)) < 1e-9 * (1.0 + std::abs(a)));
        CHECK(a.real() >= -1e-10);
    }
}

TEST_CASE("cf_integral rejects non-integrable exponential directions") {
    LevyMeasureSpec pr = cp_pareto(1.0, 1.2, ParetoSide::Plus);
    try {
        cf_integral(pr, cplx(0.0, -0.5));  // e^{0.5 z} against a power tail
        FAIL_CHECK("expected DivergentExponent");
    } catch (const Error& e) {
        CHECK(e.code() == "DivergentExponent");
    }
    // the decaying direction is fine
    CHECK_NOTHROW(cf_integral(pr, cplx(0.0, 0.5)));
}

TEST_CASE("exp_integral: closed forms and frozen references") {
    LevyMeasureSpec pm = CompoundPoisson{2.0, PointMassJump{0.4}};
    const double c = 0.9;
    CHECK(exp_integral(pm, c) ==
          doctest::Approx(2.0 * (std::exp(c * 0.4) - 1.0 - c * 0.4)).epsilon(1e-13));

    LevyMeasureSpec g = CompoundPoisson{1.0, GaussianJump{0.0, 1.0}};
    // symmetric jumps: compensator mean vanishes
    CHECK(exp_integral(g, 0.5) ==
          doctest::Approx(std::exp(0.125) - 1.0).epsilon(1e-12));

    LevyMeasureSpec t3 = tpl_sym(1.0, 0.5, 3.0);
    TemperedPowerLaw one_sided;
    one_sided.c_pos = 1.0; one_sided.beta_pos = 0.5; one_sided.theta_pos = 3.0;
    CHECK(exp_integral(LevyMeasureSpec{one_sided}, 2.0) ==
          doctest::Approx(0.57767830494214364813).epsilon(1e-9));
    CHECK(exp_integral(LevyMeasureSpec{one_sided}, 3.0) ==
          doctest::Approx(3.1138988862902980886).epsilon(1e-9));
    CHECK(exp_integral(t3, 4.0) == std::numeric_limits<double>::infinity());

    LevyMeasureSpec pr = cp_pareto(1.0, 1.2, ParetoSide::Plus);
    CHECK(exp_integral(pr, 0.3) == std::numeric_limits<double>::infinity());
    CHECK(std::isfinite(exp_integral(pr, -0.3)));
}

TEST_CASE("nu_integral matches analytic expectations") {
    // second moment of the jump measure
    LevyMeasureSpec g = CompoundPoisson{1.7, GaussianJump{0.2, 0.9}};
    CHECK(nu_integral(g, [](double z) { return z * z; }, 1e-10) ==
          doctest::Approx(1.7 * (0.04 + 0.81)).epsilon(1e-9));

    LevyMeasureSpec t3 = tpl_sym(1.0, 0.5, 3.0);
    const double oracle = 2.0 * romberg([](double z) { return std::pow(z, 0.5) * std::exp(-3.0 * z); }, 1e-12, 40.0);
    CHECK(nu_integral(t3, [](double z) { return z * z; }, 1e-10) ==
          doctest::Approx(oracle).epsilon(1e-8));

    // growing integrand against an untempered tail must trip the budget
    LevyMeasureSpec t0 = tpl_sym(1.0, 1.3, 0.0);
    try {
        nu_integral(t0, [](double z) { return z * z; }, 1e-10);
        FAIL_CHECK("expected QuadratureBudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == "QuadratureBudgetExceeded");
    }
}
