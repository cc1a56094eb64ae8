#include "rsou/quad.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "rsou/errors.hpp"

namespace rsou {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

double panel(const std::function<double(double)>& f, double a, double b) {
    double err = 0.0;
    return GK::integrate(f, a, b, 12, 1e-12, &err);
}

}  // namespace

double quad_finite(const std::function<double(double)>& f, double a, double b,
                   double abs_tol, const char* err_code) {
    // The built-in error estimate accumulates roundoff across panels and goes
    // pessimistic near machine precision, so the acceptance test compares two
    // independent partitions instead.
    double err = 0.0, l1 = 0.0;
    const double whole = GK::integrate(f, a, b, 15, 1e-13, &err, &l1);
    const double mid = a + 0.61803398874989484820 * (b - a);
    const double split = GK::integrate(f, a, mid, 15, 1e-13, &err) +
                         GK::integrate(f, mid, b, 15, 1e-13, &err);
    if (!std::isfinite(split) || !(std::fabs(whole - split) <= abs_tol * 0.5 + 4e-14 * l1)) {
        throw_numerical(err_code, "adaptive quadrature failed to reach tolerance");
    }
    return split;
}

DyadicResult integrate_dyadic_up(const std::function<double(double)>& f, double from,
                                 double abs_tol, int max_windows,
                                 double divergence_bound) {
    DyadicResult r;
    double lo = from;
    int small_streak = 0;
    for (int k = 0; k < max_windows; ++k) {
        const double hi = lo * 2.0;
        const double w = panel(f, lo, hi);
        r.value += w;
        r.windows = k + 1;
        if (!std::isfinite(r.value) || std::fabs(r.value) > divergence_bound) {
            r.outcome = DyadicOutcome::ExceededBound;
            return r;
        }
        small_streak = (std::fabs(w) < 0.25 * abs_tol) ? small_streak + 1 : 0;
        if (small_streak >= 2) {
            r.outcome = DyadicOutcome::Converged;
            return r;
        }
        lo = hi;
    }
    r.outcome = DyadicOutcome::WindowBudget;
    return r;
}

DyadicResult integrate_dyadic_down(const std::function<double(double)>& f, double hi,
                                   double abs_tol, int max_windows) {
    DyadicResult r;
    double top = hi;
    int small_streak = 0;
    for (int k = 0; k < max_windows; ++k) {
        const double bot = top * 0.5;
        const double w = panel(f, bot, top);
        r.value += w;
        r.windows = k + 1;
        if (!std::isfinite(r.value)) {
            r.outcome = DyadicOutcome::ExceededBound;
            return r;
        }
        small_streak = (std::fabs(w) < 0.25 * abs_tol) ? small_streak + 1 : 0;
        if (small_streak >= 2) {
            r.outcome = DyadicOutcome::Converged;
            return r;
        }
        top = bot;
    }
    r.outcome = DyadicOutcome::WindowBudget;
    return r;
}

}  // namespace rsou
