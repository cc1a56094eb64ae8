#include "rsou/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "rsou/errors.hpp"
#include "rsou/quad.hpp"

namespace rsou {

namespace {
using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846264338328;

// complex-valued dyadic panel integral over (0, hi]
cplx cdyadic_down(const std::function<cplx(double)>& f, double hi, double tol,
                  const char* what) {
    auto re = integrate_dyadic_down([&](double v) { return f(v).real(); }, hi, tol, 250);
    auto im = integrate_dyadic_down([&](double v) { return f(v).imag(); }, hi, tol, 250);
    if (re.outcome != DyadicOutcome::Converged || im.outcome != DyadicOutcome::Converged)
        throw_numerical("QuadratureBudgetExceeded", what);
    return {re.value, im.value};
}
}  // namespace

std::complex<double> levy_exponent(std::complex<double> u, const LevyTriplet& triplet,
                                   double abs_tol) {
    const cplx iu(-u.imag(), u.real());
    return 0.5 * triplet.a * u * u - iu * triplet.b +
           cf_integral(triplet.measure, u, abs_tol);
}

StationaryCf::StationaryCf(double alpha, double sigma, const LevyTriplet& triplet,
                           double exponent_tol)
    : alpha_(alpha), sigma_(sigma), triplet_(triplet), tol_(exponent_tol) {
    if (!(alpha < 0.0))
        throw_precondition("PreconditionAlphaSign", "stationary law needs alpha < 0");
    if (!(triplet.a > 0.0)) throw_config("NonPositiveA", "Gaussian coefficient must be positive");
    validate_measure(triplet.measure);
    if (!has_log_moment(triplet.measure))
        throw_precondition("PreconditionIntegrability",
                           "stationary law needs the log-moment condition");
}

std::complex<double> StationaryCf::operator()(double z) const {
    const double w = sigma_ * z;
    if (w == 0.0) return 1.0;
    auto f = [&](double v) { return levy_exponent(cplx(v * w, 0.0), triplet_, tol_ * 0.1) / v; };
    const cplx expo = cdyadic_down(f, 1.0, tol_, "stationary exponent integral did not settle");
    return std::exp(expo / alpha_);
}

std::vector<double> invert_to_cdf(const std::function<std::complex<double>(double)>& cf,
                                  const std::vector<double>& x_grid,
                                  const InversionOptions& opts) {
    if (x_grid.empty()) return {};
    if (std::abs(cf(0.0) - 1.0) > 1e-8)
        throw_precondition("InvalidCf", "cf(0) must equal 1");

    // truncation point: |cf| below the floor (checked near the endpoint too,
    // to dodge an accidental zero of an oscillating modulus)
    double z_max = 8.0;
    double achieved = 0.0;
    while (true) {
        achieved = std::max({std::abs(cf(z_max)), std::abs(cf(0.97 * z_max)),
                             std::abs(cf(0.90 * z_max))});
        if (achieved < opts.cf_floor) break;
        z_max *= 2.0;
        if (z_max > opts.z_budget)
            throw_numerical("SlowDecay", "|cf| only reached " + std::to_string(achieved) +
                                             " within the truncation budget");
    }

    // z -> 0 limit of the integrand is (mean - x); estimate the mean from the
    // CF itself
    const double delta = z_max * 1e-8;
    const double mean = cf(delta).imag() / delta;

    double x_absmax = 0.0;
    for (double x : x_grid) x_absmax = std::max(x_absmax, std::fabs(x));

    int m = 64;
    {
        const double h_osc = kPi / (4.0 * (x_absmax + 1.0));
        while (z_max / m > h_osc && m < (1 << 26)) m *= 2;
    }

    std::vector<cplx> vals(m + 1);  // cf at j * h, j = 0..m
    double h = z_max / m;
    for (int j = 0; j <= m; ++j) vals[j] = cf(j * h);

    auto sum_for = [&](double x) {
        double s = 0.5 * (mean - x);  // j = 0 endpoint, trapezoid half weight
        for (int j = 1; j <= m; ++j) {
            const double z = j * h;
            const cplx rot(std::cos(z * x), -std::sin(z * x));
            const double term = (rot * vals[j]).imag() / z;
            s += (j == m) ? 0.5 * term : term;
        }
        return s * h;
    };

    std::vector<double> current(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i)
        current[i] = 0.5 - sum_for(x_grid[i]) / kPi;

    for (int refine = 0;; ++refine) {
        if (refine >= opts.max_refinements)
            throw_numerical("InversionBudget", "step refinement did not stabilize");
        // halve the step, reusing previous evaluations at even nodes
        std::vector<cplx> next(2 * m + 1);
        for (int j = 0; j <= m; ++j) next[2 * j] = vals[j];
        h *= 0.5;
        for (int j = 1; j <= 2 * m; j += 2) next[j] = cf(j * h);
        vals = std::move(next);
        m *= 2;

        double worst = 0.0;
        std::vector<double> refined(x_grid.size());
        for (std::size_t i = 0; i < x_grid.size(); ++i) {
            refined[i] = 0.5 - sum_for(x_grid[i]) / kPi;
            worst = std::max(worst, std::fabs(refined[i] - current[i]));
        }
        current = std::move(refined);
        if (worst < opts.step_tol) break;
    }

    // clamp and monotonize
    double running = 0.0;
    for (double& v : current) {
        v = std::clamp(v, 0.0, 1.0);
        running = std::max(running, v);
        v = running;
    }
    return current;
}

double exp_moment(double lambda, double alpha, double sigma, const LevyTriplet& triplet,
                  double abs_tol) {
    if (!(alpha < 0.0))
        throw_precondition("PreconditionAlphaSign", "exponential moment needs alpha < 0");
    if (lambda < 0.0) throw_precondition("InvalidLambda", "lambda must be >= 0");
    if (lambda == 0.0) return 1.0;

    const double c = lambda * sigma;
    if (!exp_tail_finite(triplet.measure, c))
        return std::numeric_limits<double>::infinity();

    const double i1 = -triplet.a * lambda * lambda * sigma * sigma / (4.0 * alpha) -
                      triplet.b * lambda * sigma / alpha;
    double i2 = 0.0;
    if (c != 0.0 && !is_structurally_zero(triplet.measure)) {
        auto f = [&](double v) { return exp_integral(triplet.measure, c * v, abs_tol * 0.1) / v; };
        auto r = integrate_dyadic_down(f, 1.0, abs_tol, 250);
        if (r.outcome != DyadicOutcome::Converged)
            throw_numerical("QuadratureBudgetExceeded",
                            "exponential moment integral did not settle");
        i2 = r.value / std::fabs(alpha);
    }
    return std::exp(i1 + i2);
}

void write_cdf_csv(const std::vector<double>& x_grid, const std::vector<double>& cdf,
                   std::ostream& os) {
    os << "x,F\n";
    char buf[64];
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x_grid[i], cdf[i]);
        os << buf;
    }
}

}  // namespace rsou
