#pragma once

#include <functional>

namespace rsou {

// Adaptive Gauss-Kronrod over a finite interval; returns the value and throws
// a Numerical error with the given code if the error estimate misses abs_tol.
double quad_finite(const std::function<double(double)>& f, double a, double b,
                   double abs_tol, const char* err_code = "QuadratureBudgetExceeded");

enum class DyadicOutcome { Converged, ExceededBound, WindowBudget };

struct DyadicResult {
    double value = 0.0;
    DyadicOutcome outcome = DyadicOutcome::Converged;
    int windows = 0;
};

// Integral over [from, +inf): adaptive panels [from*2^k, from*2^{k+1}].
// Stops once two consecutive panel contributions drop below abs_tol/4; trips
// ExceededBound when the running value passes divergence_bound (the caller's
// divergence budget), WindowBudget when max_windows panels were not enough.
DyadicResult integrate_dyadic_up(const std::function<double(double)>& f, double from,
                                 double abs_tol, int max_windows,
                                 double divergence_bound);

// Integral over (0, hi]: panels [hi*2^{-k-1}, hi*2^{-k}], same stopping rule.
DyadicResult integrate_dyadic_down(const std::function<double(double)>& f, double hi,
                                   double abs_tol, int max_windows);

}  // namespace rsou
