#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "rsou/model.hpp"

namespace rsou {

// Levy-Khintchine exponent Phi(u) = a u^2 / 2 - i b u + jump integral, with
// E e^{iuZ_t} = e^{-t Phi(u)}. Complex u is allowed when the corresponding
// exponential direction is integrable (DivergentExponent otherwise — the
// heavy-tail signal, not a crash).
std::complex<double> levy_exponent(std::complex<double> u, const LevyTriplet& triplet,
                                   double abs_tol = 1e-11);

// Characteristic function of the stationary law of  dY = alpha Y dt + sigma dZ
// with alpha < 0:  cf(z) = exp(-(1/|alpha|) ∫_0^1 Phi(v sigma z) / v dv).
// The v-integral runs over dyadic panels toward 0, which keeps the absolute
// noise bounded for measures whose exponent has a fractional-power origin.
class StationaryCf {
public:
    StationaryCf(double alpha, double sigma, const LevyTriplet& triplet,
                 double exponent_tol = 1e-9);

    std::complex<double> operator()(double z) const;

    double alpha() const { return alpha_; }
    double sigma() const { return sigma_; }
    const LevyTriplet& triplet() const { return triplet_; }

private:
    double alpha_, sigma_;
    LevyTriplet triplet_;
    double tol_;
};

struct InversionOptions {
    double cf_floor = 1e-10;  // truncate where |cf| has decayed below this
    double step_tol = 1e-6;   // agreement between successive step refinements
    double z_budget = 2.0e6;  // SlowDecay when the floor is not reached by here
    int max_refinements = 18;
};

// Gil-Pelaez inversion F(x) = 1/2 - (1/pi) ∫_0^inf Im(e^{-izx} cf(z))/z dz,
// trapezoid with dyadic step refinement; result clamped to [0,1] and
// monotonized along x_grid.
std::vector<double> invert_to_cdf(const std::function<std::complex<double>(double)>& cf,
                                  const std::vector<double>& x_grid,
                                  const InversionOptions& opts = {});

// ∫ e^{lambda x} pi~(dx) for the stationary law of the fixed-regime process;
// +infinity when the exponential tail diverges. Finiteness is decided
// symbolically per family before any quadrature runs.
double exp_moment(double lambda, double alpha, double sigma, const LevyTriplet& triplet,
                  double abs_tol = 1e-10);

// CDF table export: header "x,F", UTF-8, LF.
void write_cdf_csv(const std::vector<double>& x_grid, const std::vector<double>& cdf,
                   std::ostream& os);

}  // namespace rsou
