#pragma once

#include <cmath>
#include <complex>

namespace rsou {

// Stable evaluation of (e^w - 1), (e^w - 1 - w) and (e^w - 1 - w)/w^2 for
// complex w. Near zero the naive forms lose all significant digits; the
// measure integrals lean on these in their singular regions.

inline std::complex<double> cexpm1(std::complex<double> w) {
    if (std::abs(w) < 1e-4) {
        // w + w^2/2 + w^3/6 + w^4/24
        return w * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0))));
    }
    return std::exp(w) - 1.0;
}

// (e^w - 1 - w)/w^2 = sum_k w^k/(k+2)!; equals 1/2 at w = 0. The direct form
// cancels catastrophically for small |w|, so the series carries to 0.25 where
// the subtraction is safe to ~1e-14 relative.
namespace detail {
inline constexpr double kE2Coeff[] = {
    1.0 / 2,          1.0 / 6,           1.0 / 24,           1.0 / 120,
    1.0 / 720,        1.0 / 5040,        1.0 / 40320,        1.0 / 362880,
    1.0 / 3628800,    1.0 / 39916800,    1.0 / 479001600,    1.0 / 6227020800.0,
    1.0 / 87178291200.0, 1.0 / 1307674368000.0};
}

inline std::complex<double> cexpm1m_over_w2(std::complex<double> w) {
    if (std::abs(w) < 0.25) {
        std::complex<double> acc(detail::kE2Coeff[13], 0.0);
        for (int k = 12; k >= 0; --k) acc = acc * w + detail::kE2Coeff[k];
        return acc;
    }
    return (std::exp(w) - 1.0 - w) / (w * w);
}

inline std::complex<double> cexpm1m(std::complex<double> w) {
    return cexpm1m_over_w2(w) * w * w;
}

// Real counterparts.
inline double expm1m_over_x2(double x) {
    if (std::fabs(x) < 0.25) {
        double acc = detail::kE2Coeff[13];
        for (int k = 12; k >= 0; --k) acc = acc * x + detail::kE2Coeff[k];
        return acc;
    }
    return (std::expm1(x) - x) / (x * x);
}

inline double expm1m(double x) { return expm1m_over_x2(x) * x * x; }

inline double norm_pdf(double x) {
    return 0.3989422804014326779399461 * std::exp(-0.5 * x * x);
}

inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244008444);
}

// Inverse standard normal CDF (defined in special.cpp via Boost).
double norm_quantile(double p);

}  // namespace rsou
