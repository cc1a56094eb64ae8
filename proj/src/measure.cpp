#include "rsou/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsou/errors.hpp"
#include "rsou/quad.hpp"
#include "rsou/special.hpp"

namespace rsou {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using cplx = std::complex<double>;

// ---- objects shared by the tempered-power-law and Pareto paths --------------

// T(from, w, beta) = ∫_from^inf e^{wz} z^{-1-beta} dz for Re w <= 0, beta > 0.
//
// When the oscillation |Im w| dominates the decay |Re w|, the ray is rotated
// onto from + i·sgn(Im w)·y, where the integrand decays like e^{-|Im w| y} and
// the residual oscillation rate |Re w| is below the decay rate. Either way the
// oscillation-to-decay ratio stays <= 1 and the dyadic panels converge fast.
cplx tail_exp_integral(double from, cplx w, double beta, double tol) {
    if (w == 0.0) {
        return std::pow(from, -beta) / beta;
    }
    const double re = w.real(), im = w.imag();
    if (std::abs(im) <= std::abs(re) || im == 0.0) {
        auto fre = [&](double z) {
            return std::exp(re * z) * std::cos(im * z) * std::pow(z, -1.0 - beta);
        };
        auto fim = [&](double z) {
            return std::exp(re * z) * std::sin(im * z) * std::pow(z, -1.0 - beta);
        };
        auto vr = integrate_dyadic_up(fre, from, tol, 220, 1e300);
        auto vi = integrate_dyadic_up(fim, from, tol, 220, 1e300);
        if (vr.outcome != DyadicOutcome::Converged || vi.outcome != DyadicOutcome::Converged) {
            throw_numerical("QuadratureBudgetExceeded", "Levy tail integral did not settle");
        }
        return {vr.value, vi.value};
    }
    // rotated ray: i s e^{w·from} ∫_0^inf e^{(isw) y} (from + isy)^{-1-beta} dy
    const double s = (im > 0.0) ? 1.0 : -1.0;
    const cplx isw = cplx(0.0, s) * w;  // Re = -|im| < 0
    auto integrand = [&](double y) -> cplx {
        return std::exp(isw * y) * std::pow(cplx(from, s * y), -1.0 - beta);
    };
    const double scale = 1.0 / std::abs(im);
    auto fre = [&](double y) { return integrand(y).real(); };
    auto fim = [&](double y) { return integrand(y).imag(); };
    double head_re = quad_finite(fre, 0.0, scale, tol);
    double head_im = quad_finite(fim, 0.0, scale, tol);
    auto tr = integrate_dyadic_up(fre, scale, tol, 220, 1e300);
    auto ti = integrate_dyadic_up(fim, scale, tol, 220, 1e300);
    if (tr.outcome != DyadicOutcome::Converged || ti.outcome != DyadicOutcome::Converged) {
        throw_numerical("QuadratureBudgetExceeded", "rotated Levy tail integral did not settle");
    }
    const cplx ray(head_re + tr.value, head_im + ti.value);
    return cplx(0.0, s) * std::exp(w * from) * ray;
}

// integer power for the z = t^m map on [0,1]; the substituted integrand
// carries t^{m(2-beta)-1} with exponent >= 3, so it is C^3 at the origin
int near_map_power(double beta) {
    return static_cast<int>(std::ceil(4.0 / (2.0 - beta)));
}

// ∫_0^1 (1 - e^{iuz} + iuz) z^{-1-beta} e^{-theta z} dz via z = t^m:
// the combined fragment equals u^2 z^2 E2(iuz), which soaks up the density
// singularity for every beta in (0,2).
cplx tpl_near_cf(cplx u, double beta, double theta, double tol) {
    if (u == 0.0) return 0.0;
    const int m = near_map_power(beta);
    const double k = m * (2.0 - beta) - 1.0;
    const cplx iu(-u.imag(), u.real());
    auto val = [&](double t) -> cplx {
        const double z = std::pow(t, m);
        // sign: 1 - e^w + w = -w^2 E2(w); with w = iuz this is +u^2 z^2 E2
        return static_cast<double>(m) * (u * u) * std::pow(t, k) *
               cexpm1m_over_w2(iu * z) * std::exp(-theta * z);
    };
    auto fre = [&](double t) { return val(t).real(); };
    auto fim = [&](double t) { return val(t).imag(); };
    return {quad_finite(fre, 0.0, 1.0, tol), quad_finite(fim, 0.0, 1.0, tol)};
}

// ∫_1^inf (1 - e^{iuz}) z^{-1-beta} e^{-theta z} dz
cplx tpl_tail_cf(cplx u, double beta, double theta, double tol) {
    if (u == 0.0) return 0.0;
    const cplx g0 = tail_exp_integral(1.0, cplx(-theta, 0.0), beta, tol);
    const cplx w = cplx(0.0, 1.0) * u - theta;  // iu - theta
    return g0 - tail_exp_integral(1.0, w, beta, tol);
}

// one-sided (positive half-line) Levy-Khintchine fragment for density
// z^{-1-beta} e^{-theta z}
cplx tpl_side_cf(cplx u, double beta, double theta, double tol) {
    return tpl_near_cf(u, beta, theta, tol) + tpl_tail_cf(u, beta, theta, tol);
}

// real-exponential analogues -------------------------------------------------

// ∫_0^1 (e^{cz} - 1 - cz) z^{-1-beta} e^{-theta z} dz
double tpl_near_exp(double c, double beta, double theta, double tol) {
    if (c == 0.0) return 0.0;
    const int m = near_map_power(beta);
    const double k = m * (2.0 - beta) - 1.0;
    auto f = [&](double t) {
        const double z = std::pow(t, m);
        return m * c * c * std::pow(t, k) * expm1m_over_x2(c * z) * std::exp(-theta * z);
    };
    return quad_finite(f, 0.0, 1.0, tol);
}

// ∫_1^inf (e^{cz} - 1) z^{-1-beta} e^{-theta z} dz, requires c <= theta
double tpl_tail_exp(double c, double beta, double theta, double tol) {
    if (c == 0.0) return 0.0;
    const double g0 = tail_exp_integral(1.0, cplx(-theta, 0.0), beta, tol).real();
    const double gc = tail_exp_integral(1.0, cplx(c - theta, 0.0), beta, tol).real();
    return gc - g0;
}

// ---- truncated moments of the jump distributions ----------------------------

double normal_prob_between(const GaussianJump& g, double a, double b) {
    return norm_cdf((b - g.mean) / g.sd) - norm_cdf((a - g.mean) / g.sd);
}

double normal_mean_between(const GaussianJump& g, double a, double b) {
    const double al = (a - g.mean) / g.sd, be = (b - g.mean) / g.sd;
    return g.mean * (norm_cdf(be) - norm_cdf(al)) - g.sd * (norm_pdf(be) - norm_pdf(al));
}

double normal_m2_between(const GaussianJump& g, double a, double b) {
    const double al = (a - g.mean) / g.sd, be = (b - g.mean) / g.sd;
    const double dphi = norm_cdf(be) - norm_cdf(al);
    const double dp = norm_pdf(be) - norm_pdf(al);
    const double t_int = dphi + (al * norm_pdf(al) - be * norm_pdf(be));
    return g.mean * g.mean * dphi - 2.0 * g.mean * g.sd * dp + g.sd * g.sd * t_int;
}

// ∫_a^b z r e^{-rz} dz on [0, inf)
double exp_mean_between(double r, double a, double b) {
    auto prim = [&](double x) { return (x + 1.0 / r) * std::exp(-r * x); };
    return prim(a) - prim(b);
}

// ∫_a^b z^2 r e^{-rz} dz
double exp_m2_between(double r, double a, double b) {
    auto prim = [&](double x) {
        return (x * x + 2.0 * x / r + 2.0 / (r * r)) * std::exp(-r * x);
    };
    return prim(a) - prim(b);
}

double pareto_weight(ParetoSide s, bool plus) {
    switch (s) {
        case ParetoSide::Plus: return plus ? 1.0 : 0.0;
        case ParetoSide::Minus: return plus ? 0.0 : 1.0;
        case ParetoSide::Both: return 0.5;
    }
    return 0.0;
}

// E[J; lo <= J < hi] over the one-sided Pareto magnitude law on [s, inf)
double pareto_mean_between(const ParetoJump& p, double lo, double hi) {
    const double a = std::max(lo, p.scale);
    if (!(hi > a)) return 0.0;
    const double k = p.beta * std::pow(p.scale, p.beta);
    if (p.beta == 1.0) return k * std::log(hi / a);
    return k * (std::pow(hi, 1.0 - p.beta) - std::pow(a, 1.0 - p.beta)) / (1.0 - p.beta);
}

// characteristic / moment generating values of the jump laws ------------------

cplx gaussian_cf(const GaussianJump& g, cplx u) {
    return std::exp(cplx(0.0, 1.0) * u * g.mean - 0.5 * u * u * g.sd * g.sd);
}

cplx two_sided_exp_cf(const TwoSidedExponentialJump& e, cplx u) {
    const cplx iu(-u.imag(), u.real());
    cplx v = 0.0;
    if (e.weight_pos > 0.0) v += e.weight_pos * e.rate_pos / (e.rate_pos - iu);
    if (e.weight_pos < 1.0) v += (1.0 - e.weight_pos) * e.rate_neg / (e.rate_neg + iu);
    return v;
}

double two_sided_exp_mean_between(const TwoSidedExponentialJump& e, double lo, double hi) {
    double v = 0.0;
    if (e.weight_pos > 0.0) v += e.weight_pos * exp_mean_between(e.rate_pos, lo, hi);
    if (e.weight_pos < 1.0) v -= (1.0 - e.weight_pos) * exp_mean_between(e.rate_neg, lo, hi);
    return v;
}

cplx pareto_cf(const ParetoJump& p, cplx u, double tol) {
    const double k = p.beta * std::pow(p.scale, p.beta);
    cplx v = 0.0;
    const double wp = pareto_weight(p.side, true), wm = pareto_weight(p.side, false);
    if (wp > 0.0) {
        if (u.imag() < 0.0) throw_numerical("DivergentExponent", "Pareto plus tail has no exponential moments");
        v += wp * k * tail_exp_integral(p.scale, cplx(0.0, 1.0) * u, p.beta, tol);
    }
    if (wm > 0.0) {
        if (u.imag() > 0.0) throw_numerical("DivergentExponent", "Pareto minus tail has no exponential moments");
        v += wm * k * tail_exp_integral(p.scale, cplx(0.0, -1.0) * u, p.beta, tol);
    }
    return v;
}

double jump_mean_between(const JumpDist& d, double lo, double hi) {
    struct V {
        double lo, hi;
        double operator()(const GaussianJump& g) const {
            return normal_mean_between(g, lo, hi) + normal_mean_between(g, -hi, -lo);
        }
        double operator()(const TwoSidedExponentialJump& e) const {
            return two_sided_exp_mean_between(e, lo, hi);
        }
        double operator()(const ParetoJump& p) const {
            const double m = pareto_mean_between(p, lo, hi);
            return (pareto_weight(p.side, true) - pareto_weight(p.side, false)) * m;
        }
        double operator()(const PointMassJump& pm) const {
            const double az = std::fabs(pm.z0);
            return (az >= lo && az < hi) ? pm.z0 : 0.0;
        }
    };
    return std::visit(V{lo, hi}, d);
}

}  // namespace

// ---- validation --------------------------------------------------------------

void validate_measure(const LevyMeasureSpec& m) {
    struct V {
        void operator()(const ZeroMeasure&) const {}
        void operator()(const CompoundPoisson& cp) const {
            if (!(cp.rate > 0.0) || !std::isfinite(cp.rate))
                throw_config("InvalidMeasureParams", "compound Poisson rate must be positive");
            struct J {
                void operator()(const GaussianJump& g) const {
                    if (!(g.sd > 0.0) || !std::isfinite(g.sd) || !std::isfinite(g.mean))
                        throw_config("InvalidMeasureParams", "Gaussian jump needs finite mean and sd > 0");
                }
                void operator()(const TwoSidedExponentialJump& e) const {
                    if (!(e.rate_pos > 0.0) || !(e.rate_neg > 0.0))
                        throw_config("InvalidMeasureParams", "two-sided exponential rates must be positive");
                    if (!(e.weight_pos >= 0.0 && e.weight_pos <= 1.0))
                        throw_config("InvalidMeasureParams", "weight_pos must lie in [0, 1]");
                }
                void operator()(const ParetoJump& p) const {
                    if (!(p.beta > 0.0) || !std::isfinite(p.beta))
                        throw_config("InvalidMeasureParams", "Pareto tail exponent must be positive");
                    if (!(p.scale >= 1.0) || !std::isfinite(p.scale))
                        throw_config("InvalidMeasureParams", "Pareto scale must be >= 1");
                }
                void operator()(const PointMassJump& pm) const {
                    if (!(pm.z0 != 0.0) || !std::isfinite(pm.z0))
                        throw_config("InvalidMeasureParams", "point mass must sit at a nonzero finite z0");
                }
            };
            std::visit(J{}, cp.jump);
        }
        void operator()(const TemperedPowerLaw& t) const {
            if (!(t.c_pos >= 0.0) || !(t.c_neg >= 0.0))
                throw_config("InvalidMeasureParams", "intensity constants must be nonnegative");
            auto side = [](double c, double beta, double theta, const char* which) {
                if (c == 0.0) return;
                if (!(beta > 0.0 && beta < 2.0))
                    throw_config("InvalidMeasureParams",
                                 std::string("stability index beta") + which +
                                     " must lie in (0, 2)");
                if (!(theta >= 0.0) || !std::isfinite(theta))
                    throw_config("InvalidMeasureParams",
                                 std::string("tempering rate theta") + which +
                                     " must be nonnegative");
            };
            side(t.c_pos, t.beta_pos, t.theta_pos, "+");
            side(t.c_neg, t.beta_neg, t.theta_neg, "-");
        }
    };
    std::visit(V{}, m);
}

bool is_structurally_zero(const LevyMeasureSpec& m) {
    if (std::holds_alternative<ZeroMeasure>(m)) return true;
    if (const auto* t = std::get_if<TemperedPowerLaw>(&m))
        return t->c_pos == 0.0 && t->c_neg == 0.0;
    return false;
}

// ---- region integrals ---------------------------------------------------------

double mass_above(const LevyMeasureSpec& m, double eps) {
    struct V {
        double eps;
        double operator()(const ZeroMeasure&) const { return 0.0; }
        double operator()(const CompoundPoisson& cp) const {
            struct J {
                double eps;
                double operator()(const GaussianJump& g) const {
                    return 1.0 - normal_prob_between(g, -eps, eps);
                }
                double operator()(const TwoSidedExponentialJump& e) const {
                    return e.weight_pos * std::exp(-e.rate_pos * eps) +
                           (1.0 - e.weight_pos) * std::exp(-e.rate_neg * eps);
                }
                double operator()(const ParetoJump& p) const {
                    return eps <= p.scale ? 1.0 : std::pow(p.scale / eps, p.beta);
                }
                double operator()(const PointMassJump& pm) const {
                    return std::fabs(pm.z0) >= eps ? 1.0 : 0.0;
                }
            };
            return cp.rate * std::visit(J{eps}, cp.jump);
        }
        double operator()(const TemperedPowerLaw& t) const {
            double v = 0.0;
            if (t.c_pos > 0.0)
                v += t.c_pos *
                     tail_exp_integral(eps, cplx(-t.theta_pos, 0.0), t.beta_pos, 1e-12).real();
            if (t.c_neg > 0.0)
                v += t.c_neg *
                     tail_exp_integral(eps, cplx(-t.theta_neg, 0.0), t.beta_neg, 1e-12).real();
            return v;
        }
    };
    return std::visit(V{eps}, m);
}

double mean_between(const LevyMeasureSpec& m, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    struct V {
        double lo, hi;
        double operator()(const ZeroMeasure&) const { return 0.0; }
        double operator()(const CompoundPoisson& cp) const {
            return cp.rate * jump_mean_between(cp.jump, lo, hi);
        }
        double operator()(const TemperedPowerLaw& t) const {
            double v = 0.0;
            if (t.c_pos > 0.0) {
                auto f = [&](double z) { return std::pow(z, -t.beta_pos) * std::exp(-t.theta_pos * z); };
                v += t.c_pos * quad_finite(f, lo, hi, 1e-12);
            }
            if (t.c_neg > 0.0) {
                auto f = [&](double z) { return std::pow(z, -t.beta_neg) * std::exp(-t.theta_neg * z); };
                v -= t.c_neg * quad_finite(f, lo, hi, 1e-12);
            }
            return v;
        }
    };
    return std::visit(V{lo, hi}, m);
}

double variance_below(const LevyMeasureSpec& m, double eps) {
    struct V {
        double eps;
        double operator()(const ZeroMeasure&) const { return 0.0; }
        double operator()(const CompoundPoisson& cp) const {
            struct J {
                double eps;
                double operator()(const GaussianJump& g) const {
                    return normal_m2_between(g, -eps, eps);
                }
                double operator()(const TwoSidedExponentialJump& e) const {
                    return e.weight_pos * exp_m2_between(e.rate_pos, 0.0, eps) +
                           (1.0 - e.weight_pos) * exp_m2_between(e.rate_neg, 0.0, eps);
                }
                double operator()(const ParetoJump& p) const {
                    if (eps <= p.scale) return 0.0;
                    const double k = p.beta * std::pow(p.scale, p.beta);
                    if (p.beta == 2.0) return 2.0 * p.scale * p.scale * std::log(eps / p.scale);
                    return k * (std::pow(eps, 2.0 - p.beta) - std::pow(p.scale, 2.0 - p.beta)) /
                           (2.0 - p.beta);
                }
                double operator()(const PointMassJump& pm) const {
                    return std::fabs(pm.z0) < eps ? pm.z0 * pm.z0 : 0.0;
                }
            };
            return cp.rate * std::visit(J{eps}, cp.jump);
        }
        double operator()(const TemperedPowerLaw& t) const {
            // ∫_0^eps z^{1-beta} e^{-theta z} dz via z = s^m, integer m
            auto side = [&](double c, double beta, double theta) {
                if (c == 0.0) return 0.0;
                const int m = near_map_power(beta);
                const double k = m * (2.0 - beta) - 1.0;
                const double top = std::pow(eps, 1.0 / m);
                auto f = [&](double s) {
                    return m * std::pow(s, k) * std::exp(-theta * std::pow(s, m));
                };
                return c * quad_finite(f, 0.0, top, 1e-13);
            };
            return side(t.c_pos, t.beta_pos, t.theta_pos) +
                   side(t.c_neg, t.beta_neg, t.theta_neg);
        }
    };
    return std::visit(V{eps}, m);
}

// ---- classifiers ---------------------------------------------------------------

bool has_log_moment(const LevyMeasureSpec& m) {
    struct V {
        bool operator()(const ZeroMeasure&) const { return true; }
        bool operator()(const CompoundPoisson&) const {
            // all supported jump laws have a finite logarithmic moment
            return true;
        }
        bool operator()(const TemperedPowerLaw& t) const {
            // near zero log(1+|z|) ~ |z|, so each active side needs beta < 1
            return (t.c_pos == 0.0 || t.beta_pos < 1.0) &&
                   (t.c_neg == 0.0 || t.beta_neg < 1.0);
        }
    };
    return std::visit(V{}, m);
}

bool has_abs_square_moment(const LevyMeasureSpec& m) {
    struct V {
        bool operator()(const ZeroMeasure&) const { return true; }
        bool operator()(const CompoundPoisson& cp) const {
            struct J {
                bool operator()(const GaussianJump&) const { return true; }
                bool operator()(const TwoSidedExponentialJump&) const { return true; }
                bool operator()(const ParetoJump& p) const { return p.beta > 2.0; }
                bool operator()(const PointMassJump&) const { return true; }
            };
            return std::visit(J{}, cp.jump);
        }
        bool operator()(const TemperedPowerLaw& t) const {
            // |z| near zero forces beta < 1; z^2 in the tail forces tempering
            auto side = [](double c, double beta, double theta) {
                return c == 0.0 || (beta < 1.0 && theta > 0.0);
            };
            return side(t.c_pos, t.beta_pos, t.theta_pos) &&
                   side(t.c_neg, t.beta_neg, t.theta_neg);
        }
    };
    return std::visit(V{}, m);
}

bool exp_tail_finite(const LevyMeasureSpec& m, double c) {
    if (c == 0.0) return true;
    struct V {
        double c;
        bool operator()(const ZeroMeasure&) const { return true; }
        bool operator()(const CompoundPoisson& cp) const {
            struct J {
                double c;
                bool operator()(const GaussianJump&) const { return true; }
                bool operator()(const TwoSidedExponentialJump& e) const {
                    if (c > 0.0) return e.weight_pos == 0.0 || c < e.rate_pos;
                    return e.weight_pos == 1.0 || -c < e.rate_neg;
                }
                bool operator()(const ParetoJump& p) const {
                    if (c > 0.0) return pareto_weight(p.side, true) == 0.0;
                    return pareto_weight(p.side, false) == 0.0;
                }
                bool operator()(const PointMassJump&) const { return true; }
            };
            return std::visit(J{c}, cp.jump);
        }
        bool operator()(const TemperedPowerLaw& t) const {
            // z^{-1-beta} supplies the integrable factor at c == theta, so the
            // boundary is inclusive
            if (c > 0.0) return t.c_pos == 0.0 || c <= t.theta_pos;
            return t.c_neg == 0.0 || -c <= t.theta_neg;
        }
    };
    return std::visit(V{c}, m);
}

bool abs_exp_tail_finite(const LevyMeasureSpec& m, double c) {
    return exp_tail_finite(m, c) && exp_tail_finite(m, -c);
}

bool exp_tail_diverges_all_lambda(const LevyMeasureSpec& m, double sigma) {
    if (sigma == 0.0) return false;
    struct V {
        double sigma;
        bool operator()(const ZeroMeasure&) const { return false; }
        bool operator()(const CompoundPoisson& cp) const {
            struct J {
                double sigma;
                bool operator()(const GaussianJump&) const { return false; }
                bool operator()(const TwoSidedExponentialJump&) const { return false; }
                bool operator()(const ParetoJump& p) const {
                    return pareto_weight(p.side, sigma > 0.0) > 0.0;
                }
                bool operator()(const PointMassJump&) const { return false; }
            };
            return std::visit(J{sigma}, cp.jump);
        }
        bool operator()(const TemperedPowerLaw& t) const {
            if (sigma > 0.0) return t.c_pos > 0.0 && t.theta_pos == 0.0;
            return t.c_neg > 0.0 && t.theta_neg == 0.0;
        }
    };
    return std::visit(V{sigma}, m);
}

// ---- jump integrals --------------------------------------------------------------

std::complex<double> cf_integral(const LevyMeasureSpec& m, std::complex<double> u,
                                 double abs_tol) {
    if (u == 0.0) return 0.0;
    const double lambda_dir = -u.imag();
    if (lambda_dir != 0.0 && !exp_tail_finite(m, lambda_dir)) {
        throw_numerical("DivergentExponent",
                        "exponential direction is not integrable for this measure");
    }
    struct V {
        cplx u;
        double tol;
        cplx operator()(const ZeroMeasure&) const { return 0.0; }
        cplx operator()(const CompoundPoisson& cp) const {
            const cplx iu(-u.imag(), u.real());
            cplx phi;
            struct J {
                cplx u;
                double tol;
                cplx operator()(const GaussianJump& g) const { return gaussian_cf(g, u); }
                cplx operator()(const TwoSidedExponentialJump& e) const {
                    return two_sided_exp_cf(e, u);
                }
                cplx operator()(const ParetoJump& p) const { return pareto_cf(p, u, tol); }
                cplx operator()(const PointMassJump& pm) const {
                    return std::exp(cplx(0.0, 1.0) * u * pm.z0);
                }
            };
            phi = std::visit(J{u, tol}, cp.jump);
            const double comp = jump_mean_between(cp.jump, 0.0, 1.0);
            return cp.rate * (1.0 - phi + iu * comp);
        }
        cplx operator()(const TemperedPowerLaw& t) const {
            cplx v = 0.0;
            if (t.c_pos > 0.0) v += t.c_pos * tpl_side_cf(u, t.beta_pos, t.theta_pos, tol);
            if (t.c_neg > 0.0) v += t.c_neg * tpl_side_cf(-u, t.beta_neg, t.theta_neg, tol);
            return v;
        }
    };
    return std::visit(V{u, abs_tol}, m);
}

double exp_integral(const LevyMeasureSpec& m, double c, double abs_tol) {
    if (c == 0.0) return 0.0;
    if (!exp_tail_finite(m, c)) return kInf;
    struct V {
        double c, tol;
        double operator()(const ZeroMeasure&) const { return 0.0; }
        double operator()(const CompoundPoisson& cp) const {
            struct J {
                double c, tol;
                double operator()(const GaussianJump& g) const {
                    return std::exp(c * g.mean + 0.5 * c * c * g.sd * g.sd);
                }
                double operator()(const TwoSidedExponentialJump& e) const {
                    double v = 0.0;
                    if (e.weight_pos > 0.0) v += e.weight_pos * e.rate_pos / (e.rate_pos - c);
                    if (e.weight_pos < 1.0) v += (1.0 - e.weight_pos) * e.rate_neg / (e.rate_neg + c);
                    return v;
                }
                double operator()(const ParetoJump& p) const {
                    const double k = p.beta * std::pow(p.scale, p.beta);
                    double v = 0.0;
                    const double wp = pareto_weight(p.side, true);
                    const double wm = pareto_weight(p.side, false);
                    if (wp > 0.0)
                        v += wp * k * tail_exp_integral(p.scale, cplx(c, 0.0), p.beta, tol).real();
                    if (wm > 0.0)
                        v += wm * k * tail_exp_integral(p.scale, cplx(-c, 0.0), p.beta, tol).real();
                    return v;
                }
                double operator()(const PointMassJump& pm) const { return std::exp(c * pm.z0); }
            };
            const double mgf = std::visit(J{c, tol}, cp.jump);
            const double comp = jump_mean_between(cp.jump, 0.0, 1.0);
            return cp.rate * (mgf - 1.0 - c * comp);
        }
        double operator()(const TemperedPowerLaw& t) const {
            auto side = [&](double arg, double cc, double beta, double theta) {
                if (cc == 0.0) return 0.0;
                return cc * (tpl_near_exp(arg, beta, theta, tol) +
                             tpl_tail_exp(arg, beta, theta, tol));
            };
            return side(c, t.c_pos, t.beta_pos, t.theta_pos) +
                   side(-c, t.c_neg, t.beta_neg, t.theta_neg);
        }
    };
    return std::visit(V{c, abs_tol}, m);
}

double nu_integral(const LevyMeasureSpec& m, const std::function<double(double)>& g,
                   double abs_tol) {
    struct V {
        const std::function<double(double)>& g;
        double tol;

        static void require_converged(const DyadicResult& r, const char* what) {
            if (r.outcome != DyadicOutcome::Converged)
                throw_numerical("QuadratureBudgetExceeded", what);
        }

        double operator()(const ZeroMeasure&) const { return 0.0; }
        double operator()(const CompoundPoisson& cp) const {
            struct J {
                const std::function<double(double)>& g;
                double tol;
                double operator()(const GaussianJump& gs) const {
                    // the compensator indicator kinks the integrand at |z| = 1
                    auto f = [&](double z) {
                        return g(z) * norm_pdf((z - gs.mean) / gs.sd) / gs.sd;
                    };
                    const double lo = gs.mean - 16.0 * gs.sd, hi = gs.mean + 16.0 * gs.sd;
                    double v = 0.0;
                    double cuts[4] = {lo, -1.0, 1.0, hi};
                    for (int k = 0; k < 3; ++k) {
                        const double a = cuts[k], b = cuts[k + 1];
                        if (b > a) v += quad_finite(f, a, b, tol / 3.0);
                    }
                    return v;
                }
                double operator()(const TwoSidedExponentialJump& e) const {
                    auto side = [&](double w, double r, double sgn) {
                        if (w == 0.0) return 0.0;
                        auto f = [&](double z) { return g(sgn * z) * r * std::exp(-r * z); };
                        double v = quad_finite(f, 0.0, 1.0, tol / 4.0);
                        auto t = integrate_dyadic_up(f, 1.0, tol / 4.0, 200, 1e300);
                        require_converged(t, "exponential-jump expectation did not settle");
                        return w * (v + t.value);
                    };
                    return side(e.weight_pos, e.rate_pos, 1.0) +
                           side(1.0 - e.weight_pos, e.rate_neg, -1.0);
                }
                double operator()(const ParetoJump& p) const {
                    const double k = p.beta * std::pow(p.scale, p.beta);
                    auto side = [&](double w, double sgn) {
                        if (w == 0.0) return 0.0;
                        auto f = [&](double z) { return g(sgn * z) * k * std::pow(z, -1.0 - p.beta); };
                        auto t = integrate_dyadic_up(f, p.scale, tol / 2.0, 40, 1e12);
                        require_converged(t, "integrand grows against the Pareto tail");
                        return w * t.value;
                    };
                    return side(pareto_weight(p.side, true), 1.0) +
                           side(pareto_weight(p.side, false), -1.0);
                }
                double operator()(const PointMassJump& pm) const { return g(pm.z0); }
            };
            return cp.rate * std::visit(J{g, tol}, cp.jump);
        }
        double operator()(const TemperedPowerLaw& t) const {
            auto side = [&](double c, double beta, double theta, double sgn) {
                if (c == 0.0) return 0.0;
                auto f = [&](double z) {
                    return g(sgn * z) * std::pow(z, -1.0 - beta) * std::exp(-theta * z);
                };
                auto near = integrate_dyadic_down(f, 1.0, tol / 4.0, 200);
                require_converged(near, "near-zero jump expectation did not settle");
                auto tail = integrate_dyadic_up(f, 1.0, tol / 4.0, 40, 1e12);
                require_converged(tail, "integrand grows against the tempered tail");
                return c * (near.value + tail.value);
            };
            return side(t.c_pos, t.beta_pos, t.theta_pos, 1.0) +
                   side(t.c_neg, t.beta_neg, t.theta_neg, -1.0);
        }
    };
    return std::visit(V{g, abs_tol}, m);
}

TailProbeResult tail_divergence_probe(const LevyMeasureSpec& m,
                                      const std::function<double(double)>& g) {
    TailProbeResult out;
    if (std::holds_alternative<ZeroMeasure>(m)) {
        out.verdict = ProbeVerdict::Converged;
        return out;
    }
    if (const auto* cp = std::get_if<CompoundPoisson>(&m)) {
        if (const auto* pm = std::get_if<PointMassJump>(&cp->jump)) {
            out.value = std::fabs(pm->z0) >= 1.0 ? cp->rate * g(pm->z0) : 0.0;
            out.verdict = ProbeVerdict::Converged;
            return out;
        }
    }
    // continuous cases: integrate g against the tail density over [1, 2^m]
    auto density = [&](double z) -> double {  // z >= 1, both signs folded in
        if (const auto* cp = std::get_if<CompoundPoisson>(&m)) {
            if (const auto* gs = std::get_if<GaussianJump>(&cp->jump)) {
                return cp->rate * (norm_pdf((z - gs->mean) / gs->sd) * g(z) +
                                   norm_pdf((-z - gs->mean) / gs->sd) * g(-z)) /
                       gs->sd;
            }
            if (const auto* e = std::get_if<TwoSidedExponentialJump>(&cp->jump)) {
                return cp->rate * (e->weight_pos * e->rate_pos * std::exp(-e->rate_pos * z) * g(z) +
                                   (1.0 - e->weight_pos) * e->rate_neg *
                                       std::exp(-e->rate_neg * z) * g(-z));
            }
            if (const auto* p = std::get_if<ParetoJump>(&cp->jump)) {
                if (z < p->scale) return 0.0;
                const double k = p->beta * std::pow(p->scale, p->beta) * std::pow(z, -1.0 - p->beta);
                return cp->rate * k * (pareto_weight(p->side, true) * g(z) +
                                       pareto_weight(p->side, false) * g(-z));
            }
        }
        const auto& t = std::get<TemperedPowerLaw>(m);
        double v = 0.0;
        if (t.c_pos > 0.0)
            v += t.c_pos * std::pow(z, -1.0 - t.beta_pos) * std::exp(-t.theta_pos * z) * g(z);
        if (t.c_neg > 0.0)
            v += t.c_neg * std::pow(z, -1.0 - t.beta_neg) * std::exp(-t.theta_neg * z) * g(-z);
        return v;
    };
    auto r = integrate_dyadic_up(density, 1.0, 1e-10, 40, 1e12);
    out.value = r.value;
    switch (r.outcome) {
        case DyadicOutcome::Converged: out.verdict = ProbeVerdict::Converged; break;
        case DyadicOutcome::ExceededBound: out.verdict = ProbeVerdict::Diverged; break;
        case DyadicOutcome::WindowBudget: out.verdict = ProbeVerdict::Inconclusive; break;
    }
    return out;
}

}  // namespace rsou
