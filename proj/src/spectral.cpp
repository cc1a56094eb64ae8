#include "rsou/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "rsou/errors.hpp"

namespace rsou {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKappaTol = 1e-8;
}  // namespace

Eigen::MatrixXd build_qp(const Eigen::MatrixXd& q, const Eigen::VectorXd& alpha, double p) {
    Eigen::MatrixXd qp = q;
    qp.diagonal() += p * alpha;
    return qp;
}

double eta_p(const Eigen::MatrixXd& q, const Eigen::VectorXd& alpha, double p) {
    if (q.rows() > 64) throw_config("StateCountTooLarge", "dense solver caps N at 64");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(build_qp(q, alpha, p), false);
    if (solver.info() != Eigen::Success)
        throw_numerical("EigensolverFailure", "dense eigensolver did not converge");
    return -solver.eigenvalues().real().maxCoeff();
}

double kappa_upper_bound(const Eigen::MatrixXd& q, const Eigen::VectorXd& alpha) {
    double bound = kInf;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (alpha(i) > 0.0) bound = std::min(bound, -q(i, i) / alpha(i));
    }
    return bound;
}

KappaResult kappa(const Eigen::MatrixXd& q, const Eigen::VectorXd& alpha) {
    if (alpha.maxCoeff() <= 0.0) return KappaResult::infinite();

    const double p_max = kappa_upper_bound(q, alpha);
    if (eta_p(q, alpha, p_max) >= 0.0)
        throw_numerical("BracketFailure",
                        "eta at the upper bound is nonnegative, contradicting the "
                        "kappa bound");

    // Descending probe for a point with eta > 0. The spectral abscissa of
    // Q + p diag(alpha) is convex in p and vanishes at p = 0, so an all-
    // nonpositive probe sequence means the positivity set is empty.
    double lo = -1.0;
    for (int j = 1; j <= 60; ++j) {
        const double p = std::ldexp(p_max, -j);
        if (eta_p(q, alpha, p) > 0.0) {
            lo = p;
            break;
        }
    }
    if (lo < 0.0) return KappaResult::degenerate();

    double hi = p_max;
    while (hi - lo > kKappaTol) {
        const double mid = 0.5 * (lo + hi);
        (eta_p(q, alpha, mid) > 0.0 ? lo : hi) = mid;
    }
    return KappaResult::finite(0.5 * (lo + hi));
}

SpectralReport spectral_report(const Eigen::MatrixXd& q, const Eigen::VectorXd& alpha,
                               double p) {
    SpectralReport rep;
    rep.p = p;
    rep.eta_p = eta_p(q, alpha, p);
    rep.kappa = kappa(q, alpha);
    rep.kappa_upper_bound = kappa_upper_bound(q, alpha);
    return rep;
}

}  // namespace rsou
