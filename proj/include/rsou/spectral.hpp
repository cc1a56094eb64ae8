#pragma once

#include <Eigen/Dense>

namespace rsou {

// Moment index machinery for the switching tail: Q_p = Q + p diag(alpha),
// eta_p = -(spectral abscissa of Q_p), kappa = sup { p > 0 : eta_p > 0 }.

struct KappaResult {
    enum class Kind { Finite, Infinite, Degenerate } kind = Kind::Infinite;
    double value = 0.0;  // meaningful only for Finite

    static KappaResult finite(double v) { return {Kind::Finite, v}; }
    static KappaResult infinite() { return {Kind::Infinite, 0.0}; }
    // positivity set of eta_p empty (e.g. all alpha equal and positive);
    // the tail classifier treats this as kappa -> 0
    static KappaResult degenerate() { return {Kind::Degenerate, 0.0}; }
};

struct SpectralReport {
    double p = 2.0;      // reference moment order the eta value below refers to
    double eta_p = 0.0;
    KappaResult kappa;
    double kappa_upper_bound = 0.0;  // min { q_i / alpha_i : alpha_i > 0 }, inf if none
};

Eigen::MatrixXd build_qp(const Eigen::MatrixXd& q, const Eigen::VectorXd& alpha, double p);

// Negated spectral abscissa of Q_p via a dense nonsymmetric eigensolver.
double eta_p(const Eigen::MatrixXd& q, const Eigen::VectorXd& alpha, double p);

// Bisection of the eta_p sign change on (0, upper bound), absolute tolerance
// 1e-8. Throws Numerical/BracketFailure when eta at the upper bound is >= 0
// (would contradict the bound and points at an eigensolver problem).
KappaResult kappa(const Eigen::MatrixXd& q, const Eigen::VectorXd& alpha);

double kappa_upper_bound(const Eigen::MatrixXd& q, const Eigen::VectorXd& alpha);

SpectralReport spectral_report(const Eigen::MatrixXd& q, const Eigen::VectorXd& alpha,
                               double p = 2.0);

}  // namespace rsou
