#include "rsou/model.hpp"

#include <cmath>
#include <string>

#include "rsou/chain.hpp"
#include "rsou/errors.hpp"

namespace rsou {

RegimeModel validate_model(const ModelDescription& desc) {
    if (desc.n < 2) throw_config("StateCountTooSmall", "need at least 2 regimes");
    if (desc.n > 64) throw_config("StateCountTooLarge", "dense solver caps N at 64");
    const int n = desc.n;
    if (static_cast<int>(desc.q.size()) != n)
        throw_config("DimensionMismatch", "Q must have N rows");
    if (static_cast<int>(desc.alpha.size()) != n)
        throw_config("DimensionMismatch", "alpha length must equal N");
    if (static_cast<int>(desc.sigma.size()) != n)
        throw_config("DimensionMismatch", "sigma length must equal N");

    RegimeModel model;
    model.n = n;
    model.q.resize(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(desc.q[i].size()) != n)
            throw_config("DimensionMismatch", "Q row " + std::to_string(i) + " must have N entries");
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = desc.q[i][j];
            if (!std::isfinite(v))
                throw_config("InvalidRate", "Q entries must be finite");
            if (i != j && v < 0.0)
                throw_config("NegativeOffDiagonal",
                             "q[" + std::to_string(i) + "][" + std::to_string(j) + "] < 0");
            model.q(i, j) = v;
            row_sum += v;
        }
        if (std::fabs(row_sum) > 1e-12)
            throw_config("RowSumViolation",
                         "row " + std::to_string(i) + " of Q sums to " + std::to_string(row_sum));
    }
    model.alpha.resize(n);
    model.sigma.resize(n);
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(desc.alpha[i]) || !std::isfinite(desc.sigma[i]))
            throw_config("InvalidCoefficient", "alpha and sigma must be finite");
        model.alpha(i) = desc.alpha[i];
        model.sigma(i) = desc.sigma[i];
    }
    if (!(desc.triplet.a > 0.0) || !std::isfinite(desc.triplet.a))
        throw_config("NonPositiveA", "Gaussian coefficient a must be positive");
    if (!std::isfinite(desc.triplet.b))
        throw_config("InvalidCoefficient", "drift b must be finite");
    validate_measure(desc.triplet.measure);
    model.triplet = desc.triplet;

    if (!is_irreducible(model.q))
        throw_config("NotIrreducible", "rate graph of Q is not strongly connected");
    return model;
}

IntegrabilityReport classify_integrability(const LevyMeasureSpec& measure,
                                           const Eigen::VectorXd& sigma) {
    IntegrabilityReport rep;
    rep.cond_13 = true;  // guaranteed by validate_measure for every family
    rep.cond_a1 = has_log_moment(measure);
    rep.cond_a15 = has_abs_square_moment(measure);

    rep.cond_a2_per_state.resize(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        rep.cond_a2_per_state[i] = exp_tail_diverges_all_lambda(measure, sigma(i));

    // largest dyadic lambda0 certifying the uniform exponential-moment bound
    for (int k = 10; k >= -10; --k) {
        const double lambda0 = std::ldexp(1.0, k);
        bool ok = true;
        for (Eigen::Index i = 0; i < sigma.size() && ok; ++i) {
            const double coeff = lambda0 * std::fabs(sigma(i));
            if (coeff > 0.0 && !abs_exp_tail_finite(measure, coeff)) ok = false;
        }
        if (ok) {
            rep.cond_a4_lambda0 = lambda0;
            break;
        }
    }
    return rep;
}

}  // namespace rsou
