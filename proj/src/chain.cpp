#include "rsou/chain.hpp"

#include <cmath>
#include <string>

#include "rsou/errors.hpp"

namespace rsou {

namespace {

void reachability(const Eigen::MatrixXd& q, bool transpose, std::vector<char>& seen) {
    const int n = static_cast<int>(q.rows());
    std::vector<int> stack{0};
    seen.assign(n, 0);
    seen[0] = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            if (seen[j]) continue;
            const double rate = transpose ? q(j, i) : q(i, j);
            if (i != j && rate > 0.0) {
                seen[j] = 1;
                stack.push_back(j);
            }
        }
    }
}

}  // namespace

bool is_irreducible(const Eigen::MatrixXd& q) {
    std::vector<char> seen;
    reachability(q, false, seen);
    for (char s : seen)
        if (!s) return false;
    reachability(q, true, seen);
    for (char s : seen)
        if (!s) return false;
    return true;
}

StationaryLaw stationary_distribution(const Eigen::MatrixXd& q) {
    const int n = static_cast<int>(q.rows());
    if (n < 1 || q.cols() != n)
        throw_numerical("SingularSystem", "Q must be square");
    if (n > 64)
        throw_config("StateCountTooLarge", "dense solver caps N at 64");

    // mu Q = 0 transposed, with the last equation replaced by normalization
    Eigen::MatrixXd a = q.transpose();
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible())
        throw_numerical("SingularSystem", "rate matrix does not determine a unique law");
    Eigen::VectorXd mu = lu.solve(b);
    mu += lu.solve(b - a * mu);  // one refinement pass
    mu /= mu.sum();

    const double residual = (mu.transpose() * q).cwiseAbs().maxCoeff();
    if (!(residual <= 1e-12))
        throw_numerical("SingularSystem",
                        "stationary residual " + std::to_string(residual) + " above 1e-12");
    if (mu.minCoeff() <= 0.0)
        throw_numerical("SingularSystem", "stationary law has a nonpositive entry");
    return StationaryLaw{std::move(mu)};
}

ChainPath sample_chain_path(const Eigen::MatrixXd& q, int i0, double horizon,
                            RngStream& rng) {
    const int n = static_cast<int>(q.rows());
    ChainPath path;
    path.horizon = horizon;
    path.states.push_back(i0);
    double t = 0.0;
    int state = i0;
    while (true) {
        const double rate = -q(state, state);
        if (!(rate > 0.0)) break;  // absorbing; cannot happen for irreducible Q
        const double hold = rng.exponential(rate);
        if (t + hold >= horizon) break;
        t += hold;
        double u = rng.uniform01() * rate;
        int next = state;
        for (int j = 0; j < n; ++j) {
            if (j == state) continue;
            u -= q(state, j);
            if (u < 0.0) {
                next = j;
                break;
            }
        }
        if (next == state) {  // guard against accumulated rounding in the scan
            for (int j = n - 1; j >= 0; --j) {
                if (j != state && q(state, j) > 0.0) {
                    next = j;
                    break;
                }
            }
        }
        path.switch_times.push_back(t);
        path.states.push_back(next);
        state = next;
    }
    return path;
}

}  // namespace rsou
