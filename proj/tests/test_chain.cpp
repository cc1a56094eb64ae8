#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

#include "rsou/chain.hpp"
#include "rsou/errors.hpp"
#include "rsou/rng.hpp"

using namespace rsou;

namespace {

Eigen::MatrixXd two_state() {
    Eigen::MatrixXd q(2, 2);
    q << -1.0, 1.0, 2.0, -2.0;
    return q;
}

// random conservative irreducible rate matrix with all positive off-diagonals
Eigen::MatrixXd random_chain(int n, RngStream& rng) {
    Eigen::MatrixXd q(n, n);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            q(i, j) = 0.1 + 2.0 * rng.uniform01();
            row += q(i, j);
        }
        q(i, i) = -row;
    }
    return q;
}

}  // namespace

TEST_CASE("irreducibility is strong connectivity of the rate graph") {
    CHECK(is_irreducible(two_state()));

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(4, 4);
    block(0, 1) = 1.0; block(1, 0) = 1.0;
    block(2, 3) = 1.0; block(3, 2) = 1.0;
    block.diagonal() << -1.0, -1.0, -1.0, -1.0;
    CHECK(!is_irreducible(block));

    Eigen::MatrixXd cycle = Eigen::MatrixXd::Zero(3, 3);
    cycle(0, 1) = 1.0; cycle(1, 2) = 0.5; cycle(2, 0) = 2.0;
    cycle.diagonal() << -1.0, -0.5, -2.0;
    CHECK(is_irreducible(cycle));
}

TEST_CASE("stationary law: two-state balance and three-state symmetry") {
    const StationaryLaw law = stationary_distribution(two_state());
    CHECK(std::fabs(law.mu(0) - 2.0 / 3.0) <= 1e-15);
    CHECK(std::fabs(law.mu(1) - 1.0 / 3.0) <= 1e-15);

    Eigen::MatrixXd sym = Eigen::MatrixXd::Ones(3, 3);
    sym.diagonal().setConstant(-2.0);
    const StationaryLaw s3 = stationary_distribution(sym);
    for (int i = 0; i < 3; ++i) CHECK(s3.mu(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("stationary law matches the matrix-exponential oracle on random chains") {
    RngStream rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd q = random_chain(4, rng);
        const StationaryLaw law = stationary_distribution(q);
        CHECK((law.mu.transpose() * q).cwiseAbs().maxCoeff() <= 1e-12);

        // brute force: rows of e^{TQ} at large T (scaling-and-squaring)
        const Eigen::MatrixXd pt = (q * 1e4).exp();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(std::fabs(pt(i, j) - law.mu(j)) < 1e-8);
    }
}

TEST_CASE("stationary law rejects a reducible rate matrix") {
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(4, 4);
    block(0, 1) = 1.0; block(1, 0) = 1.0;
    block(2, 3) = 1.0; block(3, 2) = 1.0;
    block.diagonal() << -1.0, -1.0, -1.0, -1.0;
    try {
        stationary_distribution(block);
        FAIL_CHECK("expected SingularSystem");
    } catch (const Error& e) {
        CHECK(e.code() == "SingularSystem");
    }
}

TEST_CASE("chain path sampling: holding times, occupation, determinism") {
    const Eigen::MatrixXd q = two_state();

    // mean Exp(1) holding time in state 1
    {
        RngStream rng(7);
        double total = 0.0;
        long count = 0;
        double t_last;
        const ChainPath path = sample_chain_path(q, 0, 2.0e5, rng);
        t_last = 0.0;
        for (std::size_t k = 0; k < path.switch_times.size(); ++k) {
            if (path.states[k] == 0) {
                total += path.switch_times[k] - t_last;
                ++count;
            }
            t_last = path.switch_times[k];
        }
        CHECK(count > 50000);
        CHECK(std::fabs(total / count - 1.0) < 0.01);
    }

    // ergodic occupation fraction over a long horizon
    {
        RngStream rng(8);
        const double horizon = 1e5;
        const ChainPath path = sample_chain_path(q, 0, horizon, rng);
        double in_state0 = 0.0, t_last = 0.0;
        for (std::size_t k = 0; k < path.switch_times.size(); ++k) {
            if (path.states[k] == 0) in_state0 += path.switch_times[k] - t_last;
            t_last = path.switch_times[k];
        }
        if (path.states.back() == 0) in_state0 += horizon - t_last;
        CHECK(std::fabs(in_state0 / horizon - 2.0 / 3.0) < 0.02);
    }

    // degenerate horizon
    {
        RngStream rng(9);
        const ChainPath path = sample_chain_path(q, 1, 0.0, rng);
        CHECK(path.states.size() == 1);
        CHECK(path.states[0] == 1);
        CHECK(path.switch_times.empty());
    }

    // byte-for-byte determinism
    {
        RngStream a(123, 5), b(123, 5);
        const ChainPath pa = sample_chain_path(q, 0, 50.0, a);
        const ChainPath pb = sample_chain_path(q, 0, 50.0, b);
        CHECK(pa.states == pb.states);
        REQUIRE(pa.switch_times.size() == pb.switch_times.size());
        for (std::size_t k = 0; k < pa.switch_times.size(); ++k)
            CHECK(pa.switch_times[k] == pb.switch_times[k]);
    }

    // structural invariants on random chains
    {
        RngStream rng(10);
        for (int trial = 0; trial < 10; ++trial) {
            const Eigen::MatrixXd qq = random_chain(3 + trial % 4, rng);
            const ChainPath path = sample_chain_path(qq, 0, 100.0, rng);
            CHECK(path.states.size() == path.switch_times.size() + 1);
            for (std::size_t k = 0; k < path.switch_times.size(); ++k) {
                CHECK(path.switch_times[k] < path.horizon);
                if (k > 0) CHECK(path.switch_times[k] > path.switch_times[k - 1]);
                CHECK(path.states[k + 1] != path.states[k]);
            }
        }
    }
}

TEST_CASE("ergodic occupation matches the stationary law on a random chain") {
    RngStream rng(31337);
    const Eigen::MatrixXd q = random_chain(5, rng);
    const StationaryLaw law = stationary_distribution(q);
    const double horizon = 1e5;
    const ChainPath path = sample_chain_path(q, 2, horizon, rng);
    Eigen::VectorXd occ = Eigen::VectorXd::Zero(5);
    double t_last = 0.0;
    for (std::size_t k = 0; k < path.switch_times.size(); ++k) {
        occ(path.states[k]) += path.switch_times[k] - t_last;
        t_last = path.switch_times[k];
    }
    occ(path.states.back()) += horizon - t_last;
    occ /= horizon;
    for (int i = 0; i < 5; ++i) CHECK(std::fabs(occ(i) - law.mu(i)) < 0.02);
}
