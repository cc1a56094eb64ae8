#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rsou/rng.hpp"

namespace rsou {

struct ChainPath {
    std::vector<double> switch_times;  // strictly increasing, < horizon
    std::vector<int> states;           // one more entry than switch_times
    double horizon = 0.0;
};

struct StationaryLaw {
    Eigen::VectorXd mu;  // entries > 0, sums to 1, residual ||mu Q||_inf <= 1e-12
};

// Strong connectivity of the directed graph { (i,j) : q_ij > 0 }.
bool is_irreducible(const Eigen::MatrixXd& q);

// Solves mu Q = 0, sum(mu) = 1 by a dense solve with the normalization row
// replacing one equation, plus one step of iterative refinement.
// Throws Numerical/SingularSystem for a non-irreducible or malformed Q.
StationaryLaw stationary_distribution(const Eigen::MatrixXd& q);

// Standard jump-chain / holding-time construction: Exp(-q_ii) holding times,
// next state picked proportional to q_ij.
ChainPath sample_chain_path(const Eigen::MatrixXd& q, int i0, double horizon,
                            RngStream& rng);

}  // namespace rsou
