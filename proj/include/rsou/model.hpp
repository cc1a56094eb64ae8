#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "rsou/measure.hpp"

namespace rsou {

struct LevyTriplet {
    double b = 0.0;  // drift
    double a = 1.0;  // Gaussian variance coefficient, > 0
    LevyMeasureSpec measure;
};

// Raw, un-checked model description as read from a config file or built in
// code; validate_model turns it into a RegimeModel.
struct ModelDescription {
    int n = 0;
    std::vector<std::vector<double>> q;  // n rows of n entries, rates per unit time
    std::vector<double> alpha;           // per-regime drift coefficients
    std::vector<double> sigma;           // per-regime noise loadings
    LevyTriplet triplet;
};

// Validated model; immutable after construction, safe to share across workers.
struct RegimeModel {
    int n = 0;
    Eigen::MatrixXd q;
    Eigen::VectorXd alpha;
    Eigen::VectorXd sigma;
    LevyTriplet triplet;
};

// Enforces: N in [2, 64], conservative rows (|row sum| <= 1e-12), nonnegative
// off-diagonal rates, matching alpha/sigma lengths, a > 0, valid measure
// parameters, and irreducibility of the rate graph.
RegimeModel validate_model(const ModelDescription& desc);

struct IntegrabilityReport {
    bool cond_13 = true;    // ∫ (1 ∧ z^2) nu < inf
    bool cond_a1 = true;    // ∫ log(1+|z|) nu < inf
    bool cond_a15 = true;   // ∫ |z| ∨ z^2 nu < inf
    std::vector<bool> cond_a2_per_state;  // all-lambda divergence per regime
    std::optional<double> cond_a4_lambda0;  // largest dyadic witness, or none
};

// Decides every condition analytically for the supported families; the dyadic
// witness grid for the uniform exponential-moment condition is {2^k : k in
// [-10, 10]}.
IntegrabilityReport classify_integrability(const LevyMeasureSpec& measure,
                                           const Eigen::VectorXd& sigma);

}  // namespace rsou
